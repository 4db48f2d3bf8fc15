// Test-only oracles: dense assembly and exhaustive enumeration, all
// deliberately independent of the streaming engine and the DP code paths
// they cross-check.
#pragma once

#include <functional>
#include <vector>

#include "fqlab/chain.hpp"
#include "fqlab/fmat.hpp"

namespace fqlab::testing {

// C_i assembled densely from blocks given in stream order
// (A11, A21, A22, A32, ...). upto = number of leading blocks used = i.
inline FqMatrix assemble_prefix(const FieldPtr& field, int n,
                                const std::vector<FqMatrix>& blocks, int upto) {
  int k = (upto + 1) / 2;          // block columns present
  int rows = (upto % 2 == 0) ? k + 1 : k;  // C_{2k} has an extra block row
  FqMatrix m(field, rows * n, k * n);
  for (int idx = 0; idx < upto; ++idx) {
    int j = idx / 2;                       // block column
    int i = (idx % 2 == 0) ? j : j + 1;    // diagonal or subdiagonal
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) m.at(i * n + a, j * n + b) = blocks[idx].at(a, b);
  }
  return m;
}

inline std::vector<int> dense_prefix_ranks(const FieldPtr& field, int n,
                                           const std::vector<FqMatrix>& blocks) {
  std::vector<int> out;
  for (int upto = 1; upto <= (int)blocks.size(); ++upto)
    out.push_back(rank(assemble_prefix(field, n, blocks, upto)));
  return out;
}

// Exhaustive corank census over every assignment of the free entries of a
// matrix builder: fill(code) must write all free entries from the base-q
// digits of code. Returns the exact corank pmf.
inline RationalPmf corank_census(int q, int free_entries,
                                 const std::function<FqMatrix(long long)>& build) {
  long long total = 1;
  for (int i = 0; i < free_entries; ++i) total *= q;
  std::vector<long long> counts;
  for (long long code = 0; code < total; ++code) {
    FqMatrix m = build(code);
    int corank = m.cols() - rank(m);
    if ((int)counts.size() <= corank) counts.resize(corank + 1, 0);
    counts[corank]++;
  }
  RationalPmf out;
  out.weights.reserve(counts.size());
  for (long long c : counts) out.weights.push_back(Rational(c, total));
  return out;
}

}  // namespace fqlab::testing
