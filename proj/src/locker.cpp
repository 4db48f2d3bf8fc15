#include "fqlab/locker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fqlab {

namespace {

int block_count(const FqMatrix& m, int n) {
  if (n < 1 || m.cols() % n != 0) throw BadLength("columns not divisible by block size");
  return m.cols() / n;
}

// Can a kernel vector be truncated at a support gap and stay in the kernel?
// Sufficient condition: for every gap position c, the rows touched by block
// columns < c and the rows touched by block columns > c are disjoint. Block
// row ranges are used, which is conservative; a false negative only routes
// the query to the enumeration fallback.
bool interval_reduction_valid(const FqMatrix& m, int n, int blocks) {
  const long long none_lo = std::numeric_limits<long long>::max();
  std::vector<long long> minrow(blocks, none_lo), maxrow(blocks, -1);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m.at(i, j)) {
        int b = j / n;
        minrow[b] = std::min(minrow[b], (long long)i);
        maxrow[b] = std::max(maxrow[b], (long long)i);
      }
  // prefix max of maxrow, suffix min of minrow
  std::vector<long long> pre(blocks), suf(blocks);
  long long acc = -1;
  for (int b = 0; b < blocks; ++b) {
    acc = std::max(acc, maxrow[b]);
    pre[b] = acc;
  }
  acc = none_lo;
  for (int b = blocks - 1; b >= 0; --b) {
    acc = std::min(acc, minrow[b]);
    suf[b] = acc;
  }
  for (int c = 1; c + 1 < blocks; ++c)
    if (pre[c - 1] >= suf[c + 1]) return false;
  return true;
}

}  // namespace

std::vector<int> support_blocks(const std::vector<Elem>& v, int n) {
  if (n < 1 || v.size() % size_t(n) != 0)
    throw BadLength("vector length not divisible by block size");
  std::vector<int> out;
  int blocks = int(v.size()) / n;
  for (int b = 0; b < blocks; ++b) {
    bool nonzero = false;
    for (int i = 0; i < n; ++i)
      if (v[size_t(b) * n + i]) {
        nonzero = true;
        break;
      }
    if (nonzero) out.push_back(b + 1);
  }
  return out;
}

bool is_delocalized_bruteforce(const FqMatrix& m, int n) {
  int blocks = block_count(m, n);
  auto basis = kernel_basis(m);
  int c = int(basis.size());
  if (c == 0) return true;
  double combos = std::pow(double(m.field()->q()), c);
  if (combos > double(1 << 20)) throw KernelTooLarge("kernel too large to enumerate");
  const Field& f = *m.field();
  std::uint32_t q = f.q();
  std::vector<Elem> coeff(c, 0), v(m.cols());
  long long total = (long long)combos;
  for (long long code = 1; code < total; ++code) {
    long long x = code;
    for (int i = 0; i < c; ++i) {
      coeff[i] = Elem(x % q);
      x /= q;
    }
    std::fill(v.begin(), v.end(), 0);
    for (int i = 0; i < c; ++i) {
      if (!coeff[i]) continue;
      for (int j = 0; j < m.cols(); ++j)
        v[j] = f.add(v[j], f.mul(coeff[i], basis[i][j]));
    }
    if (int(support_blocks(v, n).size()) != blocks) return false;
  }
  return true;
}

bool is_delocalized(const FqMatrix& m, int n) {
  int blocks = block_count(m, n);
  if (blocks == 1) return true;  // any nonzero vector already has full support
  if (interval_reduction_valid(m, n, blocks)) {
    // proper intervals avoid block 1 or block `blocks`; interval support is
    // monotone, so the two maximal windows decide
    return kernel_is_trivial(m.col_slice(0, (blocks - 1) * n)) &&
           kernel_is_trivial(m.col_slice(n, blocks * n));
  }
  return is_delocalized_bruteforce(m, n);
}

std::vector<bool> localized_windows(const FqMatrix& m, int n, int L) {
  int blocks = block_count(m, n);
  if (L < 1 || L > blocks) throw BadWindow("need 1 <= L <= block count");
  int width = blocks / L;
  std::vector<bool> out(L);
  for (int i = 0; i < L; ++i) {
    int b0 = i * width, b1 = (i + 1) * width;
    out[i] = !kernel_is_trivial(m.col_slice(b0 * n, b1 * n));
  }
  return out;
}

bool is_L_localized(const FqMatrix& m, int n, int L) {
  auto w = localized_windows(m, n, L);
  return std::all_of(w.begin(), w.end(), [](bool b) { return b; });
}

}  // namespace fqlab
