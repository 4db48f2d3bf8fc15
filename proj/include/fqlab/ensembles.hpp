#pragma once

#include <functional>
#include <utility>

#include "fqlab/fmat.hpp"
#include "fqlab/rng.hpp"

namespace fqlab {

// The four random matrix families:
//   OddC       C_{2k-1}, kn x kn, diagonal + subdiagonal blocks uniform
//   EvenC      C_{2k},   (k+1)n x kn
//   TruncatedC hat-C_{2k}, (k+1)n x (k+1)n: C_{2(k+1)} with the first and
//              last n/2 rows deleted (n must be even)
//   ProductC   C'_{2k-1}, kn x kn, uniform diagonal, identity subdiagonal
enum class EnsembleVariant { OddC, EvenC, TruncatedC, ProductC };

struct EnsembleSpec {
  EnsembleVariant variant;
  int n = 1;
  int k = 1;
  int q = 2;
  std::uint64_t seed = 0;
};

std::pair<int, int> ensemble_shape(const EnsembleSpec& spec);

enum class BlockKind { Diagonal, Subdiagonal };

// Uniform n x n block. Entries are generated row-major; each entry consumes
// the smallest covering bit-width from the stream (rejection above q), so
// golden tests can pin exact matrices and the packed q = 2 path can draw a
// whole row as one bits(n) call without changing the stream.
FqMatrix sample_block(const FieldPtr& field, int n, Rng& rng);

// Emits the random blocks of the variant's underlying bidiagonal matrix in
// generation order: per block column the diagonal block first, then the
// subdiagonal block when the shape has one. ProductC emits only diagonal
// blocks (its subdiagonals are the identity and consume no randomness);
// TruncatedC emits the blocks of C_{2(k+1)}.
void generate_blocks(
    const EnsembleSpec& spec, const FieldPtr& field, Rng& rng,
    const std::function<void(int index, BlockKind, const FqMatrix&)>& fn);

// Throws InvalidSpec (k = 0, or odd n with TruncatedC).
FqMatrix sample_ensemble(const EnsembleSpec& spec, Rng& rng);

// Samples the diagonal blocks once, builds both C'_{2k-1} and the explicit
// product A'_{1,1} ... A'_{k,k}, and compares coranks (always equal).
bool product_corank_identity_check(int n, int k, int q, Rng& rng);

}  // namespace fqlab
