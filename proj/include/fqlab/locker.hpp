#pragma once

#include <vector>

#include "fqlab/fmat.hpp"

namespace fqlab {

// 1-based indices of the nonzero length-n blocks of v. Throws BadLength when
// the vector does not split into blocks.
std::vector<int> support_blocks(const std::vector<Elem>& v, int n);

// True iff every nonzero kernel vector of M has full block support.
//
// When M's zero pattern admits the interval reduction (truncating a kernel
// vector at a support gap stays in the kernel, which holds for the block
// bidiagonal staircase), a kernel vector missing a block implies one
// supported on a proper interval, and conversely; since interval support is
// monotone under enlargement it suffices to test the two maximal proper
// windows, i.e. the column submatrices with the last resp. first block
// removed. Otherwise falls back to enumerating the q^corank kernel
// combinations while q^corank <= 2^20, else throws KernelTooLarge.
bool is_delocalized(const FqMatrix& m, int n);

// Exhaustive kernel enumeration (the fallback oracle, exposed for tests).
bool is_delocalized_bruteforce(const FqMatrix& m, int n);

// Window i of L covers blocks [(i-1)*floor(K/L)+1, i*floor(K/L)], K = number
// of blocks; returns whether the column submatrix of each window has a
// nontrivial kernel. Blocks beyond L*floor(K/L) belong to no window.
// Throws BadWindow when L < 1 or L > K.
std::vector<bool> localized_windows(const FqMatrix& m, int n, int L);

// True iff every window has a kernel vector supported inside it.
bool is_L_localized(const FqMatrix& m, int n, int L);

}  // namespace fqlab
