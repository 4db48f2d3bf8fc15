#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fqlab/gf.hpp"

namespace fqlab {

// Dense matrix over F_q, row-major. Matrices are plain values; the field is
// shared and immutable.
class FqMatrix {
 public:
  FqMatrix() = default;
  FqMatrix(FieldPtr field, int rows, int cols)
      : field_(std::move(field)), rows_(rows), cols_(cols),
        data_(size_t(rows) * cols, 0) {}

  const FieldPtr& field() const { return field_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Elem at(int i, int j) const { return data_[size_t(i) * cols_ + j]; }
  Elem& at(int i, int j) { return data_[size_t(i) * cols_ + j]; }
  const Elem* row(int i) const { return data_.data() + size_t(i) * cols_; }
  Elem* row(int i) { return data_.data() + size_t(i) * cols_; }

  bool operator==(const FqMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  static FqMatrix identity(FieldPtr field, int n);
  static FqMatrix zero(FieldPtr field, int rows, int cols) {
    return FqMatrix(std::move(field), rows, cols);
  }

  FqMatrix transposed() const;
  FqMatrix mul(const FqMatrix& rhs) const;  // ShapeMismatch on bad dims

  // Columns [c0, c1) as a new matrix.
  FqMatrix col_slice(int c0, int c1) const;

  // Text format used by golden-file tests: a header line "q rows cols",
  // then one line per row. For q <= 10 a row is a string of digits, for
  // larger q space-separated decimal values.
  std::string to_text() const;
  static FqMatrix from_text(const std::string& text);

 private:
  FieldPtr field_;
  int rows_ = 0, cols_ = 0;
  std::vector<Elem> data_;
};

// Row-echelon rank; the input is copied, never modified.
int rank(const FqMatrix& m);

// Kernel basis in reduced column-echelon form: one vector per non-pivot
// column of the RREF, with unit entry at its free coordinate. Size is always
// cols - rank, and every vector v satisfies M v = 0.
std::vector<std::vector<Elem>> kernel_basis(const FqMatrix& m);

bool kernel_is_trivial(const FqMatrix& m);

// ---------------------------------------------------------------------------
// Streaming rank increments for block lower bidiagonal matrices.
//
// Blocks arrive in the order they extend the matrix sequence C_1, C_2, ...:
// diagonal A_{1,1}, subdiagonal A_{2,1}, diagonal A_{2,2}, subdiagonal
// A_{3,2}, ... Each push returns X_i = rank(C_i) - rank(C_{i-1}).
//
// Rather than eliminating the growing kn x kn matrix, the engine keeps two
// subspaces of F_q^n across block columns/rows:
//   cs = the last-block-row content reachable by column combinations that
//        vanish on all earlier rows (dimension X_{2k}),
//   ls = the projection of the left kernel onto the last block row.
// A diagonal block A then contributes X = rank of A's columns modulo cs and
// hands rs = A^T ls (dimension X_{2k+1}) and rk = A^{-1}(cs) to the next
// subdiagonal block B, which contributes X = rank of B's rows modulo rs and
// rebuilds cs = B rk, ls = (B^T)^{-1}(rs). Each push costs O(n^3) field ops.

struct RankIncrementTrace {
  int n = 0;
  std::uint32_t q = 0;
  std::vector<int> increments;      // X_1, X_2, ...
  std::vector<int> partial_defects;  // entry j-1 = dim ker C_{2j}
};

class RankStream {
 public:
  RankStream(FieldPtr field, int n);
  ~RankStream();
  RankStream(RankStream&&) noexcept;
  RankStream& operator=(RankStream&&) noexcept;

  // Throws ShapeMismatch unless block is n x n.
  int push(const FqMatrix& block);

  int n() const { return n_; }
  long long pushed() const { return count_; }
  long long current_rank() const { return rank_; }
  // dim ker C_{2j} after the j-th even push
  long long defect() const { return defect_; }

 private:
  struct Impl;
  FieldPtr field_;
  int n_ = 0;
  long long count_ = 0, rank_ = 0, defect_ = 0;
  int last_odd_ = 0;
  std::unique_ptr<Impl> impl_;
};

RankIncrementTrace stream_rank_increments(const FieldPtr& field, int n,
                                          const std::vector<FqMatrix>& blocks);

// Bit-packed F_2 variant, n <= 32; rows of a block are passed as bit masks
// (bit j = entry in column j). This is the kernel the big Monte Carlo runs
// sit on, so it avoids FqMatrix entirely.
class RankStreamF2 {
 public:
  explicit RankStreamF2(int n);

  int push_diag(const std::uint64_t* rows);  // n row masks
  int push_sub(const std::uint64_t* rows);

  long long current_rank() const { return rank_; }
  long long defect() const { return defect_; }
  void reset();

 private:
  int n_;
  long long rank_ = 0, defect_ = 0;
  int last_odd_ = 0;
  // echelon bases, each at most n rows
  std::uint64_t cs_[64], ls_[64], rk_[64], rs_[64];
  int cs_n_ = 0, ls_n_ = 0, rk_n_ = 0, rs_n_ = 0;
  std::uint64_t scratch_[130];
};

}  // namespace fqlab
