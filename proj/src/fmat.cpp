#include "fqlab/fmat.hpp"

#include <bit>
#include <cstring>
#include <sstream>

namespace fqlab {

namespace {

// ---- generic elimination ---------------------------------------------------

// In-place row reduction to RREF, pivoting on the first nonzero entry of each
// column. Returns pivot columns. Rank and kernel dimension do not depend on
// the pivot choice; the RREF itself makes kernel bases canonical.
std::vector<int> rref_inplace(const Field& f, std::vector<std::vector<Elem>>& rows,
                              int cols) {
  std::vector<int> pivots;
  int r = 0;
  int nrows = int(rows.size());
  for (int c = 0; c < cols && r < nrows; ++c) {
    int piv = -1;
    for (int i = r; i < nrows; ++i)
      if (rows[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[r], rows[piv]);
    Elem iv = f.inv(rows[r][c]);
    for (int j = c; j < cols; ++j) rows[r][j] = f.mul(rows[r][j], iv);
    for (int i = 0; i < nrows; ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Elem factor = rows[i][c];
      for (int j = c; j < cols; ++j)
        rows[i][j] = f.sub(rows[i][j], f.mul(factor, rows[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// ---- packed F_2 elimination ------------------------------------------------

int rank_f2(std::vector<std::uint64_t>& rows, int cols, int words) {
  int rank = 0;
  int nrows = int(rows.size()) / words;
  for (int c = 0; c < cols && rank < nrows; ++c) {
    int w = c >> 6, b = c & 63;
    int piv = -1;
    for (int i = rank; i < nrows; ++i)
      if ((rows[size_t(i) * words + w] >> b) & 1) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (int k = 0; k < words; ++k)
      std::swap(rows[size_t(rank) * words + k], rows[size_t(piv) * words + k]);
    for (int i = rank + 1; i < nrows; ++i)
      if ((rows[size_t(i) * words + w] >> b) & 1)
        for (int k = w; k < words; ++k)
          rows[size_t(i) * words + k] ^= rows[size_t(rank) * words + k];
    ++rank;
  }
  return rank;
}

std::vector<std::uint64_t> pack_f2(const FqMatrix& m, int& words) {
  words = (m.cols() + 63) / 64;
  std::vector<std::uint64_t> rows(size_t(m.rows()) * words, 0);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m.at(i, j)) rows[size_t(i) * words + (j >> 6)] |= 1ULL << (j & 63);
  return rows;
}

// Echelon basis of a subspace of F_q^n; rows kept fully reduced so that
// "reduce" is the canonical projection modulo the subspace.
struct Basis {
  const Field* f;
  int n;
  std::vector<std::vector<Elem>> rows;
  std::vector<int> pivots;

  Basis(const Field* f_, int n_) : f(f_), n(n_) {}

  int dim() const { return int(rows.size()); }

  void reduce(std::vector<Elem>& v) const {
    for (size_t i = 0; i < rows.size(); ++i) {
      Elem c = v[pivots[i]];
      if (c == 0) continue;
      for (int j = 0; j < n; ++j) v[j] = f->sub(v[j], f->mul(c, rows[i][j]));
    }
  }

  bool insert(std::vector<Elem> v) {
    reduce(v);
    int p = -1;
    for (int j = 0; j < n; ++j)
      if (v[j] != 0) {
        p = j;
        break;
      }
    if (p < 0) return false;
    Elem iv = f->inv(v[p]);
    for (int j = 0; j < n; ++j) v[j] = f->mul(v[j], iv);
    // back-substitute into existing rows, keep rows sorted by pivot
    for (size_t i = 0; i < rows.size(); ++i) {
      Elem c = rows[i][p];
      if (c == 0) continue;
      for (int j = 0; j < n; ++j)
        rows[i][j] = f->sub(rows[i][j], f->mul(c, v[j]));
    }
    size_t pos = 0;
    while (pos < pivots.size() && pivots[pos] < p) ++pos;
    rows.insert(rows.begin() + pos, std::move(v));
    pivots.insert(pivots.begin() + pos, p);
    return true;
  }
};

std::vector<Elem> mat_vec(const FqMatrix& a, const std::vector<Elem>& x) {
  const Field& f = *a.field();
  std::vector<Elem> y(a.rows(), 0);
  for (int i = 0; i < a.rows(); ++i) {
    Elem acc = 0;
    const Elem* r = a.row(i);
    for (int j = 0; j < a.cols(); ++j)
      if (x[j]) acc = f.add(acc, f.mul(r[j], x[j]));
    y[i] = acc;
  }
  return y;
}

// {x : A x in S} for square A; kernel of [A | S-basis-columns] projected to
// the first n coordinates.
Basis preimage(const FqMatrix& a, const Basis& s) {
  const Field& f = *a.field();
  int n = a.cols();
  int sd = s.dim();
  std::vector<std::vector<Elem>> rows(a.rows(), std::vector<Elem>(n + sd, 0));
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < n; ++j) rows[i][j] = a.at(i, j);
    for (int j = 0; j < sd; ++j) rows[i][n + j] = s.rows[j][i];
  }
  auto pivots = rref_inplace(f, rows, n + sd);
  std::vector<bool> is_piv(n + sd, false);
  for (int p : pivots) is_piv[p] = true;
  Basis out(&f, n);
  for (int free = 0; free < n + sd; ++free) {
    if (is_piv[free]) continue;
    std::vector<Elem> v(n + sd, 0);
    v[free] = 1;
    for (size_t i = 0; i < pivots.size(); ++i)
      v[pivots[i]] = f.neg(rows[i][free]);
    v.resize(n);
    out.insert(std::move(v));
  }
  return out;
}

Basis image(const FqMatrix& a, const Basis& s) {
  Basis out(s.f, a.rows());
  for (const auto& v : s.rows) out.insert(mat_vec(a, v));
  return out;
}

}  // namespace

// ---- FqMatrix --------------------------------------------------------------

FqMatrix FqMatrix::identity(FieldPtr field, int n) {
  FqMatrix m(std::move(field), n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

FqMatrix FqMatrix::transposed() const {
  FqMatrix t(field_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

FqMatrix FqMatrix::mul(const FqMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw ShapeMismatch("matrix product shape mismatch");
  const Field& f = *field_;
  FqMatrix out(field_, rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      Elem a = at(i, k);
      if (a == 0) continue;
      for (int j = 0; j < rhs.cols_; ++j) {
        Elem b = rhs.at(k, j);
        if (b) out.at(i, j) = f.add(out.at(i, j), f.mul(a, b));
      }
    }
  return out;
}

FqMatrix FqMatrix::col_slice(int c0, int c1) const {
  FqMatrix out(field_, rows_, c1 - c0);
  for (int i = 0; i < rows_; ++i)
    for (int j = c0; j < c1; ++j) out.at(i, j - c0) = at(i, j);
  return out;
}

std::string FqMatrix::to_text() const {
  std::ostringstream os;
  os << field_->q() << ' ' << rows_ << ' ' << cols_ << '\n';
  bool digits = field_->q() <= 10;
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      if (!digits && j) os << ' ';
      os << int(at(i, j));
    }
    os << '\n';
  }
  return os.str();
}

FqMatrix FqMatrix::from_text(const std::string& text) {
  std::istringstream is(text);
  std::uint32_t q;
  int rows, cols;
  if (!(is >> q >> rows >> cols)) throw ShapeMismatch("bad matrix header");
  auto field = Field::make(q);
  FqMatrix m(field, rows, cols);
  if (q <= 10) {
    for (int i = 0; i < rows; ++i) {
      std::string line;
      if (!(is >> line) || int(line.size()) != cols)
        throw ShapeMismatch("bad matrix row");
      for (int j = 0; j < cols; ++j) {
        int v = line[j] - '0';
        if (v < 0 || std::uint32_t(v) >= q) throw ShapeMismatch("entry out of field");
        m.at(i, j) = Elem(v);
      }
    }
  } else {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        std::uint32_t v;
        if (!(is >> v) || v >= q) throw ShapeMismatch("entry out of field");
        m.at(i, j) = Elem(v);
      }
  }
  return m;
}

int rank(const FqMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (m.field()->q() == 2) {
    int words;
    auto rows = pack_f2(m, words);
    return rank_f2(rows, m.cols(), words);
  }
  std::vector<std::vector<Elem>> rows(m.rows(), std::vector<Elem>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) rows[i][j] = m.at(i, j);
  return int(rref_inplace(*m.field(), rows, m.cols()).size());
}

std::vector<std::vector<Elem>> kernel_basis(const FqMatrix& m) {
  const Field& f = *m.field();
  int cols = m.cols();
  std::vector<std::vector<Elem>> rows(m.rows(), std::vector<Elem>(cols));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < cols; ++j) rows[i][j] = m.at(i, j);
  auto pivots = rref_inplace(f, rows, cols);
  std::vector<bool> is_piv(cols, false);
  for (int p : pivots) is_piv[p] = true;
  std::vector<std::vector<Elem>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_piv[free]) continue;
    std::vector<Elem> v(cols, 0);
    v[free] = 1;
    for (size_t i = 0; i < pivots.size(); ++i)
      v[pivots[i]] = f.neg(rows[i][free]);
    basis.push_back(std::move(v));
  }
  return basis;
}

bool kernel_is_trivial(const FqMatrix& m) { return rank(m) == m.cols(); }

// ---- generic streaming engine ---------------------------------------------

struct RankStream::Impl {
  Basis cs, ls, rk, rs;
  Impl(const Field* f, int n) : cs(f, n), ls(f, n), rk(f, n), rs(f, n) {
    // ls starts as all of F_q^n (left kernel of the empty zero-column prefix)
    for (int i = 0; i < n; ++i) {
      std::vector<Elem> e(n, 0);
      e[i] = 1;
      ls.insert(std::move(e));
    }
  }
};

RankStream::RankStream(FieldPtr field, int n)
    : field_(std::move(field)), n_(n),
      impl_(std::make_unique<Impl>(field_.get(), n)) {}

RankStream::~RankStream() = default;
RankStream::RankStream(RankStream&&) noexcept = default;
RankStream& RankStream::operator=(RankStream&&) noexcept = default;

int RankStream::push(const FqMatrix& block) {
  if (block.rows() != n_ || block.cols() != n_)
    throw ShapeMismatch("streaming block must be n x n");
  int inc;
  if (count_ % 2 == 0) {
    // diagonal block: X = rank of its columns modulo cs
    Basis tmp = impl_->cs;
    int before = tmp.dim();
    for (int j = 0; j < n_; ++j) {
      std::vector<Elem> col(n_);
      for (int i = 0; i < n_; ++i) col[i] = block.at(i, j);
      tmp.insert(std::move(col));
    }
    inc = tmp.dim() - before;
    impl_->rk = preimage(block, impl_->cs);
    impl_->rs = image(block.transposed(), impl_->ls);
    last_odd_ = inc;
  } else {
    // subdiagonal block: X = rank of its rows modulo rs
    Basis tmp = impl_->rs;
    int before = tmp.dim();
    for (int i = 0; i < n_; ++i) {
      std::vector<Elem> row(n_);
      for (int j = 0; j < n_; ++j) row[j] = block.at(i, j);
      tmp.insert(std::move(row));
    }
    inc = tmp.dim() - before;
    impl_->cs = image(block, impl_->rk);
    impl_->ls = preimage(block.transposed(), impl_->rs);
    defect_ += n_ - last_odd_ - inc;
  }
  rank_ += inc;
  ++count_;
  return inc;
}

RankIncrementTrace stream_rank_increments(const FieldPtr& field, int n,
                                          const std::vector<FqMatrix>& blocks) {
  RankStream rs(field, n);
  RankIncrementTrace tr;
  tr.n = n;
  tr.q = field->q();
  for (size_t i = 0; i < blocks.size(); ++i) {
    tr.increments.push_back(rs.push(blocks[i]));
    if (i % 2 == 1) tr.partial_defects.push_back(int(rs.defect()));
  }
  return tr;
}

// ---- packed F_2 streaming engine -------------------------------------------

namespace {

inline int pivot_of(std::uint64_t v) { return std::countr_zero(v); }

// reduce v by an echelon basis (rows sorted by pivot, fully reduced)
inline std::uint64_t reduce_f2(std::uint64_t v, const std::uint64_t* basis, int bn) {
  for (int i = 0; i < bn; ++i) {
    std::uint64_t b = basis[i];
    if ((v >> pivot_of(b)) & 1) v ^= b;
  }
  return v;
}

// insert v, keeping RREF; returns 1 if the dimension grew
inline int insert_f2(std::uint64_t v, std::uint64_t* basis, int& bn) {
  v = reduce_f2(v, basis, bn);
  if (!v) return 0;
  int p = pivot_of(v);
  for (int i = 0; i < bn; ++i)
    if ((basis[i] >> p) & 1) basis[i] ^= v;
  int pos = 0;
  while (pos < bn && pivot_of(basis[pos]) < p) ++pos;
  for (int i = bn; i > pos; --i) basis[i] = basis[i - 1];
  basis[pos] = v;
  ++bn;
  return 1;
}

}  // namespace

RankStreamF2::RankStreamF2(int n) : n_(n) {
  if (n < 1 || n > 32) throw ShapeMismatch("packed F2 stream supports 1 <= n <= 32");
  reset();
}

void RankStreamF2::reset() {
  rank_ = defect_ = 0;
  last_odd_ = 0;
  cs_n_ = rk_n_ = rs_n_ = 0;
  ls_n_ = n_;
  for (int i = 0; i < n_; ++i) ls_[i] = 1ULL << i;
}

int RankStreamF2::push_diag(const std::uint64_t* rows) {
  // increment: columns of A modulo cs. Column action A x has bit i =
  // parity(rows[i] & x); feed the unit vectors through it.
  std::uint64_t* tmp = scratch_;
  for (int i = 0; i < cs_n_; ++i) tmp[i] = cs_[i];
  int tn = cs_n_, inc = 0;
  for (int j = 0; j < n_; ++j) {
    std::uint64_t col = 0;
    for (int i = 0; i < n_; ++i) col |= std::uint64_t((rows[i] >> j) & 1) << i;
    inc += insert_f2(col, tmp, tn);
  }

  // rk = {x : A x in cs}: kernel of [A | cs-basis-as-columns]
  std::uint64_t* m = scratch_ + 64;
  for (int i = 0; i < n_; ++i) {
    std::uint64_t r = rows[i];
    for (int j = 0; j < cs_n_; ++j)
      r |= std::uint64_t((cs_[j] >> i) & 1) << (n_ + j);
    m[i] = r;
  }
  int cols = n_ + cs_n_;
  // RREF over the packed rows
  int rr = 0;
  int piv_col[64];
  for (int c = 0; c < cols && rr < n_; ++c) {
    int piv = -1;
    for (int i = rr; i < n_; ++i)
      if ((m[i] >> c) & 1) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[rr], m[piv]);
    for (int i = 0; i < n_; ++i)
      if (i != rr && ((m[i] >> c) & 1)) m[i] ^= m[rr];
    piv_col[rr] = c;
    ++rr;
  }
  rk_n_ = 0;
  {
    std::uint64_t is_piv = 0;
    for (int i = 0; i < rr; ++i) is_piv |= 1ULL << piv_col[i];
    for (int free = 0; free < cols; ++free) {
      if ((is_piv >> free) & 1) continue;
      std::uint64_t v = 1ULL << free;
      for (int i = 0; i < rr; ++i)
        if ((m[i] >> free) & 1) v |= 1ULL << piv_col[i];
      v &= (n_ == 64) ? ~0ULL : ((1ULL << n_) - 1);  // project to x-coordinates
      insert_f2(v, rk_, rk_n_);
    }
  }

  // rs = A^T ls: A^T u is the XOR of the rows of A selected by u
  rs_n_ = 0;
  for (int i = 0; i < ls_n_; ++i) {
    std::uint64_t u = ls_[i], y = 0;
    while (u) {
      int b = std::countr_zero(u);
      u &= u - 1;
      y ^= rows[b];
    }
    insert_f2(y, rs_, rs_n_);
  }

  last_odd_ = inc;
  rank_ += inc;
  return inc;
}

int RankStreamF2::push_sub(const std::uint64_t* rows) {
  // increment: rows of B modulo rs
  std::uint64_t* tmp = scratch_;
  for (int i = 0; i < rs_n_; ++i) tmp[i] = rs_[i];
  int tn = rs_n_, inc = 0;
  for (int i = 0; i < n_; ++i) inc += insert_f2(rows[i], tmp, tn);

  // cs = B rk (column action on each basis vector of rk)
  cs_n_ = 0;
  for (int i = 0; i < rk_n_; ++i) {
    std::uint64_t x = rk_[i], y = 0;
    for (int r = 0; r < n_; ++r)
      y |= std::uint64_t(std::popcount(rows[r] & x) & 1) << r;
    insert_f2(y, cs_, cs_n_);
  }

  // ls = {z : B^T z in rs}: left kernel of the reduced rows of B, found by
  // eliminating [reduce(B rows) | I] and collecting combinations that vanish
  std::uint64_t* m = scratch_ + 64;
  for (int i = 0; i < n_; ++i)
    m[i] = reduce_f2(rows[i], rs_, rs_n_) | (1ULL << (n_ + i));
  ls_n_ = 0;
  {
    int rr = 0;
    for (int c = 0; c < n_; ++c) {
      int piv = -1;
      for (int i = rr; i < n_; ++i)
        if ((m[i] >> c) & 1) {
          piv = i;
          break;
        }
      if (piv < 0) continue;
      std::swap(m[rr], m[piv]);
      for (int i = rr + 1; i < n_; ++i)
        if ((m[i] >> c) & 1) m[i] ^= m[rr];
      ++rr;
    }
    std::uint64_t low = (1ULL << n_) - 1;
    for (int i = rr; i < n_; ++i) insert_f2(m[i] >> n_, ls_, ls_n_);
    (void)low;
  }

  defect_ += n_ - last_odd_ - inc;
  rank_ += inc;
  return inc;
}

}  // namespace fqlab
