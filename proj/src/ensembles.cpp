#include "fqlab/ensembles.hpp"

namespace fqlab {

namespace {

void check_spec(const EnsembleSpec& spec) {
  if (spec.k < 1) throw InvalidSpec("ensemble needs k >= 1");
  if (spec.n < 1) throw InvalidSpec("ensemble needs n >= 1");
  if (spec.variant == EnsembleVariant::TruncatedC && spec.n % 2 != 0)
    throw InvalidSpec("truncated ensemble needs even n");
}

}  // namespace

std::pair<int, int> ensemble_shape(const EnsembleSpec& spec) {
  check_spec(spec);
  int n = spec.n, k = spec.k;
  switch (spec.variant) {
    case EnsembleVariant::OddC:
      return {k * n, k * n};
    case EnsembleVariant::EvenC:
      return {(k + 1) * n, k * n};
    case EnsembleVariant::TruncatedC:
      return {(k + 1) * n, (k + 1) * n};
    case EnsembleVariant::ProductC:
      return {k * n, k * n};
  }
  throw InvalidSpec("unknown variant");
}

FqMatrix sample_block(const FieldPtr& field, int n, Rng& rng) {
  std::uint32_t q = field->q();
  FqMatrix m(field, n, n);
  if (q == 2) {
    for (int i = 0; i < n; ++i) {
      std::uint64_t row = rng.bits(n);
      for (int j = 0; j < n; ++j) m.at(i, j) = Elem((row >> j) & 1);
    }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.at(i, j) = Elem(rng.below(q));
  }
  return m;
}

void generate_blocks(
    const EnsembleSpec& spec, const FieldPtr& field, Rng& rng,
    const std::function<void(int, BlockKind, const FqMatrix&)>& fn) {
  check_spec(spec);
  int n = spec.n;
  // number of block columns of the underlying bidiagonal matrix, and whether
  // the last column carries a subdiagonal block
  int cols;
  bool last_has_sub;
  bool want_sub = spec.variant != EnsembleVariant::ProductC;
  switch (spec.variant) {
    case EnsembleVariant::OddC:
      cols = spec.k;
      last_has_sub = false;
      break;
    case EnsembleVariant::EvenC:
      cols = spec.k;
      last_has_sub = true;
      break;
    case EnsembleVariant::TruncatedC:
      cols = spec.k + 1;
      last_has_sub = true;
      break;
    case EnsembleVariant::ProductC:
      cols = spec.k;
      last_has_sub = false;
      break;
    default:
      throw InvalidSpec("unknown variant");
  }
  int index = 0;
  for (int j = 1; j <= cols; ++j) {
    fn(index++, BlockKind::Diagonal, sample_block(field, n, rng));
    if (want_sub && (j < cols || last_has_sub))
      fn(index++, BlockKind::Subdiagonal, sample_block(field, n, rng));
  }
}

FqMatrix sample_ensemble(const EnsembleSpec& spec, Rng& rng) {
  check_spec(spec);
  auto field = Field::make(spec.q);
  int n = spec.n, k = spec.k;

  if (spec.variant == EnsembleVariant::ProductC) {
    FqMatrix m(field, k * n, k * n);
    int col = 0;
    generate_blocks(spec, field, rng, [&](int, BlockKind, const FqMatrix& b) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(col * n + i, col * n + j) = b.at(i, j);
      ++col;
    });
    for (int j = 0; j < (k - 1) * n; ++j) m.at(n + j, j) = 1;
    return m;
  }

  // assemble the underlying bidiagonal matrix
  int cols = spec.variant == EnsembleVariant::TruncatedC ? k + 1 : k;
  int rows = cols + 1;  // one extra block row; trimmed below when not needed
  FqMatrix full(field, rows * n, cols * n);
  generate_blocks(spec, field, rng, [&](int index, BlockKind kind, const FqMatrix& b) {
    int j = index / 2;  // block column, 0-based
    int i = kind == BlockKind::Diagonal ? j : j + 1;
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) full.at(i * n + a, j * n + c) = b.at(a, c);
  });

  switch (spec.variant) {
    case EnsembleVariant::OddC: {
      FqMatrix m(field, k * n, k * n);
      for (int i = 0; i < k * n; ++i)
        for (int j = 0; j < k * n; ++j) m.at(i, j) = full.at(i, j);
      return m;
    }
    case EnsembleVariant::EvenC:
      return full;
    case EnsembleVariant::TruncatedC: {
      int m2 = n / 2;
      FqMatrix m(field, (k + 1) * n, (k + 1) * n);
      for (int i = 0; i < (k + 1) * n; ++i)
        for (int j = 0; j < (k + 1) * n; ++j) m.at(i, j) = full.at(i + m2, j);
      return m;
    }
    default:
      throw InvalidSpec("unknown variant");
  }
}

bool product_corank_identity_check(int n, int k, int q, Rng& rng) {
  auto field = Field::make(q);
  std::vector<FqMatrix> diag;
  diag.reserve(k);
  for (int i = 0; i < k; ++i) diag.push_back(sample_block(field, n, rng));

  FqMatrix cmat(field, k * n, k * n);
  for (int b = 0; b < k; ++b)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cmat.at(b * n + i, b * n + j) = diag[b].at(i, j);
  for (int j = 0; j < (k - 1) * n; ++j) cmat.at(n + j, j) = 1;

  FqMatrix prod = diag[0];
  for (int i = 1; i < k; ++i) prod = prod.mul(diag[i]);

  int corank_c = k * n - rank(cmat);
  int corank_p = n - rank(prod);
  return corank_c == corank_p;
}

}  // namespace fqlab
