#include <doctest.h>

#include "fqlab/ensembles.hpp"
#include "fqlab/fmat.hpp"
#include "fqlab/rng.hpp"
#include "oracles.hpp"

using namespace fqlab;

namespace {

FqMatrix from_rows(const FieldPtr& f, std::vector<std::vector<int>> rows) {
  FqMatrix m(f, int(rows.size()), int(rows[0].size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m.at(i, j) = Elem(rows[i][j]);
  return m;
}

}  // namespace

TEST_SUITE("fmat") {

TEST_CASE("rank basics") {
  auto f2 = Field::make(2);
  CHECK(rank(FqMatrix::identity(f2, 5)) == 5);
  CHECK(rank(FqMatrix::zero(f2, 4, 7)) == 0);
  CHECK(rank(from_rows(f2, {{1, 1}, {1, 1}})) == 1);
}

TEST_CASE("kernel basics") {
  auto f2 = Field::make(2);
  CHECK(kernel_basis(FqMatrix::identity(f2, 3)).empty());
  CHECK(kernel_basis(FqMatrix::zero(f2, 2, 2)).size() == 2);
  auto kb = kernel_basis(from_rows(f2, {{1, 1}, {1, 1}}));
  REQUIRE(kb.size() == 1);
  CHECK(kb[0] == std::vector<Elem>{1, 1});
}

TEST_CASE("kernel vectors annihilate and count cols minus rank") {
  for (int q : {2, 3, 4, 5, 9}) {
    auto f = Field::make(q);
    Rng rng(13, q);
    for (int trial = 0; trial < 30; ++trial) {
      int rows = 1 + int(rng.below(6));
      int cols = 1 + int(rng.below(6));
      FqMatrix m(f, rows, cols);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = Elem(rng.below(q));
      auto kb = kernel_basis(m);
      CHECK(int(kb.size()) == cols - rank(m));
      for (const auto& v : kb) {
        for (int i = 0; i < rows; ++i) {
          Elem acc = 0;
          for (int j = 0; j < cols; ++j) acc = f->add(acc, f->mul(m.at(i, j), v[j]));
          CHECK(acc == 0);
        }
      }
    }
  }
}

TEST_CASE("serialization round trip and golden header") {
  auto f3 = Field::make(3);
  auto m = from_rows(f3, {{0, 1, 2}, {2, 2, 0}});
  CHECK(m.to_text() == "3 2 3\n012\n220\n");
  CHECK(FqMatrix::from_text(m.to_text()) == m);

  auto f13 = Field::make(13);
  FqMatrix big(f13, 2, 2);
  big.at(0, 1) = 12;
  big.at(1, 0) = 7;
  CHECK(FqMatrix::from_text(big.to_text()) == big);

  Rng rng(99);
  for (int q : {2, 5, 16}) {
    auto f = Field::make(q);
    FqMatrix r(f, 3, 4);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) r.at(i, j) = Elem(rng.below(q));
    CHECK(FqMatrix::from_text(r.to_text()) == r);
  }
}

TEST_CASE("streaming: identity blocks alternate n minus previous") {
  auto f2 = Field::make(2);
  int n = 3;
  std::vector<FqMatrix> blocks(8, FqMatrix::identity(f2, n));
  auto tr = stream_rank_increments(f2, n, blocks);
  for (size_t i = 1; i < tr.increments.size(); ++i)
    CHECK(tr.increments[i] == n - tr.increments[i - 1]);
}

TEST_CASE("streaming: zero blocks give zero increments") {
  auto f3 = Field::make(3);
  std::vector<FqMatrix> blocks(6, FqMatrix::zero(f3, 2, 2));
  auto tr = stream_rank_increments(f3, 2, blocks);
  for (int x : tr.increments) CHECK(x == 0);
}

TEST_CASE("streaming equals dense rank differences, q=2 n=3 k=4") {
  auto f2 = Field::make(2);
  Rng rng(4242);
  std::vector<FqMatrix> blocks;
  for (int i = 0; i < 8; ++i) blocks.push_back(sample_block(f2, 3, rng));
  auto tr = stream_rank_increments(f2, 3, blocks);
  auto ranks = testing::dense_prefix_ranks(f2, 3, blocks);
  int prev = 0;
  for (size_t i = 0; i < blocks.size(); ++i) {
    CHECK(tr.increments[i] == ranks[i] - prev);
    prev = ranks[i];
  }
}

TEST_CASE("streaming invariants on random instances") {
  Rng meta(7);
  for (int trial = 0; trial < 120; ++trial) {
    int q = std::vector<int>{2, 3, 4}[meta.below(3)];
    int n = 1 + int(meta.below(6));
    int k = 1 + int(meta.below(8));
    auto f = Field::make(q);
    Rng rng(1000, trial);
    std::vector<FqMatrix> blocks;
    for (int i = 0; i < 2 * k; ++i) blocks.push_back(sample_block(f, n, rng));
    auto tr = stream_rank_increments(f, n, blocks);
    auto ranks = testing::dense_prefix_ranks(f, n, blocks);

    // prefix sums equal dense ranks
    int acc = 0;
    for (size_t i = 0; i < blocks.size(); ++i) {
      acc += tr.increments[i];
      CHECK(acc == ranks[i]);
    }
    // defect identity: dim ker C_{2j} = sum_{i<=j} (n - X_{2i-1} - X_{2i})
    for (int j = 1; j <= k; ++j) {
      auto c2j = testing::assemble_prefix(f, n, blocks, 2 * j);
      CHECK(tr.partial_defects[j - 1] == c2j.cols() - ranks[2 * j - 1]);
    }
    // consecutive increments never exceed n
    for (size_t i = 0; i + 1 < tr.increments.size(); ++i)
      CHECK(tr.increments[i] + tr.increments[i + 1] <= n);
  }
}

TEST_CASE("packed F2 stream matches the generic engine") {
  Rng meta(21);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + int(meta.below(16));
    int k = 1 + int(meta.below(6));
    auto f = Field::make(2);
    Rng rng(5000, trial);
    std::vector<FqMatrix> blocks;
    for (int i = 0; i < 2 * k; ++i) blocks.push_back(sample_block(f, n, rng));

    RankStream generic(f, n);
    RankStreamF2 packed(n);
    for (int i = 0; i < 2 * k; ++i) {
      std::uint64_t rows[32];
      for (int a = 0; a < n; ++a) {
        std::uint64_t mask = 0;
        for (int b = 0; b < n; ++b)
          if (blocks[i].at(a, b)) mask |= 1ULL << b;
        rows[a] = mask;
      }
      int gi = generic.push(blocks[i]);
      int pi = (i % 2 == 0) ? packed.push_diag(rows) : packed.push_sub(rows);
      CHECK(gi == pi);
    }
    CHECK(generic.defect() == packed.defect());
    CHECK(generic.current_rank() == packed.current_rank());
  }
}

TEST_CASE("streaming shape errors") {
  auto f2 = Field::make(2);
  RankStream rs(f2, 3);
  CHECK_THROWS_AS(rs.push(FqMatrix::zero(f2, 2, 3)), ShapeMismatch);
  CHECK_THROWS_AS(RankStreamF2(0), ShapeMismatch);
  CHECK_THROWS_AS(RankStreamF2(33), ShapeMismatch);
}

}  // TEST_SUITE
