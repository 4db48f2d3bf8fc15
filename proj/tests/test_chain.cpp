#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "fqlab/chain.hpp"
#include "fqlab/stats.hpp"
#include "oracles.hpp"

using namespace fqlab;

namespace {

Rational rat(long long num, long long den) { return Rational(num) / den; }

// base-q digit decoder for census builders
struct Digits {
  long long code;
  int q;
  int next() {
    int d = int(code % q);
    code /= q;
    return d;
  }
};

bool pmf_equals(const RationalPmf& p, std::vector<std::pair<long long, Rational>> want) {
  for (auto& [v, w] : want)
    if (p.mass_at(v) != w) return false;
  Rational total = 0;
  for (auto& [v, w] : want) {
    (void)v;
    total += w;
  }
  return p.total() == total;
}

}  // namespace

TEST_SUITE("chain") {

TEST_CASE("transition kernel pinned values") {
  CHECK(transition_prob_exact(1, 2, 0, 0) == rat(1, 2));
  CHECK(transition_prob_exact(2, 2, 0, 1) == rat(9, 16));
  for (int n : {1, 3, 6})
    for (int q : {2, 3, 5}) CHECK(transition_prob_exact(n, q, n, 0) == 1);
  CHECK(transition_prob_exact(4, 2, 3, 2) == 0);  // d + r > n
}

TEST_CASE("rows are exactly stochastic and detailed balance holds") {
  for (int q : {2, 3}) {
    for (int n = 1; n <= 8; ++n) {
      auto pi = stationary_exact(n, q);
      Rational total = 0;
      for (auto& w : pi.weights) total += w;
      CHECK(total == 1);
      for (int d = 0; d <= n; ++d) {
        Rational row = 0;
        for (int r = 0; r <= n; ++r) row += transition_prob_exact(n, q, d, r);
        CHECK(row == 1);
        for (int r = 0; r <= n; ++r)
          CHECK(pi.weights[d] * transition_prob_exact(n, q, d, r) ==
                pi.weights[r] * transition_prob_exact(n, q, r, d));
      }
      // pi P = pi
      for (int r = 0; r <= n; ++r) {
        Rational acc = 0;
        for (int d = 0; d <= n; ++d)
          acc += pi.weights[d] * transition_prob_exact(n, q, d, r);
        CHECK(acc == pi.weights[r]);
      }
    }
  }
}

TEST_CASE("Kolmogorov cycle condition on random cycles") {
  Rng rng(31337);
  int n = 6, q = 3;
  for (int trial = 0; trial < 25; ++trial) {
    int len = 3 + int(rng.below(5));
    std::vector<int> cyc(len);
    for (int i = 0; i < len; ++i) cyc[i] = int(rng.below(n + 1));
    cyc.push_back(cyc[0]);
    Rational fwd = 1, bwd = 1;
    for (int i = 0; i + 1 <= len; ++i) {
      fwd *= transition_prob_exact(n, q, cyc[i], cyc[i + 1]);
      bwd *= transition_prob_exact(n, q, cyc[i + 1], cyc[i]);
    }
    CHECK(fwd == bwd);
  }
}

TEST_CASE("stationary pinned values") {
  auto pi = stationary_exact(1, 2);
  CHECK(pi.weights[0] == rat(2, 3));
  CHECK(pi.weights[1] == rat(1, 3));
}

TEST_CASE("rectangular rank distribution") {
  CHECK(pmf_equals(rect_rank_dist_exact(1, 1, 2), {{0, rat(1, 2)}, {1, rat(1, 2)}}));
  CHECK(pmf_equals(rect_rank_dist_exact(2, 2, 2),
                   {{0, rat(1, 16)}, {1, rat(9, 16)}, {2, rat(6, 16)}}));
  CHECK(pmf_equals(rect_rank_dist_exact(0, 5, 3), {{0, Rational(1)}}));

  // enumeration oracle: all 2^6 matrices of shape 2x3 over F_2
  auto f2 = Field::make(2);
  auto census = testing::corank_census(2, 6, [&](long long code) {
    Digits d{code, 2};
    FqMatrix m(f2, 2, 3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) m.at(i, j) = Elem(d.next());
    return m;
  });
  auto dist = rect_rank_dist_exact(2, 3, 2);
  for (int r = 0; r <= 2; ++r) CHECK(dist.weights[r] == census.mass_at(3 - r));
}

TEST_CASE("drift constant") {
  CHECK(mu_n_exact(2, 2) == rat(20, 29));
  CHECK(mu_n(2, 2) == doctest::Approx(20.0 / 29).epsilon(1e-12));
  CHECK(mu_limit(2, Parity::even) == doctest::Approx(1.1892039999).epsilon(1e-8));
  CHECK(mu_limit(2, Parity::odd) == doctest::Approx(1.1892102301).epsilon(1e-8));
  CHECK(std::abs(mu_n(10, 2) - mu_limit(2, Parity::even)) <= 5 * std::pow(2.0, -5));
  CHECK_THROWS_AS(mu_n_exact(3, 2), OddN);
  // odd n values feed the same formula with the sqrt(q) carried separately
  CHECK(mu_n(31, 2) == doctest::Approx(mu_limit(2, Parity::odd)).epsilon(2e-4));
}

TEST_CASE("corank of C_2k: exact DP vs enumeration") {
  auto even11 = corank_dist_even_exact(1, 1, 2, 8);
  CHECK(pmf_equals(even11, {{0, rat(3, 4)}, {1, rat(1, 4)}}));

  auto even0 = corank_dist_even_exact(3, 0, 5, 8);
  CHECK(pmf_equals(even0, {{0, Rational(1)}}));

  // all 2^16 assignments of (A11, A21, A22, A32), C_4 is 6x4
  auto f2 = Field::make(2);
  auto census = testing::corank_census(2, 16, [&](long long code) {
    Digits d{code, 2};
    std::vector<FqMatrix> blocks;
    for (int b = 0; b < 4; ++b) {
      FqMatrix blk(f2, 2, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) blk.at(i, j) = Elem(d.next());
      blocks.push_back(blk);
    }
    return testing::assemble_prefix(f2, 2, blocks, 4);
  });
  auto dp = corank_dist_even_exact(2, 2, 2, 8);
  CHECK(dp.tail_mass == 0);
  for (long long v = 0; v <= 4; ++v) CHECK(dp.mass_at(v) == census.mass_at(v));
}

TEST_CASE("corank of C_2k-1: exact DP vs enumeration") {
  CHECK(pmf_equals(corank_dist_odd_exact(1, 1, 2, 8),
                   {{0, rat(1, 2)}, {1, rat(1, 2)}}));
  CHECK(pmf_equals(corank_dist_odd_exact(2, 1, 2, 8),
                   {{0, rat(6, 16)}, {1, rat(9, 16)}, {2, rat(1, 16)}}));

  auto f2 = Field::make(2);
  auto census = testing::corank_census(2, 12, [&](long long code) {
    Digits d{code, 2};
    std::vector<FqMatrix> blocks;
    for (int b = 0; b < 3; ++b) {
      FqMatrix blk(f2, 2, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) blk.at(i, j) = Elem(d.next());
      blocks.push_back(blk);
    }
    return testing::assemble_prefix(f2, 2, blocks, 3);  // C_3
  });
  auto dp = corank_dist_odd_exact(2, 2, 2, 8);
  for (long long v = 0; v <= 4; ++v) CHECK(dp.mass_at(v) == census.mass_at(v));
}

TEST_CASE("corank of truncated matrix: exact DP vs enumeration") {
  // visible entries of hat-C_2 at n=2: surviving row of A11, all of A21 and
  // A22, surviving row of A32
  auto f2 = Field::make(2);
  auto census = testing::corank_census(2, 12, [&](long long code) {
    Digits d{code, 2};
    FqMatrix m(f2, 4, 4);
    m.at(0, 0) = Elem(d.next());
    m.at(0, 1) = Elem(d.next());
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 4; ++j) m.at(1 + i, j) = Elem(d.next());
    m.at(3, 2) = Elem(d.next());
    m.at(3, 3) = Elem(d.next());
    return m;
  });
  auto dp = corank_dist_truncated_exact(2, 1, 2, 10);
  CHECK(dp.total() == 1);
  CHECK(dp.tail_mass == 0);
  for (long long v = 0; v <= 4; ++v) CHECK(dp.mass_at(v) == census.mass_at(v));
  CHECK_THROWS_AS(corank_dist_truncated_exact(3, 1, 2, 10), OddN);
}

TEST_CASE("corank of product chain: exact DP vs enumeration") {
  CHECK(pmf_equals(corank_dist_product_finite_exact(1, 2, 2),
                   {{0, rat(1, 4)}, {1, rat(3, 4)}}));

  // k = 1 reduces to the corank of one uniform square block
  auto one = corank_dist_product_finite_exact(3, 1, 2);
  auto rect = rect_rank_dist_exact(3, 3, 2);
  for (int r = 0; r <= 3; ++r) CHECK(one.mass_at(3 - r) == rect.weights[r]);

  // enumeration over all 16^2 diagonal-block pairs at n=2, q=2
  auto f2 = Field::make(2);
  auto census = testing::corank_census(2, 8, [&](long long code) {
    Digits d{code, 2};
    FqMatrix m(f2, 4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m.at(i, j) = Elem(d.next());
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m.at(2 + i, 2 + j) = Elem(d.next());
    m.at(2, 0) = 1;
    m.at(3, 1) = 1;
    return m;
  });
  auto dp = corank_dist_product_finite_exact(2, 2, 2);
  for (long long v = 0; v <= 2; ++v) CHECK(dp.mass_at(v) == census.mass_at(v));
}

TEST_CASE("float DP mirrors the exact DP") {
  auto exact = to_float(corank_dist_even_exact(3, 5, 2, 12));
  auto fl = corank_dist_even(3, 5, 2, 12);
  CHECK(tv_distance(exact, fl) < 1e-13);

  auto texact = to_float(corank_dist_truncated_exact(4, 3, 3, 16));
  auto tfl = corank_dist_truncated(4, 3, 3, 16);
  CHECK(tv_distance(texact, tfl) < 1e-13);
}

TEST_CASE("cap handling") {
  // forcing a tiny cap must funnel mass into the tail, never lose it
  auto p = corank_dist_even_exact(2, 3, 2, 0);
  CHECK(p.total() == 1);
  CHECK(p.tail_mass > 0);
  CHECK_THROWS_AS(corank_dist_even(2, 3, 2, 0, 1e-9), CapTooSmall);
  auto auto_p = corank_dist_even_tailbounded(2, 3, 2, 1e-9);
  CHECK(auto_p.tail_mass <= 1e-9);
}

TEST_CASE("product limit pmf") {
  CHECK(product_corank_pmf(2, 1, 0) == doctest::Approx(0.2887880951).epsilon(1e-9));
  CHECK(product_corank_pmf(2, 2, 0) == doctest::Approx(0.083399).epsilon(1e-5));
  double total = 0;
  for (int j = 0; j <= 20; ++j) total += product_corank_pmf(2, 2, j);
  CHECK(std::abs(total - 1.0) < 1e-10);
  CHECK_THROWS_AS(product_corank_pmf(4, 1, 0), InvalidSpec);  // prime q only
}

TEST_CASE("chain sampling") {
  ChainSpec chain(3, 2);
  Rng rng(1);
  // from x0 = n the next state is 0 with probability 1
  auto path = sample_chain(chain, 3, 5, rng);
  CHECK(path[0] == 3);
  CHECK(path[1] == 0);

  Rng r1(77), r2(77);
  CHECK(sample_chain(chain, 0, 100, r1) == sample_chain(chain, 0, 100, r2));

  // empirical transition frequencies from state 0 vs the exact row
  ChainSpec c42(4, 2);
  EmpiricalPmf emp;
  Rng r3(5);
  for (int i = 0; i < 100000; ++i) emp.add(c42.step(0, r3));
  Pmf row;
  row.weights.resize(5);
  for (int r = 0; r <= 4; ++r) row.weights[r] = c42.prob(0, r);
  CHECK(tv_distance(emp.to_pmf(), row) < 0.02);
}

TEST_CASE("rescaled path") {
  std::vector<int> path = {1, 2, 0, 2, 1, 1, 2};
  // t = 0 -> doubled value 2 X_0 - n
  CHECK(rescale_chain_path(path, 2, 2, 0.0) == 2 * 1 - 2);
  // n=2, q=2, t=0.6 -> index 2 floor(2 * 0.6) = 2
  CHECK(rescale_index(2, 2, 0.6) == 2);
  CHECK(rescale_chain_path(path, 2, 2, 0.6) == 2 * path[2] - 2);
  CHECK_THROWS_AS(rescale_chain_path(path, 2, 2, 100.0), IndexOutOfRange);
}

TEST_CASE("pmf json export") {
  Pmf p;
  p.offset = 0;
  p.weights = {0.25, 0.5, 0.25};
  auto j = nlohmann::json::parse(pmf_to_json(p, "float64"));
  CHECK(j["offset"] == 0);
  CHECK(j["weights"].size() == 3);
  CHECK(j["mode"] == "float64");
  CHECK(j["tail_mass"] == 0.0);
}

}  // TEST_SUITE
