#include <doctest.h>

#include "fqlab/gf.hpp"

using namespace fqlab;

TEST_SUITE("gf") {

TEST_CASE("characteristic two") {
  auto f = Field::make(2);
  CHECK(f->add(1, 1) == 0);
  CHECK(f->mul(1, 1) == 1);
}

TEST_CASE("non prime powers rejected") {
  CHECK_THROWS_AS(Field::make(6), NotPrimePower);
  CHECK_THROWS_AS(Field::make(12), NotPrimePower);
  CHECK_THROWS_AS(Field::make(1), NotPrimePower);
  CHECK_THROWS_AS(Field::make(1 << 17), CapExceeded);
}

TEST_CASE("F4 cubes of nonzero elements are one") {
  auto f = Field::make(4);
  for (Elem a = 1; a < 4; ++a) CHECK(f->pow(a, 3) == 1);
}

TEST_CASE("inverse of zero") {
  CHECK_THROWS_AS(Field::make(5)->inv(0), DivisionByZero);
  CHECK_THROWS_AS(Field::make(8)->inv(0), DivisionByZero);
}

TEST_CASE("prime fields agree with integer arithmetic mod q") {
  for (std::uint32_t q : {2u, 3u, 5u, 13u, 251u}) {
    auto f = Field::make(q);
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b) {
        CHECK(f->add(Elem(a), Elem(b)) == (a + b) % q);
        CHECK(f->mul(Elem(a), Elem(b)) == a * b % q);
        CHECK(f->sub(Elem(a), Elem(b)) == (a + q - b) % q);
      }
  }
}

TEST_CASE("field axioms hold exhaustively for every q <= 256") {
  auto is_prime_power = [](std::uint32_t q) {
    std::uint32_t p = 2;
    while (p * p <= q && q % p != 0) ++p;
    if (p * p > q) p = q;
    while (q % p == 0) q /= p;
    return q == 1;
  };
  for (std::uint32_t q = 2; q <= 256; ++q) {
    if (!is_prime_power(q)) continue;
    CAPTURE(q);
    CHECK(Field::make(q)->axioms_ok());
  }
}

TEST_CASE("extension field tables are deterministic") {
  // lexicographically smallest irreducible polynomials
  auto f4 = Field::make(4);
  CHECK(f4->modulus_coeffs() == std::vector<Elem>{1, 1});  // x^2 + x + 1
  auto f16 = Field::make(16);
  CHECK(f16->modulus_coeffs() == std::vector<Elem>{1, 1, 0, 0});  // x^4 + x + 1
  auto f9 = Field::make(9);
  CHECK(f9->modulus_coeffs() == std::vector<Elem>{1, 0});  // x^2 + 1 over F_3

  auto g = Field::make(16);
  for (Elem a = 0; a < 16; ++a)
    for (Elem b = 0; b < 16; ++b) CHECK(f16->mul(a, b) == g->mul(a, b));
}

TEST_CASE("large extension field basic structure") {
  auto f = Field::make(1 << 16);
  CHECK(f->p() == 2);
  CHECK(f->e() == 16);
  Elem x = 7;
  CHECK(f->mul(x, f->inv(x)) == 1);
  CHECK(f->pow(2, (1 << 16) - 1) == 1);  // multiplicative group order
}

}  // TEST_SUITE
