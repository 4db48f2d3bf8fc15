#include "fqlab/gf.hpp"

#include <algorithm>

namespace fqlab {

namespace {

// smallest prime factor, q >= 2
std::uint32_t smallest_factor(std::uint32_t q) {
  for (std::uint32_t d = 2; d * d <= q; ++d)
    if (q % d == 0) return d;
  return q;
}

// Polynomial helpers over F_p, coefficients little-endian in vectors.
using Poly = std::vector<std::uint32_t>;

int degree(const Poly& f) {
  for (int i = int(f.size()) - 1; i >= 0; --i)
    if (f[i]) return i;
  return -1;
}

// f mod g in place, g monic
void mod_into(Poly& f, const Poly& g, std::uint32_t p) {
  int dg = degree(g);
  for (int df = degree(f); df >= dg; df = degree(f)) {
    std::uint32_t c = f[df];
    int shift = df - dg;
    for (int i = 0; i <= dg; ++i) {
      std::uint32_t sub = c * g[i] % p;
      f[i + shift] = (f[i + shift] + p - sub) % p;
    }
  }
}

Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
  Poly out(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      out[i + j] = (out[i + j] + a[i] * b[j]) % p;
  }
  return out;
}

// Irreducibility of a monic degree-e polynomial by trial division with every
// monic polynomial of degree 1..e/2; fast enough since p^(e/2) <= 256 here.
bool is_irreducible(const Poly& f, std::uint32_t p, int e) {
  for (int d = 1; 2 * d <= e; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      Poly g(d + 1, 0);
      std::uint64_t c = code;
      for (int i = 0; i < d; ++i) {
        g[i] = std::uint32_t(c % p);
        c /= p;
      }
      g[d] = 1;
      Poly r = f;
      mod_into(r, g, p);
      if (degree(r) < 0) return false;
    }
  }
  return true;
}

// Lexicographically smallest monic irreducible polynomial of degree e over
// F_p, ordered by the base-p value of its non-leading coefficients.
Poly find_modulus(std::uint32_t p, int e) {
  std::uint64_t count = 1;
  for (int i = 0; i < e; ++i) count *= p;
  for (std::uint64_t code = 0; code < count; ++code) {
    Poly f(e + 1, 0);
    std::uint64_t c = code;
    for (int i = 0; i < e; ++i) {
      f[i] = std::uint32_t(c % p);
      c /= p;
    }
    f[e] = 1;
    if (is_irreducible(f, p, e)) return f;
  }
  throw Error("no irreducible polynomial found");  // unreachable
}

std::uint32_t encode(const Poly& f, std::uint32_t p, int e) {
  std::uint32_t v = 0;
  for (int i = e - 1; i >= 0; --i) v = v * p + (i < int(f.size()) ? f[i] : 0);
  return v;
}

Poly decode(std::uint32_t v, std::uint32_t p, int e) {
  Poly f(e, 0);
  for (int i = 0; i < e; ++i) {
    f[i] = v % p;
    v /= p;
  }
  return f;
}

std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

std::shared_ptr<const Field> Field::make(std::uint32_t q) {
  if (q > kMaxQ) throw CapExceeded("field cardinality above 2^16: " + std::to_string(q));
  if (q < 2) throw NotPrimePower("field cardinality must be at least 2");
  std::uint32_t p = smallest_factor(q);
  std::uint32_t r = q;
  int e = 0;
  while (r % p == 0) {
    r /= p;
    ++e;
  }
  if (r != 1)
    throw NotPrimePower(std::to_string(q) + " is not a prime power");

  auto f = std::shared_ptr<Field>(new Field());
  f->q_ = q;
  f->p_ = p;
  f->e_ = e;
  if (e == 1) return f;

  Poly mod = find_modulus(p, e);
  f->mod_coeffs_.assign(e, 0);
  for (int i = 0; i < e; ++i) f->mod_coeffs_[i] = Elem(mod[i]);

  auto raw_mul = [&](std::uint32_t a, std::uint32_t b) {
    Poly prod = poly_mul(decode(a, p, e), decode(b, p, e), p);
    mod_into(prod, mod, p);
    return encode(prod, p, e);
  };
  auto raw_pow = [&](std::uint32_t a, std::uint32_t k) {
    std::uint32_t acc = 1;
    while (k) {
      if (k & 1) acc = raw_mul(acc, a);
      a = raw_mul(a, a);
      k >>= 1;
    }
    return acc;
  };

  // smallest multiplicative generator
  auto factors = prime_factors(q - 1);
  std::uint32_t g = 0;
  for (std::uint32_t cand = 2; cand < q; ++cand) {
    bool ok = true;
    for (auto ell : factors)
      if (raw_pow(cand, (q - 1) / ell) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      g = cand;
      break;
    }
  }

  f->exp_.assign(q - 1, 0);
  f->log_.assign(q, 0);
  std::uint32_t acc = 1;
  for (std::uint32_t i = 0; i < q - 1; ++i) {
    f->exp_[i] = Elem(acc);
    f->log_[acc] = Elem(i);
    acc = raw_mul(acc, g);
  }
  return f;
}

Elem Field::add_digits(Elem a, Elem b) const {
  std::uint32_t out = 0, mult = 1, x = a, y = b;
  for (int i = 0; i < e_; ++i) {
    std::uint32_t s = x % p_ + y % p_;
    if (s >= p_) s -= p_;
    out += s * mult;
    mult *= p_;
    x /= p_;
    y /= p_;
  }
  return Elem(out);
}

Elem Field::neg_digits(Elem a) const {
  std::uint32_t out = 0, mult = 1, x = a;
  for (int i = 0; i < e_; ++i) {
    std::uint32_t d = x % p_;
    out += (d == 0 ? 0 : p_ - d) * mult;
    mult *= p_;
    x /= p_;
  }
  return Elem(out);
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw DivisionByZero("inverse of zero");
  if (e_ == 1) {
    // Fermat: a^(p-2)
    std::uint64_t acc = 1, base = a;
    std::uint32_t k = p_ - 2;
    while (k) {
      if (k & 1) acc = acc * base % p_;
      base = base * base % p_;
      k >>= 1;
    }
    return Elem(acc);
  }
  std::uint32_t l = log_[a];
  return exp_[l == 0 ? 0 : q_ - 1 - l];
}

Elem Field::pow(Elem a, long long k) const {
  if (k < 0) return pow(inv(a), -k);
  Elem acc = 1, base = a;
  while (k) {
    if (k & 1) acc = mul(acc, base);
    base = mul(base, base);
    k >>= 1;
  }
  return acc;
}

bool Field::axioms_ok() const {
  std::uint32_t q = q_;
  for (std::uint32_t a = 0; a < q; ++a) {
    if (add(Elem(a), 0) != a) return false;
    if (mul(Elem(a), 1) != a) return false;
    if (add(Elem(a), neg(Elem(a))) != 0) return false;
    if (a != 0 && mul(Elem(a), inv(Elem(a))) != 1) return false;
  }
  for (std::uint32_t a = 0; a < q; ++a)
    for (std::uint32_t b = 0; b < q; ++b) {
      if (add(Elem(a), Elem(b)) != add(Elem(b), Elem(a))) return false;
      if (mul(Elem(a), Elem(b)) != mul(Elem(b), Elem(a))) return false;
      for (std::uint32_t c = 0; c < q; ++c) {
        Elem ab_c = add(add(Elem(a), Elem(b)), Elem(c));
        Elem a_bc = add(Elem(a), add(Elem(b), Elem(c)));
        if (ab_c != a_bc) return false;
        Elem mab_c = mul(mul(Elem(a), Elem(b)), Elem(c));
        Elem ma_bc = mul(Elem(a), mul(Elem(b), Elem(c)));
        if (mab_c != ma_bc) return false;
        Elem lhs = mul(Elem(a), add(Elem(b), Elem(c)));
        Elem rhs = add(mul(Elem(a), Elem(b)), mul(Elem(a), Elem(c)));
        if (lhs != rhs) return false;
      }
    }
  return true;
}

}  // namespace fqlab
