#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "fqlab/common.hpp"

namespace fqlab {

// The finite field F_q, q = p^e <= 2^16. Prime fields use modular
// arithmetic. Extension fields encode an element sum c_i x^i as the integer
// sum c_i p^i and multiply through log/antilog tables built over a fixed
// irreducible polynomial, so a given q yields the same tables in every build.
//
// Immutable after construction; share one instance across threads freely.
class Field {
 public:
  static constexpr std::uint32_t kMaxQ = 1u << 16;

  // Throws NotPrimePower / CapExceeded.
  static std::shared_ptr<const Field> make(std::uint32_t q);

  std::uint32_t q() const { return q_; }
  std::uint32_t p() const { return p_; }
  int e() const { return e_; }

  Elem add(Elem a, Elem b) const {
    if (e_ == 1) {
      std::uint32_t s = std::uint32_t(a) + b;
      return Elem(s >= p_ ? s - p_ : s);
    }
    if (p_ == 2) return Elem(a ^ b);
    return add_digits(a, b);
  }

  Elem neg(Elem a) const {
    if (e_ == 1) return Elem(a == 0 ? 0 : p_ - a);
    if (p_ == 2) return a;
    return neg_digits(a);
  }

  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    if (e_ == 1) return Elem(std::uint32_t(a) * b % p_);
    std::uint32_t s = std::uint32_t(log_[a]) + log_[b];
    if (s >= q_ - 1) s -= q_ - 1;
    return exp_[s];
  }

  // Throws DivisionByZero on inv(0).
  Elem inv(Elem a) const;

  Elem pow(Elem a, long long k) const;

  // Non-leading coefficients c_0..c_{e-1} of the modulus polynomial
  // x^e + c_{e-1} x^{e-1} + ... + c_0 (empty for prime fields).
  const std::vector<Elem>& modulus_coeffs() const { return mod_coeffs_; }

  // Exhaustive check of the field axioms; intended for q <= 256.
  bool axioms_ok() const;

 private:
  Field() = default;
  Elem add_digits(Elem a, Elem b) const;
  Elem neg_digits(Elem a) const;

  std::uint32_t q_ = 0, p_ = 0;
  int e_ = 1;
  std::vector<Elem> exp_, log_;  // extension fields only
  std::vector<Elem> mod_coeffs_;
};

using FieldPtr = std::shared_ptr<const Field>;

}  // namespace fqlab
