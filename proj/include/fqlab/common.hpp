#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace fqlab {

// Exact arithmetic used by the rational-mode chain computations.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Field elements are stored as integers in [0, q), q <= 2^16.
using Elem = std::uint16_t;

// Lattice points of the limit walk, stored as doubled values so that the
// half-integer lattice Z + 1/2 (odd n) is represented exactly: Lat v means
// the real position v/2.
using Lat = int;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPrimePower : Error { using Error::Error; };
struct CapExceeded : Error { using Error::Error; };
struct DivisionByZero : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct InvalidSpec : Error { using Error::Error; };
struct CapTooSmall : Error { using Error::Error; };
struct OddN : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct NotStabilized : Error { using Error::Error; };
struct WalkCapExceeded : Error { using Error::Error; };
struct KernelTooLarge : Error { using Error::Error; };
struct BadWindow : Error { using Error::Error; };
struct BadLength : Error { using Error::Error; };

}  // namespace fqlab
