#pragma once

#include <cmath>
#include <vector>

#include "fqlab/common.hpp"

namespace fqlab {

// Probability mass function on the integers: weights[i] is the mass at
// offset + i, tail_mass is whatever a computation could not keep below its
// defect cap. Exported distributions always state their tail.
template <class T>
struct BasicPmf {
  long long offset = 0;
  std::vector<T> weights;
  T tail_mass{};

  T mass_at(long long v) const {
    long long i = v - offset;
    if (i < 0 || i >= (long long)weights.size()) return T{};
    return weights[i];
  }

  T total() const {
    T s = tail_mass;
    for (const auto& w : weights) s += w;
    return s;
  }

  long long min_value() const { return offset; }
  long long max_value() const { return offset + (long long)weights.size() - 1; }

  void trim() {
    size_t lo = 0;
    while (lo < weights.size() && weights[lo] == T{}) ++lo;
    size_t hi = weights.size();
    while (hi > lo && weights[hi - 1] == T{}) --hi;
    if (lo > 0) offset += (long long)lo;
    weights.assign(weights.begin() + lo, weights.begin() + hi);
  }
};

using Pmf = BasicPmf<double>;
using RationalPmf = BasicPmf<Rational>;

inline Pmf to_float(const RationalPmf& p) {
  Pmf out;
  out.offset = p.offset;
  out.weights.reserve(p.weights.size());
  for (const auto& w : p.weights)
    out.weights.push_back(w.template convert_to<double>());
  out.tail_mass = p.tail_mass.template convert_to<double>();
  return out;
}

inline double pmf_mean(const Pmf& p) {
  double s = 0;
  for (size_t i = 0; i < p.weights.size(); ++i)
    s += double(p.offset + (long long)i) * p.weights[i];
  return s;
}

inline double pmf_stddev(const Pmf& p) {
  double m = pmf_mean(p), s = 0;
  for (size_t i = 0; i < p.weights.size(); ++i) {
    double d = double(p.offset + (long long)i) - m;
    s += d * d * p.weights[i];
  }
  return std::sqrt(s);
}

}  // namespace fqlab
