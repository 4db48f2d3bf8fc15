#include "fqlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fqlab {

void EmpiricalPmf::ensure(long long outcome) {
  if (counts_.empty()) {
    offset_ = outcome;
    counts_.assign(1, 0);
    return;
  }
  if (outcome < offset_) {
    counts_.insert(counts_.begin(), size_t(offset_ - outcome), 0);
    offset_ = outcome;
  } else if (outcome >= offset_ + (long long)counts_.size()) {
    counts_.resize(size_t(outcome - offset_ + 1), 0);
  }
}

void EmpiricalPmf::add(long long outcome, long long count) {
  ensure(outcome);
  counts_[size_t(outcome - offset_)] += count;
  trials_ += count;
}

void EmpiricalPmf::merge(const EmpiricalPmf& other) {
  for (size_t i = 0; i < other.counts_.size(); ++i)
    if (other.counts_[i])
      add(other.offset_ + (long long)i, other.counts_[i]);
}

long long EmpiricalPmf::count_at(long long outcome) const {
  long long i = outcome - offset_;
  if (i < 0 || i >= (long long)counts_.size()) return 0;
  return counts_[size_t(i)];
}

Pmf EmpiricalPmf::to_pmf() const {
  Pmf out;
  out.offset = offset_;
  out.weights.reserve(counts_.size());
  for (long long c : counts_)
    out.weights.push_back(trials_ ? double(c) / double(trials_) : 0.0);
  out.trim();
  return out;
}

std::string EmpiricalPmf::to_csv() const {
  std::ostringstream os;
  os << "outcome,count,frequency\n";
  for (size_t i = 0; i < counts_.size(); ++i) {
    if (!counts_[i]) continue;
    os << (offset_ + (long long)i) << ',' << counts_[i] << ','
       << (trials_ ? double(counts_[i]) / double(trials_) : 0.0) << '\n';
  }
  return os.str();
}

TvParts tv_distance_parts(const Pmf& p, const Pmf& r) {
  TvParts out;
  if (p.weights.empty() && r.weights.empty()) {
    out.conservative = (p.tail_mass + r.tail_mass) / 2;
    return out;
  }
  long long lo = std::min(p.min_value(), r.min_value());
  long long hi = std::max(p.max_value(), r.max_value());
  double acc = 0;
  for (long long v = lo; v <= hi; ++v) acc += std::abs(p.mass_at(v) - r.mass_at(v));
  out.truncated = acc / 2;
  out.conservative = out.truncated + (p.tail_mass + r.tail_mass) / 2;
  return out;
}

double tv_distance(const Pmf& p, const Pmf& r) {
  return tv_distance_parts(p, r).conservative;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double gaussian_fit_check(const Pmf& p, double mean, double sd) {
  if (!(sd > 0)) throw InvalidSpec("gaussian_fit_check needs sd > 0");
  double sup = 0;
  double cdf = 0;
  for (size_t i = 0; i < p.weights.size(); ++i) {
    long long x = p.offset + (long long)i;
    double z = (double(x) - mean) / sd;
    double phi = normal_cdf(z);
    sup = std::max(sup, std::abs(cdf - phi));  // left limit at x
    cdf += p.weights[i];
    sup = std::max(sup, std::abs(cdf - phi));  // value at x
  }
  return sup;
}

long long dkw_trials(double tv_target, double confidence, int support) {
  if (!(tv_target > 0 && tv_target < 1)) throw InvalidSpec("tv_target in (0,1)");
  if (support < 1) throw InvalidSpec("support must be positive");
  double delta = 1.0 - confidence;
  if (delta >= 1.0) return 1;
  double s = double(support);
  double n = s * s / (8 * tv_target * tv_target) * std::log(2 * s / delta);
  return std::max(1LL, (long long)std::ceil(n));
}

}  // namespace fqlab
