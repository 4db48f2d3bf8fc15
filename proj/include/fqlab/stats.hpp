#pragma once

#include <string>
#include <vector>

#include "fqlab/pmf.hpp"

namespace fqlab {

// Integer-outcome histogram with an associative, commutative merge, so
// worker-local copies can be reduced in any order.
class EmpiricalPmf {
 public:
  void add(long long outcome, long long count = 1);
  void merge(const EmpiricalPmf& other);

  long long trials() const { return trials_; }
  long long count_at(long long outcome) const;
  Pmf to_pmf() const;

  // (outcome, count, frequency) rows
  std::string to_csv() const;

 private:
  void ensure(long long outcome);
  long long offset_ = 0;
  std::vector<long long> counts_;
  long long trials_ = 0;
};

// Total variation with tails treated as disjoint worst case:
//   truncated    = 1/2 sum |p - r| over the explicit weights
//   conservative = truncated + (tail_p + tail_r) / 2
// tv_distance returns the conservative value so acceptance tests can never
// understate a distance.
struct TvParts {
  double truncated = 0;
  double conservative = 0;
};
TvParts tv_distance_parts(const Pmf& p, const Pmf& r);
double tv_distance(const Pmf& p, const Pmf& r);

double normal_cdf(double z);

// Kolmogorov distance between the integer law p and N(mean, sd^2): the sup
// over integer cut points of the discrepancy, comparing Phi against both the
// left and right limits of the CDF of p so atoms are fully accounted for.
double gaussian_fit_check(const Pmf& p, double mean, double sd);

// Trials sufficient for the empirical pmf of a law on `support` atoms to be
// within tv_target of the truth with the given confidence:
// if every |hat p_i - p_i| <= 2 eps / S then TV <= eps; by Hoeffding plus a
// union bound that fails with probability at most 2 S exp(-8 N eps^2 / S^2),
// so N = ceil(S^2 / (8 eps^2) * log(2 S / delta)).
long long dkw_trials(double tv_target, double confidence, int support);

}  // namespace fqlab
