#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fqlab/chain.hpp"
#include "fqlab/pmf.hpp"
#include "fqlab/rng.hpp"

namespace fqlab {

// Continuous-time walk with up-rate q^{-a} and down-rate q^{a} at position a,
// on Z (even parity) or Z + 1/2 (odd parity). Positions are doubled integers
// (Lat), so half-integers are exact.
struct WalkSpec {
  int q = 2;
  Parity parity = Parity::even;
  Lat start = 0;  // doubled; must have matching parity
};

struct WalkPath {
  std::vector<double> times;  // T_0 = 0 and every jump time <= t
  std::vector<Lat> states;    // embedded states, states[0] = start
  long long downs = 0;        // downward jumps up to the query time
  Lat terminal = 0;           // Z_t
};

// The stationary pull makes |position| > 64 astronomically unlikely; rather
// than clamp silently, crossing the cap raises WalkCapExceeded.
constexpr int kWalkPositionCap = 64;

WalkPath sample_walk(const WalkSpec& spec, double t, Rng& rng);

// (D, Z_t) without storing the trajectory. A jump landing exactly at time t
// is included in the count.
std::pair<long long, Lat> sample_D(const WalkSpec& spec, double t, Rng& rng);

// Start point (doubled) for a walk released at integer level a_floor:
// a_floor itself for even parity, a_floor - 1/2 for odd.
Lat floor_start(int a_floor, Parity parity);

int default_a_floor(int q, double t);

// Empirical total-variation distance between the joint (D, Z_t) laws started
// at a_floor and at a_floor - 5, with matched per-trial streams.
double floor_stabilization_tv(int q, double t, Parity parity, int a_floor,
                              long long trials, std::uint64_t seed);

std::pair<long long, Lat> sample_D_minus_infinity(int q, double t, Parity parity,
                                                  Rng& rng, int a_floor);

// Validates the floor once (throws NotStabilized if the TV criterion fails),
// then hands out draws of the a -> -infinity limit law.
class DInftySampler {
 public:
  DInftySampler(int q, double t, Parity parity,
                std::optional<int> a_floor = std::nullopt,
                long long validate_trials = 20000,
                std::uint64_t validate_seed = 0x5eedf100dULL);
  std::pair<long long, Lat> sample(Rng& rng) const;
  int a_floor() const { return a_floor_; }

 private:
  int q_;
  double t_;
  Parity parity_;
  int a_floor_;
};

// P(J_u = j) = q^{-j(j+u)} / ((q^{-1};q^{-1})_j (q^{-1};q^{-1})_{j+u}) *
// (q^{-1};q^{-1})_inf, truncated at `cap` with the remainder in tail_mass.
Pmf ju_pmf(int q, int u, int cap = 64);

// Inverse-CDF draw from a pmf over Z_{>=0} (tail mass goes to the cap).
long long sample_pmf(const Pmf& pmf, Rng& rng);
long long sample_Ju(int q, int u, Rng& rng);

// L_t = D_{0,t} + |Z_t|_+ + J_{|Z_t|} with an independent J draw.
class LtSampler {
 public:
  LtSampler(int q, double t);
  long long sample(Rng& rng) const;

 private:
  int q_;
  double t_;
  std::vector<Pmf> ju_;  // ju_[u] for u = 0..kWalkPositionCap
};
long long sample_Lt(int q, double t, Rng& rng);

// Plug-in estimates from i.i.d. excursions of Z from 0 back to 0:
//   e_u = mean excursion length, e_dd = mean down-steps per excursion,
//   mu_hat = e_dd / e_u, V_i = dD_i - mu_hat U_i, sigma2 = Var(V) / e_u.
// Standard errors come from a nonparametric bootstrap over excursions.
struct ExcursionEstimates {
  double e_u = 0, e_dd = 0, mu_hat = 0, var_v = 0, sigma2 = 0;
  double se_u = 0, se_dd = 0, se_mu = 0, se_sigma2 = 0;
  long long trials = 0;
};

ExcursionEstimates excursion_estimates(int q, long long trials, Rng& rng,
                                       int bootstrap_rounds = 200);

}  // namespace fqlab
