#include "fqlab/walk.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fqlab {

namespace {

void check_parity(const WalkSpec& spec) {
  bool even_pos = (spec.start % 2) == 0;
  if ((spec.parity == Parity::even) != even_pos)
    throw InvalidSpec("walk start point does not lie on the parity lattice");
}

// q^{a2/2} for doubled positions
inline double powq_half(int q, int a2) {
  return std::exp2(0.5 * a2 * std::log2(double(q)));
}

}  // namespace

WalkPath sample_walk(const WalkSpec& spec, double t, Rng& rng) {
  if (t < 0) throw InvalidSpec("negative time");
  check_parity(spec);
  WalkPath path;
  path.times.push_back(0.0);
  path.states.push_back(spec.start);
  Lat pos = spec.start;
  double now = 0;
  for (;;) {
    double up = powq_half(spec.q, -pos), down = powq_half(spec.q, pos);
    double hold = rng.exponential(up + down);
    if (now + hold > t) break;
    now += hold;
    bool jump_up = rng.uniform01() <= up / (up + down);
    pos += jump_up ? 2 : -2;
    if (std::abs(pos) > 2 * kWalkPositionCap)
      throw WalkCapExceeded("walk left [-64, 64]");
    if (!jump_up) ++path.downs;
    path.times.push_back(now);
    path.states.push_back(pos);
  }
  path.terminal = pos;
  return path;
}

std::pair<long long, Lat> sample_D(const WalkSpec& spec, double t, Rng& rng) {
  if (t < 0) throw InvalidSpec("negative time");
  check_parity(spec);
  Lat pos = spec.start;
  long long downs = 0;
  double now = 0;
  for (;;) {
    double up = powq_half(spec.q, -pos), down = powq_half(spec.q, pos);
    double hold = rng.exponential(up + down);
    if (now + hold > t) break;
    now += hold;
    bool jump_up = rng.uniform01() <= up / (up + down);
    pos += jump_up ? 2 : -2;
    if (std::abs(pos) > 2 * kWalkPositionCap)
      throw WalkCapExceeded("walk left [-64, 64]");
    if (!jump_up) ++downs;
  }
  return {downs, pos};
}

Lat floor_start(int a_floor, Parity parity) {
  return parity == Parity::even ? Lat(2 * a_floor) : Lat(2 * a_floor - 1);
}

int default_a_floor(int q, double t) {
  int from_t = t > 0 ? int(std::ceil(std::log(1.0 / t) / std::log(double(q)))) : 0;
  return -std::max(20, from_t + 10);
}

std::pair<long long, Lat> sample_D_minus_infinity(int q, double t, Parity parity,
                                                  Rng& rng, int a_floor) {
  WalkSpec spec{q, parity, floor_start(a_floor, parity)};
  return sample_D(spec, t, rng);
}

double floor_stabilization_tv(int q, double t, Parity parity, int a_floor,
                              long long trials, std::uint64_t seed) {
  std::map<std::pair<long long, Lat>, long long> a, b;
  for (long long i = 0; i < trials; ++i) {
    // matched streams: the same per-trial stream feeds both floors
    Rng r1(seed, std::uint64_t(i));
    Rng r2(seed, std::uint64_t(i));
    ++a[sample_D_minus_infinity(q, t, parity, r1, a_floor)];
    ++b[sample_D_minus_infinity(q, t, parity, r2, a_floor - 5)];
  }
  double tv = 0;
  for (const auto& [key, cnt] : a) {
    auto it = b.find(key);
    double pb = it == b.end() ? 0.0 : double(it->second) / trials;
    tv += std::abs(double(cnt) / trials - pb);
  }
  for (const auto& [key, cnt] : b)
    if (!a.count(key)) tv += double(cnt) / trials;
  return tv / 2;
}

DInftySampler::DInftySampler(int q, double t, Parity parity,
                             std::optional<int> a_floor, long long validate_trials,
                             std::uint64_t validate_seed)
    : q_(q), t_(t), parity_(parity) {
  if (t <= 0) throw InvalidSpec("limit law needs t > 0");
  a_floor_ = a_floor.value_or(default_a_floor(q, t));
  double tv = floor_stabilization_tv(q, t, parity, a_floor_, validate_trials,
                                     validate_seed);
  if (tv >= 1e-2)
    throw NotStabilized("floor " + std::to_string(a_floor_) +
                        " fails the stabilization criterion, TV = " +
                        std::to_string(tv));
}

std::pair<long long, Lat> DInftySampler::sample(Rng& rng) const {
  return sample_D_minus_infinity(q_, t_, parity_, rng, a_floor_);
}

Pmf ju_pmf(int q, int u, int cap) {
  if (u < 0) throw InvalidSpec("J_u needs u >= 0");
  Pmf out;
  out.weights.assign(cap + 1, 0.0);
  double inf = qpoch1_inf(q);
  double sum = 0;
  for (int j = 0; j <= cap; ++j) {
    double w = std::pow(double(q), -double(j) * (j + u)) /
               (qpoch1(q, j) * qpoch1(q, j + u)) * inf;
    out.weights[j] = w;
    sum += w;
  }
  out.tail_mass = std::max(0.0, 1.0 - sum);
  return out;
}

long long sample_pmf(const Pmf& pmf, Rng& rng) {
  double u = rng.uniform01();
  double acc = 0;
  for (size_t i = 0; i < pmf.weights.size(); ++i) {
    acc += pmf.weights[i];
    if (u <= acc) return pmf.offset + (long long)i;
  }
  return pmf.max_value();
}

long long sample_Ju(int q, int u, Rng& rng) { return sample_pmf(ju_pmf(q, u), rng); }

LtSampler::LtSampler(int q, double t) : q_(q), t_(t) {
  if (t < 0) throw InvalidSpec("negative time");
  ju_.reserve(kWalkPositionCap + 1);
  for (int u = 0; u <= kWalkPositionCap; ++u) ju_.push_back(ju_pmf(q_, u));
}

long long LtSampler::sample(Rng& rng) const {
  WalkSpec spec{q_, Parity::even, 0};
  auto [downs, z2] = sample_D(spec, t_, rng);
  long long z = z2 / 2;
  long long zplus = z > 0 ? z : 0;
  long long zabs = z < 0 ? -z : z;
  return downs + zplus + sample_pmf(ju_[size_t(zabs)], rng);
}

long long sample_Lt(int q, double t, Rng& rng) {
  LtSampler sampler(q, t);
  return sampler.sample(rng);
}

ExcursionEstimates excursion_estimates(int q, long long trials, Rng& rng,
                                       int bootstrap_rounds) {
  if (trials < 1) throw InvalidSpec("need at least one excursion");
  std::vector<double> us(trials), ds(trials);
  for (long long i = 0; i < trials; ++i) {
    Lat pos = 0;
    double u = 0;
    long long downs = 0;
    do {
      double up = powq_half(q, -pos), down = powq_half(q, pos);
      u += rng.exponential(up + down);
      bool jump_up = rng.uniform01() <= up / (up + down);
      pos += jump_up ? 2 : -2;
      if (std::abs(pos) > 2 * kWalkPositionCap)
        throw WalkCapExceeded("walk left [-64, 64]");
      if (!jump_up) ++downs;
    } while (pos != 0);
    us[i] = u;
    ds[i] = double(downs);
  }

  auto stats_of = [&](double su, double sd, double suu, double sdd, double sud,
                      long long n) {
    ExcursionEstimates e;
    e.trials = n;
    e.e_u = su / n;
    e.e_dd = sd / n;
    e.mu_hat = e.e_dd / e.e_u;
    // mean of V = dD - mu_hat U vanishes by construction
    e.var_v = (sdd - 2 * e.mu_hat * sud + e.mu_hat * e.mu_hat * suu) / n;
    e.sigma2 = e.var_v / e.e_u;
    return e;
  };

  double su = 0, sd = 0, suu = 0, sdd = 0, sud = 0;
  for (long long i = 0; i < trials; ++i) {
    su += us[i];
    sd += ds[i];
    suu += us[i] * us[i];
    sdd += ds[i] * ds[i];
    sud += us[i] * ds[i];
  }
  ExcursionEstimates est = stats_of(su, sd, suu, sdd, sud, trials);

  // bootstrap standard errors
  double m_u = 0, m_d = 0, m_mu = 0, m_s2 = 0;
  double v_u = 0, v_d = 0, v_mu = 0, v_s2 = 0;
  for (int b = 0; b < bootstrap_rounds; ++b) {
    double bu = 0, bd = 0, buu = 0, bdd = 0, bud = 0;
    for (long long i = 0; i < trials; ++i) {
      long long idx = (long long)rng.below(std::uint32_t(trials));
      bu += us[idx];
      bd += ds[idx];
      buu += us[idx] * us[idx];
      bdd += ds[idx] * ds[idx];
      bud += us[idx] * ds[idx];
    }
    ExcursionEstimates e = stats_of(bu, bd, buu, bdd, bud, trials);
    auto upd = [b](double& mean, double& m2, double x) {
      double d1 = x - mean;
      mean += d1 / (b + 1);
      m2 += d1 * (x - mean);
    };
    upd(m_u, v_u, e.e_u);
    upd(m_d, v_d, e.e_dd);
    upd(m_mu, v_mu, e.mu_hat);
    upd(m_s2, v_s2, e.sigma2);
  }
  if (bootstrap_rounds > 1) {
    est.se_u = std::sqrt(v_u / (bootstrap_rounds - 1));
    est.se_dd = std::sqrt(v_d / (bootstrap_rounds - 1));
    est.se_mu = std::sqrt(v_mu / (bootstrap_rounds - 1));
    est.se_sigma2 = std::sqrt(v_s2 / (bootstrap_rounds - 1));
  }
  return est;
}

}  // namespace fqlab
