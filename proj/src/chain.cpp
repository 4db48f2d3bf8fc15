#include "fqlab/chain.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace fqlab {

namespace {

Rational qpow(int q, long long e) {
  // q^e as an exact rational, e of either sign
  BigInt num = 1;
  long long a = e < 0 ? -e : e;
  BigInt base = q;
  while (a) {
    if (a & 1) num *= base;
    base *= base;
    a >>= 1;
  }
  if (e < 0) return Rational(1, num);
  return Rational(num);
}

// (q^{-a}; q)_r = prod_{i=0}^{r-1} (1 - q^{i-a})
Rational qpoch_exact(int q, int a, int r) {
  Rational out = 1;
  for (int i = 0; i < r; ++i) out *= 1 - qpow(q, i - a);
  return out;
}

bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

// Neumaier-compensated cell for the float DP.
struct DAcc {
  double v = 0, c = 0;
  void add(double x) {
    double t = v + x;
    if (std::abs(v) >= std::abs(x))
      c += (v - t) + x;
    else
      c += (x - t) + v;
    v = t;
  }
  double get() const { return v + c; }
  bool zero() const { return v == 0 && c == 0; }
};

struct RAcc {
  Rational v;
  void add(const Rational& x) { v += x; }
  const Rational& get() const { return v; }
  bool zero() const { return v == 0; }
};

template <class T>
struct Mode;
template <>
struct Mode<double> {
  using Acc = DAcc;
  static double tp(int n, int q, int d, int r) { return transition_prob(n, q, d, r); }
  static Pmf rect(int rows, int cols, int q) { return rect_rank_dist(rows, cols, q); }
  static double from(const Rational& r) { return r.convert_to<double>(); }
  static constexpr const char* name = "float64";
};
template <>
struct Mode<Rational> {
  using Acc = RAcc;
  static Rational tp(int n, int q, int d, int r) { return transition_prob_exact(n, q, d, r); }
  static RationalPmf rect(int rows, int cols, int q) { return rect_rank_dist_exact(rows, cols, q); }
  static Rational from(const Rational& r) { return r; }
  static constexpr const char* name = "rational";
};

// Joint DP lattice over (chain state d, defect). The defect axis is extended
// by n so a pair of substeps (+ n - r, then - r) never leaves the array; mass
// is folded into the tail only at pair boundaries, where the defect is
// monotone, so the tail is exact.
template <class T>
struct DefectDp {
  using Acc = typename Mode<T>::Acc;
  int n, q, cap, ext;
  std::vector<std::vector<T>> P;  // transition matrix
  std::vector<Acc> a, b;
  T tail{};

  DefectDp(int n_, int q_, int cap_) : n(n_), q(q_), cap(cap_), ext(cap_ + n_ + 1) {
    P.assign(n + 1, std::vector<T>(n + 1));
    for (int d = 0; d <= n; ++d)
      for (int r = 0; r <= n; ++r) P[d][r] = Mode<T>::tp(n, q, d, r);
    a.assign(size_t(n + 1) * ext, Acc{});
    b.assign(size_t(n + 1) * ext, Acc{});
  }

  size_t idx(int d, int def) const { return size_t(d) * ext + def; }

  void seed(int d, int def, const T& mass) { a[idx(d, def)].add(mass); }

  // one chain step; defect moves by (n - r) on odd substeps, by (-r) on even
  void substep(bool odd) {
    for (auto& cell : b) cell = Acc{};
    for (int d = 0; d <= n; ++d)
      for (int def = 0; def < ext; ++def) {
        const Acc& cell = a[idx(d, def)];
        if (cell.zero()) continue;
        T mass = cell.get();
        for (int r = 0; r <= n - d; ++r) {
          const T& p = P[d][r];
          if (p == T{}) continue;
          int nd = odd ? def + (n - r) : def - r;
          if (nd >= ext) continue;  // cannot happen: odd substep from def<=cap
          b[idx(r, nd)].add(mass * p);
        }
      }
    std::swap(a, b);
  }

  // fold defect > cap into the tail (call after even substeps only)
  void fold_tail() {
    for (int d = 0; d <= n; ++d)
      for (int def = cap + 1; def < ext; ++def) {
        Acc& cell = a[idx(d, def)];
        if (!cell.zero()) {
          tail += cell.get();
          cell = Acc{};
        }
      }
  }

  void pair_step() {
    substep(true);
    substep(false);
    fold_tail();
  }
};

inline double as_double(double v) { return v; }
inline double as_double(const Rational& v) { return v.convert_to<double>(); }

template <class T>
BasicPmf<T> finish_even(DefectDp<T>& dp, double tail_bound) {
  BasicPmf<T> out;
  out.weights.assign(dp.cap + 1, T{});
  for (int d = 0; d <= dp.n; ++d)
    for (int def = 0; def <= dp.cap; ++def) out.weights[def] += dp.a[dp.idx(d, def)].get();
  out.tail_mass = dp.tail;
  if (!(as_double(out.tail_mass) <= tail_bound))
    throw CapTooSmall("DP tail mass above requested bound");
  out.trim();
  return out;
}

template <class T>
BasicPmf<T> corank_even_impl(int n, int k, int q, int cap, double tail_bound) {
  if (k < 0) throw InvalidSpec("k must be nonnegative");
  if (cap < 0) throw CapTooSmall("cap must be nonnegative");
  DefectDp<T> dp(n, q, cap);
  dp.seed(0, 0, T(1));
  for (int i = 0; i < k; ++i) dp.pair_step();
  return finish_even(dp, tail_bound);
}

template <class T>
BasicPmf<T> corank_odd_impl(int n, int k, int q, int cap, double tail_bound) {
  if (k < 1) throw InvalidSpec("k must be positive");
  if (cap < 0) throw CapTooSmall("cap must be nonnegative");
  DefectDp<T> dp(n, q, cap);
  dp.seed(0, 0, T(1));
  for (int i = 0; i < k - 1; ++i) dp.pair_step();
  dp.substep(true);  // terminal odd step contributes n - X_{2k-1} to the defect
  BasicPmf<T> out;
  out.weights.assign(dp.cap + 1, T{});
  T tail = dp.tail;
  for (int d = 0; d <= n; ++d)
    for (int def = 0; def < dp.ext; ++def) {
      const auto& cell = dp.a[dp.idx(d, def)];
      if (cell.zero()) continue;
      if (def <= dp.cap)
        out.weights[def] += cell.get();
      else
        tail += cell.get();
    }
  out.tail_mass = tail;
  if (!(as_double(out.tail_mass) <= tail_bound))
    throw CapTooSmall("DP tail mass above requested bound");
  out.trim();
  return out;
}

template <class T>
BasicPmf<T> corank_truncated_impl(int n, int k, int q, int cap, double tail_bound) {
  if (n % 2 != 0) throw OddN("truncated ensemble requires even n");
  if (k < 0) throw InvalidSpec("k must be nonnegative");
  int m = n / 2;
  if (cap < m) throw CapTooSmall("cap below n/2 cannot hold the initial defect");
  DefectDp<T> dp(n, q, cap);
  auto init = Mode<T>::rect(m, n, q);  // law of X*_0
  for (int x0 = 0; x0 <= m; ++x0) {
    T p = init.mass_at(x0);
    if (!(p == T{})) dp.seed(x0, m - x0, p);
  }
  for (int i = 0; i < k; ++i) dp.pair_step();

  // terminal: |X*_{2k} - m|_+ plus corank of a uniform m x (m - u) block
  BasicPmf<T> out;
  out.weights.assign(cap + 1, T{});
  T tail = dp.tail;
  for (int d = 0; d <= n; ++d) {
    int u = d - m;
    int base = u > 0 ? u : 0;
    int rows = m, cols = m - u;
    if (cols < 0) continue;  // unreachable: X* <= n, u <= m
    auto wlaw = Mode<T>::rect(rows, cols, q);
    int wd = std::min(rows, cols);
    for (int def = 0; def <= cap; ++def) {
      const auto& cell = dp.a[dp.idx(d, def)];
      if (cell.zero()) continue;
      T mass = cell.get();
      for (int r = 0; r <= wd; ++r) {
        T pw = wlaw.mass_at(r);
        if (pw == T{}) continue;
        long long c = def + base + (wd - r);
        if (c <= cap)
          out.weights[size_t(c)] += mass * pw;
        else
          tail += mass * pw;
      }
    }
  }
  out.tail_mass = tail;
  if (!(static_cast<double>(out.tail_mass) <= tail_bound))
    throw CapTooSmall("DP tail mass above requested bound");
  out.trim();
  return out;
}

template <class T>
BasicPmf<T> corank_product_impl(int n, int k, int q) {
  if (k < 1) throw InvalidSpec("k must be positive");
  // X'_1 ~ P(0, .), then k-1 rounds of reflection + P step; the reflection is
  // applied as an index remap, never as a matrix multiply.
  std::vector<std::vector<T>> P(n + 1, std::vector<T>(n + 1));
  for (int d = 0; d <= n; ++d)
    for (int r = 0; r <= n; ++r) P[d][r] = Mode<T>::tp(n, q, d, r);
  std::vector<T> cur(n + 1, T{});
  for (int r = 0; r <= n; ++r) cur[r] = P[0][r];
  for (int i = 1; i < k; ++i) {
    std::vector<T> nxt(n + 1, T{});
    for (int d = 0; d <= n; ++d) {
      if (cur[d] == T{}) continue;
      int refl = n - d;  // X'_{2i} = n - X'_{2i-1}
      for (int r = 0; r <= n; ++r)
        if (!(P[refl][r] == T{})) nxt[r] += cur[d] * P[refl][r];
    }
    cur = std::move(nxt);
  }
  BasicPmf<T> out;
  out.weights.assign(n + 1, T{});
  for (int d = 0; d <= n; ++d) out.weights[n - d] = cur[d];
  out.trim();
  return out;
}

}  // namespace

// ---- kernel / stationary ----------------------------------------------------

Rational transition_prob_exact(int n, int q, int d, int r) {
  if (n < 0 || d < 0 || r < 0 || d > n || r > n) throw InvalidSpec("state out of range");
  if (d + r > n) return Rational(0);
  Rational out = qpow(q, -(long long)(n - d - r) * (n - r));
  out *= qpoch_exact(q, n - d, r);
  out *= qpoch_exact(q, n, r);
  out /= qpoch_exact(q, r, r);
  return out;
}

double transition_prob(int n, int q, int d, int r) {
  return transition_prob_exact(n, q, d, r).convert_to<double>();
}

RationalPmf stationary_exact(int n, int q) {
  RationalPmf out;
  out.weights.assign(n + 1, Rational(0));
  Rational z = 0;
  for (int h = 0; h <= n; ++h) {
    Rational w = qpow(q, (long long)h * (n - h));
    Rational ph = qpoch_exact(q, n, h);
    w *= ph * ph;
    w /= qpoch_exact(q, h, h);
    out.weights[h] = w;
    z += w;
  }
  for (auto& w : out.weights) w /= z;
  return out;
}

Pmf stationary(int n, int q) { return to_float(stationary_exact(n, q)); }

RationalPmf rect_rank_dist_exact(int rows, int cols, int q) {
  if (rows < 0 || cols < 0) throw InvalidSpec("negative dimensions");
  RationalPmf out;
  int rmax = std::min(rows, cols);
  out.weights.assign(rmax + 1, Rational(0));
  for (int r = 0; r <= rmax; ++r) {
    Rational v = qpow(q, -(long long)(cols - r) * (rows - r));
    v *= qpoch_exact(q, cols, r);
    v *= qpoch_exact(q, rows, r);
    v /= qpoch_exact(q, r, r);
    out.weights[r] = v;
  }
  return out;
}

Pmf rect_rank_dist(int rows, int cols, int q) {
  return to_float(rect_rank_dist_exact(rows, cols, q));
}

Rational mu_n_exact(int n, int q) {
  if (n % 2 != 0) throw OddN("exact mu_n needs even n (q^{n/2} rational)");
  auto pi = stationary_exact(n, q);
  // sum pi(h) (n - 2h) term by term; avoids the n - 2*mean cancellation
  Rational s = 0;
  for (int h = 0; h <= n; ++h) s += pi.weights[h] * (n - 2 * h);
  return Rational(q - 1) * qpow(q, n / 2) * s;
}

double mu_n(int n, int q) {
  if (n % 2 == 0) return mu_n_exact(n, q).convert_to<double>();
  auto pi = stationary_exact(n, q);
  Rational s = 0;
  for (int h = 0; h <= n; ++h) s += pi.weights[h] * (n - 2 * h);
  Rational part = Rational(q - 1) * qpow(q, (n - 1) / 2) * s;
  return part.convert_to<double>() * std::sqrt(double(q));
}

double mu_limit(int q, Parity parity) {
  double num = 0;  // 2 sum q^{-i(i-1)}
  for (int i = 1;; ++i) {
    double t = std::pow(double(q), -double(i) * (i - 1));
    num += t;
    if (t < 1e-15 * num) break;
  }
  num *= 2;
  double den = 0;  // 1 + 2 sum q^{-i^2}
  for (int i = 1;; ++i) {
    double t = std::pow(double(q), -double(i) * i);
    den += t;
    if (t < 1e-15) break;
  }
  den = 1 + 2 * den;
  return parity == Parity::even ? num / den : std::sqrt(double(q)) * den / num;
}

double qpoch1(int q, int r) {
  double out = 1;
  for (int i = 1; i <= r; ++i) out *= 1 - std::pow(double(q), -i);
  return out;
}

double qpoch1_inf(int q) {
  double out = 1;
  for (int i = 1;; ++i) {
    double t = std::pow(double(q), -i);
    out *= 1 - t;
    if (t < 1e-17) break;
  }
  return out;
}

// ---- simulation --------------------------------------------------------------

ChainSpec::ChainSpec(int n, int q) : n_(n), q_(q) {
  rows_.resize(n + 1);
  cdfs_.resize(n + 1);
  for (int d = 0; d <= n; ++d) {
    rows_[d].resize(n + 1);
    cdfs_[d].resize(n + 1);
    double acc = 0;
    for (int r = 0; r <= n; ++r) {
      rows_[d][r] = transition_prob(n, q, d, r);
      acc += rows_[d][r];
      cdfs_[d][r] = acc;
    }
    cdfs_[d][n] = 1.0;  // guard against float shortfall
  }
}

int ChainSpec::step(int d, Rng& rng) const {
  double u = rng.uniform01();
  const auto& cdf = cdfs_[d];
  for (int r = 0; r <= n_; ++r)
    if (u <= cdf[r]) return r;
  return n_;
}

std::vector<int> sample_chain(const ChainSpec& chain, int x0, long long steps,
                              Rng& rng) {
  if (x0 < 0 || x0 > chain.n()) throw InvalidSpec("x0 out of state space");
  std::vector<int> path(steps + 1);
  path[0] = x0;
  int cur = x0;
  for (long long i = 1; i <= steps; ++i) {
    cur = chain.step(cur, rng);
    path[i] = cur;
  }
  return path;
}

long long rescale_index(int n, int q, double t) {
  double scale = std::pow(double(q), n / 2.0) * (q - 1);
  return 2 * (long long)std::floor(scale * t);
}

Lat rescale_chain_path(const std::vector<int>& path, int n, int q, double t) {
  long long idx = rescale_index(n, q, t);
  if (idx < 0 || idx >= (long long)path.size())
    throw IndexOutOfRange("path too short for requested time");
  return Lat(2 * path[idx] - n);
}

// ---- corank DPs ---------------------------------------------------------------

RationalPmf corank_dist_even_exact(int n, int k, int q, int cap, double tail_bound) {
  return corank_even_impl<Rational>(n, k, q, cap, tail_bound);
}
Pmf corank_dist_even(int n, int k, int q, int cap, double tail_bound) {
  return corank_even_impl<double>(n, k, q, cap, tail_bound);
}
RationalPmf corank_dist_odd_exact(int n, int k, int q, int cap, double tail_bound) {
  return corank_odd_impl<Rational>(n, k, q, cap, tail_bound);
}
Pmf corank_dist_odd(int n, int k, int q, int cap, double tail_bound) {
  return corank_odd_impl<double>(n, k, q, cap, tail_bound);
}
RationalPmf corank_dist_truncated_exact(int n, int k, int q, int cap,
                                        double tail_bound) {
  return corank_truncated_impl<Rational>(n, k, q, cap, tail_bound);
}
Pmf corank_dist_truncated(int n, int k, int q, int cap, double tail_bound) {
  return corank_truncated_impl<double>(n, k, q, cap, tail_bound);
}
RationalPmf corank_dist_product_finite_exact(int n, int k, int q) {
  return corank_product_impl<Rational>(n, k, q);
}
Pmf corank_dist_product_finite(int n, int k, int q) {
  return corank_product_impl<double>(n, k, q);
}

int default_defect_cap(int n, int k, int q) {
  // mean of the defect is mu_n t_n; pad generously, the DP certifies the rest
  double t = std::pow(double(q), -n / 2.0) / (q - 1) * k;
  double mean = mu_limit(q, n % 2 == 0 ? Parity::even : Parity::odd) * t;
  int cap = int(mean + 12 * std::sqrt(mean + 1) + n + 16);
  return std::max(cap, n + 16);
}

namespace {
template <class Fn>
Pmf grow_cap(Fn fn, int n, int k, int q, double tail_bound) {
  int cap = default_defect_cap(n, k, q);
  for (int attempt = 0; attempt < 8; ++attempt) {
    try {
      return fn(n, k, q, cap, tail_bound);
    } catch (const CapTooSmall&) {
      cap *= 2;
    }
  }
  throw CapTooSmall("defect cap did not stabilize");
}
}  // namespace

Pmf corank_dist_even_tailbounded(int n, int k, int q, double tail_bound) {
  return grow_cap([](int n_, int k_, int q_, int c, double b) {
    return corank_dist_even(n_, k_, q_, c, b);
  }, n, k, q, tail_bound);
}
Pmf corank_dist_odd_tailbounded(int n, int k, int q, double tail_bound) {
  return grow_cap([](int n_, int k_, int q_, int c, double b) {
    return corank_dist_odd(n_, k_, q_, c, b);
  }, n, k, q, tail_bound);
}
Pmf corank_dist_truncated_tailbounded(int n, int k, int q, double tail_bound) {
  return grow_cap([](int n_, int k_, int q_, int c, double b) {
    return corank_dist_truncated(n_, k_, q_, c, b);
  }, n, k, q, tail_bound);
}

// ---- product limit pmf ---------------------------------------------------------

double product_corank_pmf(int q, int k, int j) {
  if (!is_prime(q)) throw InvalidSpec("product limit pmf requires prime q");
  if (k < 1 || j < 0) throw InvalidSpec("need k >= 1, j >= 0");
  // DP over the running corank s = r_1 + ... + r_i
  std::vector<double> poch(j + 1);
  for (int r = 0; r <= j; ++r) poch[r] = qpoch1(q, r);
  std::vector<double> cur(j + 1, 0.0);
  cur[0] = 1.0;
  for (int i = 0; i < k; ++i) {
    std::vector<double> nxt(j + 1, 0.0);
    for (int s = 0; s <= j; ++s) {
      if (cur[s] == 0) continue;
      for (int sp = s; sp <= j; ++sp) {
        int r = sp - s;
        nxt[sp] += cur[s] * std::pow(double(q), -double(r) * sp) / (poch[r] * poch[sp]);
      }
    }
    cur = std::move(nxt);
  }
  return cur[j] * std::pow(qpoch1_inf(q), k);
}

Pmf product_corank_pmf_upto(int q, int k, int jmax) {
  Pmf out;
  out.weights.resize(jmax + 1);
  for (int j = 0; j <= jmax; ++j) out.weights[j] = product_corank_pmf(q, k, j);
  double s = 0;
  for (double w : out.weights) s += w;
  out.tail_mass = std::max(0.0, 1.0 - s);
  return out;
}

std::string pmf_to_json(const Pmf& p, const std::string& mode) {
  nlohmann::json j;
  j["offset"] = p.offset;
  j["weights"] = p.weights;
  j["tail_mass"] = p.tail_mass;
  j["mode"] = mode;
  return j.dump();
}

}  // namespace fqlab
