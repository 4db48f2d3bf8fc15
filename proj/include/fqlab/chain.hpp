#pragma once

#include <string>
#include <vector>

#include "fqlab/pmf.hpp"
#include "fqlab/rng.hpp"

namespace fqlab {

enum class Parity { even, odd };

// ---------------------------------------------------------------------------
// The rank-increment Markov chain on {0..n}:
//   P_n(d,r) = 1(d+r<=n) q^{-(n-d-r)(n-r)} (q^{-(n-d)};q)_r (q^{-n};q)_r
//              / (q^{-r};q)_r
// with (a;q)_r the q-Pochhammer product prod_{i<r} (1 - a q^i). The exact
// versions return rationals; the float versions are the exactly rounded
// doubles of those rationals.

Rational transition_prob_exact(int n, int q, int d, int r);
double transition_prob(int n, int q, int d, int r);

// Stationary law pi_n(h) proportional to q^{h(n-h)} (q^{-n};q)_h^2 / (q^{-h};q)_h.
RationalPmf stationary_exact(int n, int q);
Pmf stationary(int n, int q);

// Rank distribution of a uniform rows x cols matrix over F_q.
RationalPmf rect_rank_dist_exact(int rows, int cols, int q);
Pmf rect_rank_dist(int rows, int cols, int q);

// Drift constant mu_n = (q-1) q^{n/2} (n - 2 sum_h pi_n(h) h); evaluated from
// the exact stationary law (odd n picks up a sqrt(q) factor).
Rational mu_n_exact(int n, int q);  // even n only
double mu_n(int n, int q);

// n -> infinity limit of mu_n:
//   even n: 2 sum_{i>=1} q^{-i(i-1)} / (1 + 2 sum_{i>=1} q^{-i^2})
//   odd n:  sqrt(q) (1 + 2 sum_{i>=1} q^{-i^2}) / (2 sum_{i>=1} q^{-i(i-1)})
// with series truncated once a term drops below 1e-15 relative.
double mu_limit(int q, Parity parity);

// (q^{-1};q^{-1})_r and its r -> infinity limit, as doubles.
double qpoch1(int q, int r);
double qpoch1_inf(int q);

// ---------------------------------------------------------------------------
// Cached chain for simulation.

class ChainSpec {
 public:
  ChainSpec(int n, int q);
  int n() const { return n_; }
  int q() const { return q_; }
  double prob(int d, int r) const { return rows_[d][r]; }
  int step(int d, Rng& rng) const;

 private:
  int n_, q_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::vector<double>> cdfs_;
};

// X_0 = x0 followed by `steps` transitions (length steps + 1).
std::vector<int> sample_chain(const ChainSpec& chain, int x0, long long steps,
                              Rng& rng);

// Index map of the rescaled process Y_t = X(2 floor(q^{n/2} (q-1) t)) - n/2.
long long rescale_index(int n, int q, double t);
// Lattice value of Y_t as a doubled integer (2 X(idx) - n); IndexOutOfRange
// if the path is too short.
Lat rescale_chain_path(const std::vector<int>& path, int n, int q, double t);

// ---------------------------------------------------------------------------
// Exact corank distributions by dynamic programming over (chain state,
// accumulated defect <= cap). Defect mass pushed past the cap is reported in
// tail_mass; if tail_bound is given and the tail exceeds it, CapTooSmall is
// thrown. The float versions run the same DP in double with compensated
// (Neumaier) accumulation.

// dim ker C_{2k}: defect D'_{0,k} = sum_{i<=k} (n - X_{2i-1} - X_{2i}).
RationalPmf corank_dist_even_exact(int n, int k, int q, int cap,
                                   double tail_bound = 1.0);
Pmf corank_dist_even(int n, int k, int q, int cap, double tail_bound = 1.0);

// dim ker C_{2k-1} = dim ker C_{2k-2} + n - X_{2k-1}.
RationalPmf corank_dist_odd_exact(int n, int k, int q, int cap,
                                  double tail_bound = 1.0);
Pmf corank_dist_odd(int n, int k, int q, int cap, double tail_bound = 1.0);

// dim ker of the truncated matrix: initial state drawn as the rank of a
// uniform (n/2) x n block with initial defect n/2 - X*_0, then k chain pairs,
// then the terminal |X*_{2k} - n/2|_+ plus the corank of a uniform
// (n/2) x (n/2 - u) block. Throws OddN for odd n.
RationalPmf corank_dist_truncated_exact(int n, int k, int q, int cap,
                                        double tail_bound = 1.0);
Pmf corank_dist_truncated(int n, int k, int q, int cap, double tail_bound = 1.0);

// dim ker C'_{2k-1} = n - X'_{2k-1} for the product chain, which alternates a
// P_n step with the deterministic reflection X -> n - X.
RationalPmf corank_dist_product_finite_exact(int n, int k, int q);
Pmf corank_dist_product_finite(int n, int k, int q);

// Starting cap heuristic and auto-growing wrappers used by the experiment
// runner: the a-priori per-step defect bound is far too weak once the chain
// mixes, so the cap is grown until the DP itself certifies the tail.
int default_defect_cap(int n, int k, int q);
Pmf corank_dist_even_tailbounded(int n, int k, int q, double tail_bound);
Pmf corank_dist_odd_tailbounded(int n, int k, int q, double tail_bound);
Pmf corank_dist_truncated_tailbounded(int n, int k, int q, double tail_bound);

// ---------------------------------------------------------------------------
// n -> infinity corank pmf of a product of k iid uniform matrices (q prime):
// the corank increments are J_{c} distributed given the running corank c, so
//   P(corank = j) = sum_{r_1+..+r_k=j} prod_i q^{-r_i s_i}
//                   / ((q^{-1};q^{-1})_{r_i} (q^{-1};q^{-1})_{s_i})
//                   * (q^{-1};q^{-1})_inf^k,     s_i = r_1 + ... + r_i.
double product_corank_pmf(int q, int k, int j);
Pmf product_corank_pmf_upto(int q, int k, int jmax);

// {offset, weights[], tail_mass, mode} JSON document.
std::string pmf_to_json(const Pmf& p, const std::string& mode);

}  // namespace fqlab
