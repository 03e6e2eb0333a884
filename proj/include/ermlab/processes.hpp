#ifndef ERMLAB_PROCESSES_HPP
#define ERMLAB_PROCESSES_HPP

#include <cstdint>
#include <vector>

#include "ermlab/geometry.hpp"
#include "ermlab/losses.hpp"

namespace ermlab {

// The offset multiplier process P_n eps (f(w,Z) - f(w*,Z)) - (sigma/8)
// |w - w*|_H^2 evaluated over a finite subset of W. Loss differences and
// penalties are precomputed so sign-vector sweeps are cheap.
class OffsetProcessInstance {
 public:
  OffsetProcessInstance(EmpiricalObjective obj, Vec w_star, Ball domain,
                        std::vector<Vec> eval_set, double lambda_override = 0.0);

  const EmpiricalObjective& objective() const { return obj_; }
  const Vec& w_star() const { return w_star_; }
  const Ball& domain() const { return domain_; }
  const std::vector<Vec>& eval_set() const { return eval_set_; }
  double lambda() const { return lambda_; }
  int n() const { return obj_.n(); }

  // Loss difference f(w_j, Z_i) - f(w*, Z_i); column i is contiguous.
  double diff(int point, int i) const {
    return diffs_[static_cast<std::size_t>(i) * eval_set_.size() + point];
  }
  double penalty(int point) const { return penalties_[point]; }

 private:
  EmpiricalObjective obj_;
  Vec w_star_;
  Ball domain_;
  std::vector<Vec> eval_set_;
  double lambda_ = 0.0;
  std::vector<double> diffs_;
  std::vector<double> penalties_;
};

// lambda = sigma n / (32 e L^2).
double default_offset_lambda(const LossModel& loss, int n);

// max over the eval set of (1/n) sum_i eps_i (f(w,Z_i) - f(w*,Z_i))
// - (sigma/8) |w - w*|_H^2.
double offset_supremum(const OffsetProcessInstance& inst,
                       const std::vector<int>& signs);

struct ExpMomentResult {
  double moment = 0.0;      // E_eps exp(lambda * sup)
  double log_moment = 0.0;
  double mean_sup = 0.0;    // E_eps sup, from the same enumeration
};

// Exact expectation over all 2^n sign vectors (n <= 16). Enumeration is
// partitioned into contiguous Gray-code ranges; partial sums are combined
// in index order so the value is independent of the thread count.
ExpMomentResult exp_moment_exhaustive(const OffsetProcessInstance& inst,
                                      int threads = 1);

// log(e + e^{3d} + 14 e^{2048 (1+e)^2 d / e}), evaluated stably.
double exp_moment_bound_log(int dim);

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  int trials = 0;
};

// Monte Carlo estimate of E_eps sup over the eval set of the plain
// multiplier process (1/n) sum eps_i (f(w,Z_i) - f(w*,Z_i)), offset term
// removed. The eval set is expected to lie inside W[0, r].
McEstimate rademacher_sup_mc(const OffsetProcessInstance& inst, int trials,
                             std::uint64_t rng_seed);

// Dyadic peeling [W[0,r], W[r,2r], ..., W[2^k_max r, 2^{k_max+1} r]].
std::vector<Annulus> peel_decompose(const Ball& domain, const Vec& w_star,
                                    const PsdSeminorm& h, double r, int k_max);

// The localization radius r = (L / sigma) sqrt(d / n).
double peeling_radius(const LossModel& loss, int dim, int n);

// Upper bound sqrt(lambda_1) (|center - w_star| + radius) on the
// H-diameter of the ball around w_star.
double h_diameter_bound(const Ball& domain, const Vec& w_star,
                        const PsdSeminorm& h);

// Grid eval sets for low dimensions: all lattice points of the bounding
// box that fall inside the ball (d <= 2).
std::vector<Vec> grid_eval_set(const Ball& domain, int per_axis);

}  // namespace ermlab

#endif  // ERMLAB_PROCESSES_HPP
