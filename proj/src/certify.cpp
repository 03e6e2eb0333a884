#include <algorithm>
#include <cmath>
#include <limits>

#include "ermlab/losses.hpp"
#include "ermlab/rng.hpp"
#include "ermlab/solver.hpp"

namespace ermlab {

AssumptionGaps assumption_gaps(const EmpiricalObjective& obj, const Vec& u,
                               const Vec& v, double alpha, const Vec& w_star,
                               double sc_sigma) {
  const LossModel& loss = obj.loss;
  const double lips2 = loss.lipschitz * loss.lipschitz;
  const double dist_h = obj.h.seminorm(u - v);

  const double fu = empirical_risk(obj, u);
  const double fv = empirical_risk(obj, v);
  const Vec mix = alpha * u + (1.0 - alpha) * v;
  const double fmix = empirical_risk(obj, mix);

  AssumptionGaps gaps;
  gaps.strong_convexity = fmix - alpha * fu - (1.0 - alpha) * fv +
                          0.5 * sc_sigma * alpha * (1.0 - alpha) * dist_h * dist_h;

  double mean_sq_diff = 0.0;
  for (const Datum& z : obj.sample) {
    const double diff = loss.evaluate(u, z) - loss.evaluate(v, z);
    mean_sq_diff += diff * diff;
  }
  mean_sq_diff /= static_cast<double>(obj.n());
  gaps.empirical_lipschitz = mean_sq_diff - lips2 * dist_h * dist_h;

  const double range_bound = 4.0 * lips2 / loss.sigma;
  double worst_range = 0.0;
  for (const Datum& z : obj.sample) {
    worst_range = std::max(
        worst_range, std::abs(loss.evaluate(u, z) - loss.evaluate(w_star, z)));
    worst_range = std::max(
        worst_range, std::abs(loss.evaluate(v, z) - loss.evaluate(w_star, z)));
  }
  gaps.range_excess = worst_range - range_bound;

  const double eta = loss.sigma / lips2;
  const Vec mid = 0.5 * (u + v);
  const double g_mid = std::exp(-eta * empirical_risk(obj, mid));
  const double g_avg = 0.5 * (std::exp(-eta * fu) + std::exp(-eta * fv));
  gaps.exp_concavity = g_avg - g_mid;
  return gaps;
}

CertificationReport certify_assumption1(const EmpiricalObjective& obj,
                                        int trials, std::uint64_t rng_seed,
                                        double sc_sigma_override) {
  if (trials < 1) throw Error("certify_assumption1: trials < 1");
  const LossModel& loss = obj.loss;
  const double sc_sigma =
      sc_sigma_override > 0.0 ? sc_sigma_override : loss.sigma;

  // Exact minimizer of the uniform distribution on the sample, solved at a
  // tolerance far below the certification gap tolerance.
  const int n = obj.n();
  DiscreteDistribution uniform(
      obj.sample, Vec::Constant(n, 1.0 / static_cast<double>(n)));
  const Ball domain(Vec::Zero(obj.dim()), loss.domain_radius);
  const Vec w_star =
      minimize_population(loss, uniform, domain, 1e-7).w_hat;

  CertificationReport report;
  report.trials = trials;
  report.rng_seed = rng_seed;
  report.sc_sigma = sc_sigma;
  report.range_bound = 4.0 * loss.lipschitz * loss.lipschitz / loss.sigma;

  double worst_sc = -std::numeric_limits<double>::infinity();
  double worst_lip = -std::numeric_limits<double>::infinity();
  double worst_range = 0.0;
  double worst_exp = -std::numeric_limits<double>::infinity();

  for (int t = 0; t < trials; ++t) {
    // Per-trial stream derived from (seed, trial) so fan-out order cannot
    // change the report.
    Rng rng(derive_seed({rng_seed, static_cast<std::uint64_t>(t)}));
    const Vec u = rng.uniform_in_ball(domain.center, domain.radius);
    const Vec v = rng.uniform_in_ball(domain.center, domain.radius);
    const double alpha = rng.uniform();
    const AssumptionGaps gaps = assumption_gaps(obj, u, v, alpha, w_star, sc_sigma);
    worst_sc = std::max(worst_sc, gaps.strong_convexity);
    worst_lip = std::max(worst_lip, gaps.empirical_lipschitz);
    worst_range = std::max(worst_range, gaps.range_excess + report.range_bound);
    worst_exp = std::max(worst_exp, gaps.exp_concavity);
  }

  report.worst_strong_convexity = worst_sc;
  report.worst_empirical_lipschitz = worst_lip;
  report.worst_range = worst_range;
  report.worst_exp_concavity = worst_exp;
  report.strong_convexity_ok = worst_sc <= kCertifyGapTol;
  report.empirical_lipschitz_ok = worst_lip <= kCertifyGapTol;
  report.range_ok = worst_range <= report.range_bound + kCertifyGapTol;
  report.exp_concavity_ok = worst_exp <= kCertifyExpConcavityTol;
  return report;
}

}  // namespace ermlab
