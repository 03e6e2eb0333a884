#include "ermlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ermlab/rng.hpp"

namespace ermlab {

DiscreteDistribution::DiscreteDistribution(std::vector<Datum> a, Vec p)
    : atoms(std::move(a)), probabilities(std::move(p)) {
  if (atoms.empty()) throw TooFewAtoms("DiscreteDistribution: no atoms");
  if (probabilities.size() != static_cast<int>(atoms.size()))
    throw DimMismatch("DiscreteDistribution: atom/probability count mismatch");
  double total = 0.0;
  for (int j = 0; j < probabilities.size(); ++j) {
    if (probabilities[j] < 0.0)
      throw Error("DiscreteDistribution: negative probability");
    total += probabilities[j];
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw Error("DiscreteDistribution: probabilities sum to " +
                std::to_string(total));
  cumulative_.resize(atoms.size());
  double run = 0.0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    run += probabilities[static_cast<int>(j)];
    cumulative_[j] = run;
  }
  cumulative_.back() = 1.0;
}

int DiscreteDistribution::sample_index(Rng& rng) const {
  const double x = rng.uniform();
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), x);
  return static_cast<int>(it - cumulative_.begin());
}

double population_risk(const LossModel& loss, const DiscreteDistribution& dist,
                       const Vec& w) {
  double total = 0.0;
  for (int j = 0; j < dist.size(); ++j)
    total += dist.probabilities[j] * loss.evaluate(w, dist.atoms[j]);
  return total;
}

Vec population_gradient(const LossModel& loss,
                        const DiscreteDistribution& dist, const Vec& w) {
  Vec g = Vec::Zero(w.size());
  for (int j = 0; j < dist.size(); ++j)
    g += dist.probabilities[j] * loss.gradient(w, dist.atoms[j]);
  return g;
}

Mat weighted_second_moment(const DiscreteDistribution& dist) {
  const int d = dist.dim();
  Mat h = Mat::Zero(d, d);
  for (int j = 0; j < dist.size(); ++j)
    h.noalias() += dist.probabilities[j] * dist.atoms[j].features *
                   dist.atoms[j].features.transpose();
  return h;
}

ErmResult minimize_objective(const std::function<double(const Vec&)>& value,
                             const std::function<Vec(const Vec&)>& gradient,
                             const Ball& domain, double tol, long max_iters,
                             double smoothness, std::vector<double>* trace) {
  if (tol <= 0.0) throw Error("minimize_objective: tol <= 0");
  const double step_ref = 1.0 / std::max(smoothness, 1e-12);

  Vec w = domain.center;
  double fw = value(w);
  if (trace) trace->push_back(fw);

  ErmResult result;
  long iter = 0;
  for (; iter < max_iters; ++iter) {
    const Vec grad = gradient(w);
    const Vec mapped = project_to_ball(domain, w - step_ref * grad);
    const double gmap = (w - mapped).norm() / step_ref;
    if (gmap <= tol) {
      result.gradient_map_norm = gmap;
      result.converged = true;
      break;
    }

    // Sufficient-decrease test with a rounding allowance so the search
    // does not stall once objective differences reach machine precision.
    const double rounding =
        8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(fw));
    double step = step_ref;
    Vec cand = mapped;
    double fcand = value(cand);
    int backtracks = 0;
    while (fcand >
               fw - 1e-4 / step * (w - cand).squaredNorm() + rounding &&
           backtracks < 60) {
      step *= 0.5;
      cand = project_to_ball(domain, w - step * grad);
      fcand = value(cand);
      ++backtracks;
    }
    if ((w - cand).norm() == 0.0) {
      // No representable movement left; the mapping norm above is the best
      // certificate available.
      result.gradient_map_norm = gmap;
      result.converged = gmap <= tol;
      break;
    }
    w = std::move(cand);
    fw = fcand;
    if (trace) trace->push_back(fw);
  }

  if (iter >= max_iters || (!result.converged && iter < max_iters)) {
    const Vec grad = gradient(w);
    const Vec mapped = project_to_ball(domain, w - step_ref * grad);
    result.gradient_map_norm = (w - mapped).norm() / step_ref;
    result.converged = result.gradient_map_norm <= tol;
  }

  result.w_hat = std::move(w);
  result.objective = fw;
  result.iterations = iter;
  result.certified_gap =
      result.gradient_map_norm * result.gradient_map_norm * domain.radius / 2.0;
  if (!result.converged)
    throw NotConverged("minimize_objective: gradient mapping norm " +
                           std::to_string(result.gradient_map_norm) +
                           " above tol after " + std::to_string(iter) +
                           " iterations",
                       result);
  return result;
}

ErmResult minimize_empirical(const EmpiricalObjective& obj, const Ball& domain,
                             double tol, long max_iters) {
  if (domain.center.size() != obj.dim())
    throw DimMismatch("minimize_empirical: domain dimension mismatch");
  const double lambda_top =
      obj.h.eigenvalues().size() > 0 ? obj.h.eigenvalues()[0] : 0.0;
  const double smoothness = obj.loss.curvature_factor * lambda_top;
  return minimize_objective(
      [&obj](const Vec& w) { return empirical_risk(obj, w); },
      [&obj](const Vec& w) { return empirical_gradient(obj, w); }, domain, tol,
      max_iters, smoothness);
}

ErmResult minimize_population(const LossModel& loss,
                              const DiscreteDistribution& dist,
                              const Ball& domain, double tol, long max_iters) {
  if (domain.center.size() != dist.dim())
    throw DimMismatch("minimize_population: domain dimension mismatch");
  const double lambda_top = top_eigenvalue_estimate(weighted_second_moment(dist));
  const double smoothness = loss.curvature_factor * lambda_top;
  return minimize_objective(
      [&](const Vec& w) { return population_risk(loss, dist, w); },
      [&](const Vec& w) { return population_gradient(loss, dist, w); }, domain,
      tol / 10.0, max_iters, smoothness);
}

double excess_risk_signed(const LossModel& loss,
                          const DiscreteDistribution& dist, const Vec& w,
                          const Vec& w_star) {
  double total = 0.0;
  for (int j = 0; j < dist.size(); ++j)
    total += dist.probabilities[j] * (loss.evaluate(w, dist.atoms[j]) -
                                      loss.evaluate(w_star, dist.atoms[j]));
  return total;
}

double excess_risk(const LossModel& loss, const DiscreteDistribution& dist,
                   const Vec& w, const Vec& w_star) {
  const double gap = excess_risk_signed(loss, dist, w, w_star);
  return gap <= 0.0 ? 0.0 : gap;
}

double derive_erm_tolerance(const LossModel& loss, int dim, int n,
                            double domain_radius) {
  const double scale = loss.lipschitz * loss.lipschitz * dim /
                       (loss.sigma * static_cast<double>(n));
  // Certified gap tol^2 R / 2 <= 1% of the statistical scale, with an
  // extra 10x tightening of tol on top.
  return 0.1 * std::sqrt(0.02 * scale / domain_radius);
}

}  // namespace ermlab
