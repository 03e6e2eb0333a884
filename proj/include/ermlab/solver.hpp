#ifndef ERMLAB_SOLVER_HPP
#define ERMLAB_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "ermlab/geometry.hpp"
#include "ermlab/losses.hpp"

namespace ermlab {

// Solver output with its optimality certificate.
struct ErmResult {
  Vec w_hat;
  double objective = 0.0;
  double gradient_map_norm = 0.0;  // |w - proj(w - s grad)| / s at s = 1/L
  long iterations = 0;
  bool converged = false;
  double certified_gap = 0.0;  // conservative objective-gap certificate
};

// Thrown when the iteration cap is reached; carries the partial result.
class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, ErmResult partial)
      : Error(what), partial_(std::move(partial)) {}
  const ErmResult& partial() const { return partial_; }

 private:
  ErmResult partial_;
};

// Finite-support data distribution; makes the population risk and its
// minimizer exactly computable.
struct DiscreteDistribution {
  std::vector<Datum> atoms;
  Vec probabilities;

  DiscreteDistribution(std::vector<Datum> a, Vec p);

  int dim() const { return static_cast<int>(atoms.front().features.size()); }
  int size() const { return static_cast<int>(atoms.size()); }

  // Index sampling by inverse CDF; deterministic in the generator state.
  int sample_index(class Rng& rng) const;

 private:
  std::vector<double> cumulative_;
};

double population_risk(const LossModel& loss, const DiscreteDistribution& dist,
                       const Vec& w);
Vec population_gradient(const LossModel& loss,
                        const DiscreteDistribution& dist, const Vec& w);
Mat weighted_second_moment(const DiscreteDistribution& dist);

// Projected gradient descent with Armijo backtracking (constant 1e-4,
// factor 0.5, initial step 1/smoothness). Starts at the ball center and
// stops when the gradient mapping norm at the reference step drops to tol.
// Throws NotConverged past max_iters. When `trace` is given, the accepted
// objective values are appended to it.
ErmResult minimize_objective(const std::function<double(const Vec&)>& value,
                             const std::function<Vec(const Vec&)>& gradient,
                             const Ball& domain, double tol, long max_iters,
                             double smoothness,
                             std::vector<double>* trace = nullptr);

ErmResult minimize_empirical(const EmpiricalObjective& obj, const Ball& domain,
                             double tol, long max_iters = 50000);

// Same solver on the exact weighted objective. The tolerance is tightened
// 10x relative to the passed (ERM-level) tol so that the error in w* never
// dominates excess-risk measurements.
ErmResult minimize_population(const LossModel& loss,
                              const DiscreteDistribution& dist,
                              const Ball& domain, double tol,
                              long max_iters = 500000);

// F(w) - F(w_star), clipped at zero for round-off below the optimum.
double excess_risk(const LossModel& loss, const DiscreteDistribution& dist,
                   const Vec& w, const Vec& w_star);

// Signed version, used by diagnostics and the nonnegativity checks.
double excess_risk_signed(const LossModel& loss,
                          const DiscreteDistribution& dist, const Vec& w,
                          const Vec& w_star);

// Gradient-mapping tolerance making the certified optimization error a
// small fraction of the statistical scale L^2 d / (sigma n).
double derive_erm_tolerance(const LossModel& loss, int dim, int n,
                            double domain_radius);

}  // namespace ermlab

#endif  // ERMLAB_SOLVER_HPP
