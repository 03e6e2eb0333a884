#ifndef ERMLAB_LOSSES_HPP
#define ERMLAB_LOSSES_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ermlab/linalg.hpp"

namespace ermlab {

// One observation z = (x, y). Construct through LossModel::make_datum so
// the feature-norm and label-range constraints are checked eagerly.
struct Datum {
  Vec features;
  double label = 0.0;
};

enum class LabelKind { kRealBounded, kSign };

// A loss f(w, z) with certified constants (sigma, L) and the rule building
// the sample-dependent PSD matrix H. Instances are immutable and shareable.
struct LossModel {
  std::string name;
  // Constants reported for the loss family; sigma and lipschitz are
  // sample-independent by construction.
  double sigma = 0.0;
  double lipschitz = 0.0;
  // Largest strong-convexity modulus w.r.t. ||.||_H that the loss actually
  // attains on its domain. Coincides with sigma for the squared loss; for
  // the logistic loss it is strictly smaller than the reported sigma.
  double attained_convexity = 0.0;
  // Upper bound on per-unit-H curvature; 1/attained smoothness step.
  double curvature_factor = 0.0;

  double domain_radius = 0.0;   // radius of the reference ball W
  double feature_radius = 0.0;  // max Euclidean norm of features
  LabelKind label_kind = LabelKind::kRealBounded;
  double label_bound = 0.0;  // |y| <= label_bound when kRealBounded

  std::function<double(const Vec&, const Datum&)> evaluate;
  std::function<Vec(const Vec&, const Datum&)> gradient;
  std::function<Mat(const std::vector<Datum>&)> build_h;

  // Validates the (x, y) constraints and returns the datum.
  Datum make_datum(Vec features, double label) const;
};

// f(w,z) = (y - w'x)^2 on W = B(0, radius_r), features in the unit ball,
// |y| <= radius_r. sigma = 2, L = 4 radius_r, H = (1/n) sum x_i x_i'.
LossModel make_squared_loss(double radius_r);

// f(w,z) = log(1 + exp(-y w'x)) on W = B(0, ball_b), features in
// B(0, feature_r), y in {-1,+1}. sigma = exp(-ball_b * feature_r), L = 1,
// H = (1/n) sum x_i x_i'.
LossModel make_logistic_loss(double ball_b, double feature_r);

// A sample together with its seminorm H = loss.build_h(sample).
struct EmpiricalObjective {
  LossModel loss;
  std::vector<Datum> sample;
  PsdSeminorm h;

  int dim() const { return h.dim(); }
  int n() const { return static_cast<int>(sample.size()); }
};

EmpiricalObjective make_empirical_objective(LossModel loss,
                                            std::vector<Datum> sample);

// (1/n) sum f(w, Z_i).
double empirical_risk(const EmpiricalObjective& obj, const Vec& w);

// (1/n) sum grad f(w, Z_i).
Vec empirical_gradient(const EmpiricalObjective& obj, const Vec& w);

// The four per-segment gaps the certifier aggregates. Negative values mean
// the property holds with margin on that segment.
struct AssumptionGaps {
  double strong_convexity = 0.0;   // F(au+(1-a)v) - aF(u) - (1-a)F(v)
                                   //   + (sigma a(1-a)/2) |u-v|_H^2
  double empirical_lipschitz = 0.0;  // P_n (f(u)-f(v))^2 - L^2 |u-v|_H^2
  double range_excess = 0.0;         // max_i |f(w,Z_i)-f(w*,Z_i)| - 4L^2/sigma
  double exp_concavity = 0.0;        // (G(u)+G(v))/2 - G((u+v)/2),
                                     //   G = exp(-sigma F / L^2)
};

AssumptionGaps assumption_gaps(const EmpiricalObjective& obj, const Vec& u,
                               const Vec& v, double alpha, const Vec& w_star,
                               double sc_sigma);

// Result of the randomized certification of the loss-class assumptions.
struct CertificationReport {
  int trials = 0;
  std::uint64_t rng_seed = 0;

  double sc_sigma = 0.0;        // modulus the strong-convexity check used
  double range_bound = 0.0;     // 4 L^2 / sigma
  double worst_strong_convexity = 0.0;
  double worst_empirical_lipschitz = 0.0;
  double worst_range = 0.0;     // largest |f(w,Z_i) - f(w*,Z_i)| observed
  double worst_exp_concavity = 0.0;

  bool strong_convexity_ok = false;
  bool empirical_lipschitz_ok = false;
  bool range_ok = false;
  bool exp_concavity_ok = false;

  bool all_ok() const {
    return strong_convexity_ok && empirical_lipschitz_ok && range_ok &&
           exp_concavity_ok;
  }
};

constexpr double kCertifyGapTol = 1e-9;
constexpr double kCertifyExpConcavityTol = 1e-10;

// Tests the loss-class assumptions on `trials` random (u, v, alpha)
// segments in W: strong convexity and empirical Lipschitzness w.r.t. H,
// the range bound |f(w,Z) - f(w*,Z)| <= 4L^2/sigma against the exact
// minimizer of the uniform distribution on the sample, and midpoint
// concavity of exp(-sigma F / L^2). Violations are reported, not thrown.
// sc_sigma_override, when positive, replaces loss.sigma in the
// strong-convexity check only.
CertificationReport certify_assumption1(const EmpiricalObjective& obj,
                                        int trials, std::uint64_t rng_seed,
                                        double sc_sigma_override = 0.0);

}  // namespace ermlab

#endif  // ERMLAB_LOSSES_HPP
