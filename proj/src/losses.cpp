#include "ermlab/losses.hpp"

#include <cmath>
#include <utility>

namespace ermlab {

namespace {

Mat feature_second_moment(const std::vector<Datum>& sample) {
  if (sample.empty()) throw Error("build_h: empty sample");
  const int d = static_cast<int>(sample.front().features.size());
  Mat h = Mat::Zero(d, d);
  for (const Datum& z : sample) {
    if (z.features.size() != d) throw DimMismatch("build_h: ragged sample");
    h.noalias() += z.features * z.features.transpose();
  }
  return h / static_cast<double>(sample.size());
}

// log(1 + exp(t)) without overflow.
double log1p_exp(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

// 1 / (1 + exp(t)).
double inv_logistic(double t) {
  if (t >= 0.0) {
    const double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

}  // namespace

Datum LossModel::make_datum(Vec features, double label) const {
  const double norm = features.norm();
  if (norm > feature_radius * (1.0 + 1e-12))
    throw Error(name + ": feature norm " + std::to_string(norm) +
                " exceeds radius " + std::to_string(feature_radius));
  if (label_kind == LabelKind::kRealBounded) {
    if (std::abs(label) > label_bound * (1.0 + 1e-12))
      throw Error(name + ": label " + std::to_string(label) +
                  " outside [-R, R]");
  } else {
    if (label != 1.0 && label != -1.0)
      throw Error(name + ": label must be -1 or +1");
  }
  return Datum{std::move(features), label};
}

LossModel make_squared_loss(double radius_r) {
  if (radius_r <= 0.0) throw NonPositiveRadius("make_squared_loss: R <= 0");
  LossModel m;
  m.name = "squared";
  m.sigma = 2.0;
  m.lipschitz = 4.0 * radius_r;
  m.attained_convexity = 2.0;
  m.curvature_factor = 2.0;
  m.domain_radius = radius_r;
  m.feature_radius = 1.0;
  m.label_kind = LabelKind::kRealBounded;
  m.label_bound = radius_r;
  m.evaluate = [](const Vec& w, const Datum& z) {
    const double r = z.label - w.dot(z.features);
    return r * r;
  };
  m.gradient = [](const Vec& w, const Datum& z) -> Vec {
    const double r = z.label - w.dot(z.features);
    return (-2.0 * r) * z.features;
  };
  m.build_h = feature_second_moment;
  return m;
}

LossModel make_logistic_loss(double ball_b, double feature_r) {
  if (ball_b <= 0.0 || feature_r <= 0.0)
    throw NonPositiveRadius("make_logistic_loss: radius <= 0");
  const double br = ball_b * feature_r;
  LossModel m;
  m.name = "logistic";
  m.sigma = std::exp(-br);
  m.lipschitz = 1.0;
  // Exact minimum of the margin curvature 1/(2 + e^t + e^-t) over
  // |t| <= BR; the reported sigma = e^-BR overstates it by (1+e^-BR)^2.
  m.attained_convexity = 1.0 / (2.0 + std::exp(br) + std::exp(-br));
  m.curvature_factor = 0.25;
  m.domain_radius = ball_b;
  m.feature_radius = feature_r;
  m.label_kind = LabelKind::kSign;
  m.label_bound = 1.0;
  m.evaluate = [](const Vec& w, const Datum& z) {
    return log1p_exp(-z.label * w.dot(z.features));
  };
  m.gradient = [](const Vec& w, const Datum& z) -> Vec {
    const double s = inv_logistic(z.label * w.dot(z.features));
    return (-z.label * s) * z.features;
  };
  m.build_h = feature_second_moment;
  return m;
}

EmpiricalObjective make_empirical_objective(LossModel loss,
                                            std::vector<Datum> sample) {
  if (sample.empty()) throw Error("make_empirical_objective: empty sample");
  PsdSeminorm h = build_seminorm(loss.build_h(sample));
  return EmpiricalObjective{std::move(loss), std::move(sample), std::move(h)};
}

double empirical_risk(const EmpiricalObjective& obj, const Vec& w) {
  if (w.size() != obj.dim())
    throw DimMismatch("empirical_risk: dimension mismatch");
  double total = 0.0;
  for (const Datum& z : obj.sample) total += obj.loss.evaluate(w, z);
  return total / static_cast<double>(obj.n());
}

Vec empirical_gradient(const EmpiricalObjective& obj, const Vec& w) {
  if (w.size() != obj.dim())
    throw DimMismatch("empirical_gradient: dimension mismatch");
  Vec g = Vec::Zero(obj.dim());
  for (const Datum& z : obj.sample) g += obj.loss.gradient(w, z);
  return g / static_cast<double>(obj.n());
}

}  // namespace ermlab
