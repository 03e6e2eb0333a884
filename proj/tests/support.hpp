#ifndef ERMLAB_TESTS_SUPPORT_HPP
#define ERMLAB_TESTS_SUPPORT_HPP

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "ermlab/geometry.hpp"
#include "ermlab/losses.hpp"
#include "ermlab/rng.hpp"

namespace ermlab::testing {

inline Mat random_orthogonal(Rng& rng, int d) {
  Mat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  return q;
}

// PSD matrix with the given rank and kept eigenvalues in [lo, hi].
inline Mat random_psd(Rng& rng, int d, int rank, double lo = 0.1,
                      double hi = 3.0) {
  const Mat q = random_orthogonal(rng, d);
  Mat h = Mat::Zero(d, d);
  for (int j = 0; j < rank; ++j)
    h += rng.uniform(lo, hi) * q.col(j) * q.col(j).transpose();
  return 0.5 * (h + h.transpose());
}

// Central finite difference of f at w, step scaled by max(1, |w|).
inline Vec numerical_gradient(const LossModel& loss, const Vec& w,
                              const Datum& z, double base_step = 1e-6) {
  const double step = base_step * std::max(1.0, w.norm());
  Vec g(w.size());
  for (int i = 0; i < w.size(); ++i) {
    Vec hi = w, lo = w;
    hi[i] += step;
    lo[i] -= step;
    g[i] = (loss.evaluate(hi, z) - loss.evaluate(lo, z)) / (2.0 * step);
  }
  return g;
}

// Brute-force minimum of the empirical objective over an axis-aligned grid
// restricted to the ball, `per_axis` points per axis (d <= 2).
inline double grid_minimum(const EmpiricalObjective& obj, const Ball& domain,
                           int per_axis) {
  const int d = obj.dim();
  const double lo = -domain.radius;
  const double step = 2.0 * domain.radius / (per_axis - 1);
  double best = std::numeric_limits<double>::infinity();
  if (d == 1) {
    for (int i = 0; i < per_axis; ++i) {
      Vec w(1);
      w[0] = domain.center[0] + lo + i * step;
      best = std::min(best, empirical_risk(obj, w));
    }
    return best;
  }
  for (int i = 0; i < per_axis; ++i) {
    for (int j = 0; j < per_axis; ++j) {
      Vec w(2);
      w[0] = domain.center[0] + lo + i * step;
      w[1] = domain.center[1] + lo + j * step;
      if ((w - domain.center).norm() > domain.radius) continue;
      best = std::min(best, empirical_risk(obj, w));
    }
  }
  return best;
}

}  // namespace ermlab::testing

#endif  // ERMLAB_TESTS_SUPPORT_HPP
