#include "ermlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace ermlab {

namespace {

double max_abs_entry(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

EigenDecomposition symmetric_eigendecomposition(const Mat& matrix) {
  const int d = static_cast<int>(matrix.rows());
  Mat a = 0.5 * (matrix + matrix.transpose());
  Mat v = Mat::Identity(d, d);

  const double scale = std::max(max_abs_entry(a), 1.0);
  const double stop = 1e-15 * scale;
  const int max_sweeps = 64;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < d; ++p)
      for (int q = p + 1; q < d; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= stop) break;

    for (int p = 0; p < d; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= stop * 1e-2) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        // Smaller-root tangent keeps rotations below 45 degrees.
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (int k = 0; k < d; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < d; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < d; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i) > a(j, j); });

  EigenDecomposition out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  for (int j = 0; j < d; ++j) {
    out.values[j] = a(order[j], order[j]);
    out.vectors.col(j) = v.col(order[j]);
  }
  return out;
}

double top_eigenvalue_estimate(const Mat& matrix, int iters) {
  const int d = static_cast<int>(matrix.rows());
  if (d == 0) return 0.0;
  Vec x = Vec::Ones(d);
  x[0] += 0.5;  // break symmetry against vectors orthogonal to ones
  x /= x.norm();
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vec y = matrix * x;
    const double norm = y.norm();
    if (norm <= 0.0) return 0.0;
    x = y / norm;
    lambda = x.dot(matrix * x);
  }
  return lambda;
}

PsdSeminorm build_seminorm(const Mat& matrix) {
  if (matrix.rows() != matrix.cols())
    throw NonSymmetric("build_seminorm: matrix is not square");

  const double scale = std::max(max_abs_entry(matrix), 1.0);
  const double asym = max_abs_entry(matrix - matrix.transpose());
  if (asym > 1e-12 * scale)
    throw NonSymmetric("build_seminorm: asymmetry " + std::to_string(asym) +
                       " exceeds tolerance");

  PsdSeminorm s;
  s.matrix_ = 0.5 * (matrix + matrix.transpose());
  EigenDecomposition eig = symmetric_eigendecomposition(s.matrix_);
  const double lambda_max = eig.values.size() > 0 ? eig.values[0] : 0.0;
  const double negative_tol = 1e-10 * std::max(lambda_max, 0.0);
  for (int j = 0; j < eig.values.size(); ++j) {
    if (eig.values[j] < -negative_tol)
      throw IndefiniteMatrix("build_seminorm: eigenvalue " +
                             std::to_string(eig.values[j]) +
                             " below -1e-10 * lambda_max");
    if (eig.values[j] < 0.0) eig.values[j] = 0.0;
  }

  const double rank_threshold =
      PsdSeminorm::kRankTol * std::max(lambda_max, 1.0);
  int rank = 0;
  while (rank < eig.values.size() && eig.values[rank] > rank_threshold) ++rank;

  s.eigenvalues_ = std::move(eig.values);
  s.eigenvectors_ = std::move(eig.vectors);
  s.rank_ = rank;
  return s;
}

Mat PsdSeminorm::sqrt_matrix() const {
  Mat out = Mat::Zero(dim(), dim());
  for (int j = 0; j < rank_; ++j)
    out += std::sqrt(eigenvalues_[j]) * eigenvectors_.col(j) *
           eigenvectors_.col(j).transpose();
  return out;
}

Mat PsdSeminorm::pinv_sqrt_matrix() const {
  Mat out = Mat::Zero(dim(), dim());
  for (int j = 0; j < rank_; ++j)
    out += (1.0 / std::sqrt(eigenvalues_[j])) * eigenvectors_.col(j) *
           eigenvectors_.col(j).transpose();
  return out;
}

Mat PsdSeminorm::pinv_matrix() const {
  Mat out = Mat::Zero(dim(), dim());
  for (int j = 0; j < rank_; ++j)
    out += (1.0 / eigenvalues_[j]) * eigenvectors_.col(j) *
           eigenvectors_.col(j).transpose();
  return out;
}

Mat PsdSeminorm::projector() const {
  Mat out = Mat::Zero(dim(), dim());
  for (int j = 0; j < rank_; ++j)
    out += eigenvectors_.col(j) * eigenvectors_.col(j).transpose();
  return out;
}

Vec PsdSeminorm::apply_sqrt(const Vec& v) const {
  Vec out = Vec::Zero(dim());
  for (int j = 0; j < rank_; ++j)
    out += std::sqrt(eigenvalues_[j]) * eigenvectors_.col(j).dot(v) *
           eigenvectors_.col(j);
  return out;
}

Vec PsdSeminorm::apply_pinv_sqrt(const Vec& v) const {
  Vec out = Vec::Zero(dim());
  for (int j = 0; j < rank_; ++j)
    out += eigenvectors_.col(j).dot(v) / std::sqrt(eigenvalues_[j]) *
           eigenvectors_.col(j);
  return out;
}

Vec PsdSeminorm::project(const Vec& v) const {
  Vec out = Vec::Zero(dim());
  for (int j = 0; j < rank_; ++j)
    out += eigenvectors_.col(j).dot(v) * eigenvectors_.col(j);
  return out;
}

double PsdSeminorm::seminorm(const Vec& w) const {
  if (w.size() != matrix_.rows())
    throw DimMismatch("seminorm: vector dimension " +
                      std::to_string(w.size()) + " != " +
                      std::to_string(matrix_.rows()));
  const double q = w.dot(matrix_ * w);
  return q <= 0.0 ? 0.0 : std::sqrt(q);
}

double seminorm_of(const PsdSeminorm& s, const Vec& w) { return s.seminorm(w); }

Vec pushforward_root(const PsdSeminorm& s, const Vec& a) {
  if (a.size() != s.dim())
    throw DimMismatch("pushforward_root: vector dimension " +
                      std::to_string(a.size()) + " != " +
                      std::to_string(s.dim()));
  return s.apply_pinv_sqrt(a);
}

}  // namespace ermlab
