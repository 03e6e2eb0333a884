#ifndef ERMLAB_LINALG_HPP
#define ERMLAB_LINALG_HPP

#include <utility>

#include <Eigen/Core>

#include "ermlab/errors.hpp"

namespace ermlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct EigenDecomposition {
  Vec values;   // nonincreasing
  Mat vectors;  // orthonormal columns, vectors.col(j) pairs with values[j]
};

// Cyclic Jacobi eigendecomposition for dense symmetric matrices.
// Intended for the small (d <= 64) matrices used throughout the lab.
EigenDecomposition symmetric_eigendecomposition(const Mat& matrix);

// Largest eigenvalue of a symmetric PSD matrix by power iteration with a
// deterministic start vector.
double top_eigenvalue_estimate(const Mat& matrix, int iters = 100);

// The data-dependent seminorm ||w||_H = sqrt(w' H w) together with the
// spectral objects the covering construction needs: H^{1/2}, (H^+)^{1/2},
// the Moore-Penrose pseudoinverse H^+ and the orthogonal projector onto
// range(H). Immutable after construction and safe to share across threads.
class PsdSeminorm {
 public:
  // Eigenvalues are kept iff lambda_j > rank_tol * max(lambda_1, 1);
  // dropped ones are treated as exact kernel directions.
  static constexpr double kRankTol = 1e-10;

  int dim() const { return static_cast<int>(matrix_.rows()); }
  int rank() const { return rank_; }
  const Mat& matrix() const { return matrix_; }
  const Vec& eigenvalues() const { return eigenvalues_; }
  const Mat& eigenvectors() const { return eigenvectors_; }

  // Kept eigenvectors only (d x rank), columns orthonormal.
  Mat range_basis() const { return eigenvectors_.leftCols(rank_); }

  Mat sqrt_matrix() const;       // H^{1/2}
  Mat pinv_sqrt_matrix() const;  // (H^+)^{1/2}
  Mat pinv_matrix() const;       // H^+
  Mat projector() const;         // H^{1/2} (H^+)^{1/2}

  Vec apply_sqrt(const Vec& v) const;
  Vec apply_pinv_sqrt(const Vec& v) const;
  Vec project(const Vec& v) const;

  // sqrt(w' H w), clipped at zero for round-off.
  double seminorm(const Vec& w) const;

  friend PsdSeminorm build_seminorm(const Mat& matrix);

 private:
  PsdSeminorm() = default;

  Mat matrix_;
  Vec eigenvalues_;
  Mat eigenvectors_;
  int rank_ = 0;
};

// Validates symmetry and positive semidefiniteness, then eigendecomposes.
// Throws NonSymmetric or IndefiniteMatrix.
PsdSeminorm build_seminorm(const Mat& matrix);

double seminorm_of(const PsdSeminorm& s, const Vec& w);

// (H^+)^{1/2} a. Satisfies H^{1/2} (H^+)^{1/2} a = projector * a.
Vec pushforward_root(const PsdSeminorm& s, const Vec& a);

}  // namespace ermlab

#endif  // ERMLAB_LINALG_HPP
