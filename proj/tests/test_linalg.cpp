#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>

#include "ermlab/linalg.hpp"
#include "support.hpp"

using namespace ermlab;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("identity seminorm") {
  const PsdSeminorm s = build_seminorm(Mat::Identity(2, 2));
  CHECK(s.rank() == 2);
  CHECK(s.eigenvalues()[0] == doctest::Approx(1.0));
  CHECK(s.eigenvalues()[1] == doctest::Approx(1.0));
  CHECK(seminorm_of(s, vec2(3.0, 4.0)) == doctest::Approx(5.0));
  CHECK(pushforward_root(s, vec2(1.0, 2.0)).isApprox(vec2(1.0, 2.0), 1e-12));
}

TEST_CASE("rank-deficient diagonal seminorm") {
  Mat h = Mat::Zero(2, 2);
  h(0, 0) = 4.0;
  const PsdSeminorm s = build_seminorm(h);
  CHECK(s.rank() == 1);
  CHECK(s.eigenvalues()[0] == doctest::Approx(4.0));
  CHECK(s.eigenvalues()[1] == doctest::Approx(0.0));

  Mat sqrt_expected = Mat::Zero(2, 2);
  sqrt_expected(0, 0) = 2.0;
  CHECK(s.sqrt_matrix().isApprox(sqrt_expected, 1e-12));
  Mat pinv_sqrt_expected = Mat::Zero(2, 2);
  pinv_sqrt_expected(0, 0) = 0.5;
  CHECK(s.pinv_sqrt_matrix().isApprox(pinv_sqrt_expected, 1e-12));

  CHECK(seminorm_of(s, vec2(1.0, 7.0)) == doctest::Approx(2.0));
  CHECK(seminorm_of(s, Vec::Zero(2)) == 0.0);

  // (H^+)^{1/2} a and the projector identity H^{1/2} (H^+)^{1/2} a = Pi a.
  const Vec mapped = pushforward_root(s, vec2(2.0, 2.0));
  CHECK(mapped.isApprox(vec2(1.0, 0.0), 1e-12));
  CHECK(s.apply_sqrt(mapped).isApprox(vec2(2.0, 0.0), 1e-12));
  CHECK(pushforward_root(s, vec2(0.0, 5.0)).norm() == doctest::Approx(0.0));
}

TEST_CASE("outer-product construction") {
  const Vec x1 = vec2(1.0, 0.0);
  const Vec x2 = vec2(0.0, 1.0);
  const Mat h = 0.5 * (x1 * x1.transpose() + x2 * x2.transpose());
  CHECK(h.isApprox(0.5 * Mat::Identity(2, 2), 1e-15));
  const PsdSeminorm s = build_seminorm(h);
  CHECK(s.rank() == 2);
  CHECK(s.eigenvalues()[0] == doctest::Approx(0.5));
}

TEST_CASE("construction errors") {
  Mat asym(2, 2);
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(build_seminorm(asym), NonSymmetric);

  CHECK_THROWS_AS(build_seminorm(Mat::Ones(2, 3)), NonSymmetric);

  Mat indef = Mat::Identity(2, 2);
  indef(1, 1) = -1.0;
  CHECK_THROWS_AS(build_seminorm(indef), IndefiniteMatrix);

  const PsdSeminorm s = build_seminorm(Mat::Identity(2, 2));
  CHECK_THROWS_AS(seminorm_of(s, Vec::Zero(3)), DimMismatch);
  CHECK_THROWS_AS(pushforward_root(s, Vec::Zero(3)), DimMismatch);
}

TEST_CASE("jacobi eigendecomposition against planted spectra") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + static_cast<int>(rng.index(8));
    const Mat q = testing::random_orthogonal(rng, d);
    Vec planted(d);
    for (int j = 0; j < d; ++j) planted[j] = rng.uniform(0.0, 5.0);
    std::sort(planted.data(), planted.data() + d, std::greater<double>());
    Mat h = Mat::Zero(d, d);
    for (int j = 0; j < d; ++j)
      h += planted[j] * q.col(j) * q.col(j).transpose();
    h = 0.5 * (h + h.transpose());

    const EigenDecomposition eig = symmetric_eigendecomposition(h);
    for (int j = 0; j < d; ++j)
      CHECK(eig.values[j] == doctest::Approx(planted[j]).epsilon(1e-9));
    CHECK((eig.vectors.transpose() * eig.vectors - Mat::Identity(d, d))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    Mat rebuilt = Mat::Zero(d, d);
    for (int j = 0; j < d; ++j)
      rebuilt +=
          eig.values[j] * eig.vectors.col(j) * eig.vectors.col(j).transpose();
    CHECK((rebuilt - h).norm() <= 1e-8 * std::max(1.0, h.norm()));
  }
}

TEST_CASE("projector idempotence and pseudo-inverse consistency") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + static_cast<int>(rng.index(6));
    const int rank = 1 + static_cast<int>(rng.index(d));
    const Mat h = testing::random_psd(rng, d, rank);
    const PsdSeminorm s = build_seminorm(h);
    CHECK(s.rank() == rank);

    const Mat pi = s.projector();
    CHECK((pi * pi - pi).norm() < 1e-10);

    const Mat hph = s.matrix() * s.pinv_matrix() * s.matrix();
    CHECK((hph - s.matrix()).norm() <= 1e-8 * s.matrix().norm());
  }
}

TEST_CASE("seminorm transfer and triangle inequality") {
  Rng rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 1 + static_cast<int>(rng.index(6));
    const int rank = 1 + static_cast<int>(rng.index(d));
    const PsdSeminorm s = build_seminorm(testing::random_psd(rng, d, rank));
    Vec u(d), v(d);
    for (int i = 0; i < d; ++i) {
      u[i] = rng.uniform(-2.0, 2.0);
      v[i] = rng.uniform(-2.0, 2.0);
    }
    CHECK(std::abs(s.seminorm(u) - s.apply_sqrt(u).norm()) < 1e-10);
    CHECK(s.seminorm(u + v) <= s.seminorm(u) + s.seminorm(v) + 1e-10);
  }
}

TEST_CASE("reconstruction from kept eigenpairs") {
  Rng rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + static_cast<int>(rng.index(5));
    const int rank = 1 + static_cast<int>(rng.index(d));
    const PsdSeminorm s = build_seminorm(testing::random_psd(rng, d, rank));
    Mat rebuilt = Mat::Zero(d, d);
    for (int j = 0; j < s.rank(); ++j)
      rebuilt += s.eigenvalues()[j] * s.eigenvectors().col(j) *
                 s.eigenvectors().col(j).transpose();
    CHECK((rebuilt - s.matrix()).norm() <= 1e-8 * s.matrix().norm());
  }
}

TEST_CASE("zero matrix has empty range") {
  const PsdSeminorm s = build_seminorm(Mat::Zero(3, 3));
  CHECK(s.rank() == 0);
  CHECK(s.seminorm(Vec::Ones(3)) == 0.0);
  CHECK(s.projector().norm() == 0.0);
}

TEST_CASE("top eigenvalue estimate brackets the true value") {
  // A Rayleigh quotient never exceeds the top eigenvalue; for step sizing
  // the solver only needs it within a few percent from below.
  Rng rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng.index(6));
    const Mat h = testing::random_psd(rng, d, d);
    const PsdSeminorm s = build_seminorm(h);
    const double estimate = top_eigenvalue_estimate(h);
    CHECK(estimate <= s.eigenvalues()[0] * (1.0 + 1e-12));
    CHECK(estimate >= s.eigenvalues()[0] * 0.95);
  }
}
