#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ermlab/geometry.hpp"
#include "support.hpp"

using namespace ermlab;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

double euclidean_net_distance(const std::vector<Vec>& net, const Vec& x) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& p : net) best = std::min(best, (x - p).norm());
  return best;
}

// r chosen as an empirical quantile of |w - w*|_H over the ambient ball so
// rejection sampling of W[0, r] stays cheap.
double representative_radius(Rng& rng, const Ball& ball, const PsdSeminorm& h,
                             const Vec& center) {
  std::vector<double> norms;
  for (int i = 0; i < 200; ++i)
    norms.push_back(h.seminorm(rng.uniform_in_ball(ball.center, ball.radius) -
                               center));
  std::sort(norms.begin(), norms.end());
  return std::max(norms[119], 1e-3);
}

}  // namespace

TEST_CASE("euclidean projection") {
  const Ball unit(Vec::Zero(2), 1.0);
  CHECK(project_to_ball(unit, vec2(0.3, 0.4)).isApprox(vec2(0.3, 0.4)));
  CHECK(project_to_ball(unit, vec2(3.0, 4.0)).isApprox(vec2(0.6, 0.8), 1e-12));

  const Ball shifted(vec2(1.0, 0.0), 2.0);
  CHECK(project_to_ball(shifted, vec2(5.0, 0.0)).isApprox(vec2(3.0, 0.0), 1e-12));

  CHECK_THROWS_AS(project_to_ball(unit, Vec::Zero(3)), DimMismatch);
  CHECK_THROWS_AS(Ball(Vec::Zero(2), 0.0), NonPositiveRadius);
}

TEST_CASE("projection is idempotent and nonexpansive") {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 1 + static_cast<int>(rng.index(5));
    const Ball ball(rng.uniform_in_ball(Vec::Zero(d), 1.0),
                    rng.uniform(0.3, 2.0));
    Vec u(d), v(d);
    for (int i = 0; i < d; ++i) {
      u[i] = rng.uniform(-3.0, 3.0);
      v[i] = rng.uniform(-3.0, 3.0);
    }
    const Vec pu = project_to_ball(ball, u);
    const Vec pv = project_to_ball(ball, v);
    CHECK((project_to_ball(ball, pu) - pu).norm() <= 1e-10);
    CHECK((pu - pv).norm() <= (u - v).norm() + 1e-10);
  }
}

TEST_CASE("interval net") {
  const std::vector<Vec> net = build_euclidean_net(1, 1.0, 1.0, 7);
  CHECK(net.size() <= 3);
  CHECK(net.front().norm() == 0.0);  // origin seeds the packing
  Rng rng(22);
  for (int i = 0; i < 2000; ++i) {
    Vec x(1);
    x[0] = rng.uniform(-1.0, 1.0);
    CHECK(euclidean_net_distance(net, x) <= 1.0 + 1e-9);
  }
}

TEST_CASE("net scale validation") {
  CHECK_THROWS_AS(build_euclidean_net(2, 1.0, 0.0, 1), ScaleOutOfRange);
  CHECK_THROWS_AS(build_euclidean_net(2, 1.0, 1.5, 1), ScaleOutOfRange);
}

TEST_CASE("planar net: packing cardinality and sampled coverage") {
  const double r = 1.0;
  const double u = 0.5;
  const std::vector<Vec> net = build_euclidean_net(2, r, u, 33);
  CHECK(net.size() <= 25);  // (1 + 2r/u)^2
  for (std::size_t i = 0; i < net.size(); ++i)
    for (std::size_t j = i + 1; j < net.size(); ++j)
      CHECK((net[i] - net[j]).norm() > u - 1e-12);
  Rng rng(23);
  for (int i = 0; i < 10000; ++i) {
    const Vec x = rng.uniform_in_ball(Vec::Zero(2), r);
    CHECK(euclidean_net_distance(net, x) <= u + 1e-9);
  }
}

TEST_CASE("coarsest scale") {
  const std::vector<Vec> net = build_euclidean_net(3, 1.0, 1.0, 5);
  CHECK(net.size() <= 27);  // 3^d
  Rng rng(24);
  for (int i = 0; i < 3000; ++i) {
    const Vec x = rng.uniform_in_ball(Vec::Zero(3), 1.0);
    CHECK(euclidean_net_distance(net, x) <= 1.0 + 1e-9);
  }
}

TEST_CASE("annulus membership") {
  const Ball unit(Vec::Zero(2), 1.0);
  const PsdSeminorm id = build_seminorm(Mat::Identity(2, 2));
  const Annulus shell(unit, Vec::Zero(2), id, 0.5, 1.0);
  CHECK(annulus_membership(shell, vec2(0.75, 0.0)));
  CHECK_FALSE(annulus_membership(shell, vec2(0.25, 0.0)));

  const Annulus inner(unit, Vec::Zero(2), id, 0.0, 0.5);
  CHECK(annulus_membership(inner, Vec::Zero(2)));  // center, a = 0

  CHECK_THROWS_AS(annulus_membership(shell, Vec::Zero(3)), DimMismatch);
  CHECK_THROWS_AS(Annulus(unit, Vec::Zero(2), id, 0.5, 0.2), Error);
}

TEST_CASE("cover_annulus reduces to the euclidean net for identity H") {
  const Ball unit(Vec::Zero(2), 1.0);
  const PsdSeminorm id = build_seminorm(Mat::Identity(2, 2));
  const Annulus region(unit, Vec::Zero(2), id, 0.0, 0.8);
  const SeminormNet net = cover_annulus(region, 0.4, 99);
  const std::vector<Vec> euclid = build_euclidean_net(2, 0.8, 0.4, 99);
  REQUIRE(net.points.size() == euclid.size());
  for (std::size_t i = 0; i < euclid.size(); ++i)
    CHECK((net.points[i] - euclid[i]).norm() <= 1e-14);
  CHECK(net.certificate == doctest::Approx(std::pow(6.0 * 0.8 / 0.4, 2)));
}

TEST_CASE("cover_annulus on a kernel direction") {
  Mat h = Mat::Zero(2, 2);
  h(0, 0) = 4.0;
  const PsdSeminorm s = build_seminorm(h);
  const Ball unit(Vec::Zero(2), 1.0);
  const Annulus region(unit, Vec::Zero(2), s, 0.0, 1.0);
  const SeminormNet net = cover_annulus(region, 0.5, 314);

  CHECK(net.points.size() <= 5);  // 1-D packing bound (1 + 2r/u)
  for (const Vec& p : net.points) CHECK(p[1] == 0.0);  // kernel coordinate

  Rng rng(314159);
  int accepted = 0;
  while (accepted < 10000) {
    const Vec w = rng.uniform_in_ball(Vec::Zero(2), 1.0);
    if (s.seminorm(w) > 1.0) continue;
    ++accepted;
    CHECK(net_distance(net, s, w) <= 0.5 + 1e-8);
  }
}

TEST_CASE("cover_annulus coarsest scale") {
  Rng rng(25);
  const PsdSeminorm s = build_seminorm(testing::random_psd(rng, 3, 3));
  const Ball ball(Vec::Zero(3), 1.2);
  const double r = representative_radius(rng, ball, s, Vec::Zero(3));
  const Annulus region(ball, Vec::Zero(3), s, 0.0, r);
  const SeminormNet net = cover_annulus(region, r, 77);
  CHECK(net.points.size() <= 27);
  int accepted = 0;
  while (accepted < 2000) {
    const Vec w = rng.uniform_in_ball(ball.center, ball.radius);
    if (s.seminorm(w) > r) continue;
    ++accepted;
    CHECK(net_distance(net, s, w) <= r + 1e-8);
  }
}

TEST_CASE("cover_annulus keeps net points in the ambient ball") {
  // A small kept eigenvalue pushes raw mapped points far outside W; the
  // seminorm projection must pull them back without losing coverage.
  Rng rng(26);
  Mat h = Mat::Zero(2, 2);
  h(0, 0) = 1.0;
  h(1, 1) = 0.0025;  // (H^+)^{1/2} stretches e2 by 20x
  const PsdSeminorm s = build_seminorm(h);
  const Ball ball(Vec::Zero(2), 1.0);
  const Annulus region(ball, Vec::Zero(2), s, 0.0, 0.8);
  const SeminormNet net = cover_annulus(region, 0.25, 55);

  for (const Vec& p : net.points) CHECK(p.norm() <= ball.radius + 1e-9);

  int accepted = 0;
  while (accepted < 10000) {
    const Vec w = rng.uniform_in_ball(ball.center, ball.radius);
    if (s.seminorm(w) > 0.8) continue;
    ++accepted;
    CHECK(net_distance(net, s, w) <= 0.25 + 1e-8);
  }
}

TEST_CASE("randomized covering and cardinality certificates") {
  Rng rng(27);
  for (int config = 0; config < 10; ++config) {
    const int d = 1 + static_cast<int>(rng.index(3));
    const int rank = 1 + static_cast<int>(rng.index(d));
    const PsdSeminorm s =
        build_seminorm(testing::random_psd(rng, d, rank, 0.2, 3.0));
    const Ball ball(Vec::Zero(d), rng.uniform(0.8, 1.5));
    const Vec center = rng.uniform_in_ball(Vec::Zero(d), 0.3 * ball.radius);
    const double r = representative_radius(rng, ball, s, center);
    const double u = r * rng.uniform(0.45, 1.0);

    const Annulus region(ball, center, s, 0.0, r);
    const SeminormNet net = cover_annulus(region, u, 5000 + config);

    CHECK(static_cast<double>(net.points.size()) <=
          std::pow(1.0 + 2.0 * r / u, rank));
    CHECK(static_cast<double>(net.points.size()) <= net.certificate);

    int accepted = 0;
    int attempts = 0;
    while (accepted < 2000 && attempts < 2000000) {
      ++attempts;
      const Vec w = rng.uniform_in_ball(ball.center, ball.radius);
      if (s.seminorm(w - center) > r) continue;
      ++accepted;
      CHECK(net_distance(net, s, w) <= u + 1e-8);
    }
    CHECK(accepted == 2000);
  }
}
