#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ermlab/solver.hpp"
#include "support.hpp"

using namespace ermlab;

namespace {

Datum datum1(const LossModel& loss, double x, double y) {
  Vec f(1);
  f << x;
  return loss.make_datum(f, y);
}

std::vector<Datum> random_sample(const LossModel& loss, int d, int n,
                                 Rng& rng) {
  std::vector<Datum> sample;
  for (int i = 0; i < n; ++i) {
    const Vec x =
        loss.feature_radius * rng.uniform(0.2, 1.0) * rng.sphere_direction(d);
    const double y = loss.label_kind == LabelKind::kRealBounded
                         ? rng.uniform(-loss.label_bound, loss.label_bound)
                         : static_cast<double>(rng.sign());
    sample.push_back(loss.make_datum(x, y));
  }
  return sample;
}

}  // namespace

TEST_CASE("least-squares ERM against the normal equations") {
  const LossModel loss = make_squared_loss(2.0);
  const EmpiricalObjective obj = make_empirical_objective(
      loss, {datum1(loss, 1.0, 0.5), datum1(loss, 1.0, 1.5)});
  const Ball domain(Vec::Zero(1), 2.0);
  const ErmResult res = minimize_empirical(obj, domain, 1e-8);
  CHECK(res.converged);
  CHECK(res.w_hat[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("kernel directions stay at the initialization") {
  const LossModel loss = make_squared_loss(1.0);
  Vec x(2);
  x << 0.8, 0.0;  // second coordinate never enters the objective
  const EmpiricalObjective obj = make_empirical_objective(
      loss, {loss.make_datum(x, 0.3), loss.make_datum(x, -0.1)});
  const Ball domain(Vec::Zero(2), 1.0);
  const ErmResult res = minimize_empirical(obj, domain, 1e-9);
  CHECK(res.w_hat[1] == 0.0);
}

TEST_CASE("symmetric logistic data force zero") {
  const LossModel loss = make_logistic_loss(1.0, 1.0);
  const EmpiricalObjective obj = make_empirical_objective(
      loss, {datum1(loss, 1.0, 1.0), datum1(loss, 1.0, -1.0)});
  const Ball domain(Vec::Zero(1), 1.0);
  const ErmResult res = minimize_empirical(obj, domain, 1e-9);
  CHECK(std::abs(res.w_hat[0]) <= 1e-8);
}

TEST_CASE("population minimizer, single atom") {
  const LossModel loss = make_squared_loss(1.0);
  DiscreteDistribution dist({datum1(loss, 1.0, 0.8)}, Vec::Ones(1));
  const Ball domain(Vec::Zero(1), 1.0);
  const ErmResult res = minimize_population(loss, dist, domain, 1e-6);
  CHECK(res.w_hat[0] == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("population minimizer, symmetric logistic atoms") {
  const LossModel loss = make_logistic_loss(1.0, 1.0);
  DiscreteDistribution dist({datum1(loss, 1.0, 1.0), datum1(loss, 1.0, -1.0)},
                            Vec::Constant(2, 0.5));
  const Ball domain(Vec::Zero(1), 1.0);
  const ErmResult res = minimize_population(loss, dist, domain, 1e-6);
  CHECK(std::abs(res.w_hat[0]) <= 1e-7);
}

TEST_CASE("uniform population coincides with the empirical solution") {
  Rng rng(31);
  const LossModel loss = make_squared_loss(1.0);
  const std::vector<Datum> sample = random_sample(loss, 3, 25, rng);
  const EmpiricalObjective obj = make_empirical_objective(loss, sample);
  DiscreteDistribution dist(sample, Vec::Constant(25, 1.0 / 25.0));
  const Ball domain(Vec::Zero(3), 1.0);

  const ErmResult erm = minimize_empirical(obj, domain, 1e-9);
  const ErmResult pop = minimize_population(loss, dist, domain, 1e-8);
  CHECK((erm.w_hat - pop.w_hat).norm() <= 1e-6);
}

TEST_CASE("excess risk") {
  const LossModel loss = make_squared_loss(1.0);
  DiscreteDistribution dist({datum1(loss, 1.0, 0.0)}, Vec::Ones(1));
  Vec w(1), w_star(1);
  w << 0.1;
  w_star << 0.0;
  CHECK(excess_risk(loss, dist, w, w_star) == doctest::Approx(0.01));
  CHECK(excess_risk(loss, dist, w_star, w_star) == 0.0);
}

TEST_CASE("excess risk of ERM is nonnegative up to round-off") {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const LossModel loss = make_squared_loss(1.0);
    const int d = 1 + static_cast<int>(rng.index(3));
    const std::vector<Datum> sample = random_sample(loss, d, 40, rng);
    DiscreteDistribution dist(sample, Vec::Constant(40, 1.0 / 40.0));
    const Ball domain(Vec::Zero(d), 1.0);
    const Vec w_star = minimize_population(loss, dist, domain, 1e-8).w_hat;

    // ERM over a re-drawn subsample is never below the population optimum
    // by more than the w* solve error.
    std::vector<Datum> subsample;
    for (int i = 0; i < 15; ++i)
      subsample.push_back(sample[rng.index(sample.size())]);
    const EmpiricalObjective obj =
        make_empirical_objective(loss, std::move(subsample));
    const Vec w_hat = minimize_empirical(obj, domain, 1e-6).w_hat;
    CHECK(excess_risk_signed(loss, dist, w_hat, w_star) >= -1e-12);
  }
}

TEST_CASE("objective trace is nonincreasing") {
  Rng rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const LossModel loss =
        trial % 2 == 0 ? make_squared_loss(1.0) : make_logistic_loss(1.0, 1.0);
    const int d = 1 + static_cast<int>(rng.index(4));
    const EmpiricalObjective obj =
        make_empirical_objective(loss, random_sample(loss, d, 30, rng));
    const Ball domain(Vec::Zero(d), loss.domain_radius);
    std::vector<double> trace;
    const double smoothness =
        obj.loss.curvature_factor * obj.h.eigenvalues()[0];
    minimize_objective([&](const Vec& w) { return empirical_risk(obj, w); },
                       [&](const Vec& w) { return empirical_gradient(obj, w); },
                       domain, 1e-8, 50000, smoothness, &trace);
    for (std::size_t i = 1; i < trace.size(); ++i)
      CHECK(trace[i] <= trace[i - 1] + 1e-14 * std::max(1.0, trace[i - 1]));
  }
}

TEST_CASE("solver matches a brute-force grid") {
  Rng rng(34);
  for (int trial = 0; trial < 6; ++trial) {
    const bool squared = trial % 2 == 0;
    const LossModel loss =
        squared ? make_squared_loss(1.0) : make_logistic_loss(1.0, 1.0);
    const int d = 1 + static_cast<int>(rng.index(2));
    // Labels correlated with a small planted direction keep the minimizer
    // in the interior, where the grid resolves the optimum.
    const Vec planted = 0.4 * rng.sphere_direction(d);
    std::vector<Datum> sample;
    for (int i = 0; i < 20; ++i) {
      const Vec x = loss.feature_radius * rng.uniform(0.3, 1.0) *
                    rng.sphere_direction(d);
      double y;
      if (squared) {
        y = std::clamp(planted.dot(x) + 0.1 * rng.uniform(-1.0, 1.0), -1.0, 1.0);
      } else {
        y = rng.uniform() < 1.0 / (1.0 + std::exp(-planted.dot(x))) ? 1.0 : -1.0;
      }
      sample.push_back(loss.make_datum(x, y));
    }
    const EmpiricalObjective obj = make_empirical_objective(loss, sample);
    const Ball domain(Vec::Zero(d), loss.domain_radius);
    const ErmResult res = minimize_empirical(obj, domain, 1e-7);
    const double grid_best =
        testing::grid_minimum(obj, domain, d == 1 ? 2001 : 801);
    CHECK(res.objective <= grid_best + 1e-9);
    CHECK(grid_best - res.objective <= 1e-6);
  }
}

TEST_CASE("strong-convexity residual at the solution") {
  Rng rng(35);
  for (int trial = 0; trial < 10; ++trial) {
    const LossModel loss =
        trial % 2 == 0 ? make_squared_loss(1.0) : make_logistic_loss(1.0, 1.0);
    const int d = 1 + static_cast<int>(rng.index(4));
    const EmpiricalObjective obj =
        make_empirical_objective(loss, random_sample(loss, d, 50, rng));
    const Ball domain(Vec::Zero(d), loss.domain_radius);
    const ErmResult res = minimize_empirical(obj, domain, 1e-8);
    const double f_hat = empirical_risk(obj, res.w_hat);
    for (int k = 0; k < 100; ++k) {
      const Vec w = rng.uniform_in_ball(domain.center, domain.radius);
      const double dist = obj.h.seminorm(w - res.w_hat);
      CHECK(empirical_risk(obj, w) >=
            f_hat + loss.sigma / 4.0 * dist * dist - 1e-6);
    }
  }
}

TEST_CASE("results are bit-identical across runs") {
  Rng rng(36);
  const LossModel loss = make_logistic_loss(1.0, 1.0);
  const EmpiricalObjective obj =
      make_empirical_objective(loss, random_sample(loss, 4, 60, rng));
  const Ball domain(Vec::Zero(4), 1.0);
  const ErmResult a = minimize_empirical(obj, domain, 1e-8);
  const ErmResult b = minimize_empirical(obj, domain, 1e-8);
  CHECK(a.iterations == b.iterations);
  CHECK(a.objective == b.objective);
  CHECK(a.gradient_map_norm == b.gradient_map_norm);
  for (int i = 0; i < 4; ++i) CHECK(a.w_hat[i] == b.w_hat[i]);
}

TEST_CASE("iteration cap raises NotConverged with the partial result") {
  Rng rng(37);
  const LossModel loss = make_squared_loss(1.0);
  const EmpiricalObjective obj =
      make_empirical_objective(loss, random_sample(loss, 3, 30, rng));
  const Ball domain(Vec::Zero(3), 1.0);
  try {
    minimize_empirical(obj, domain, 1e-12, 2);
    FAIL("expected NotConverged");
  } catch (const NotConverged& err) {
    CHECK_FALSE(err.partial().converged);
    CHECK(err.partial().gradient_map_norm > 1e-12);
    CHECK(err.partial().w_hat.size() == 3);
  }
}

TEST_CASE("distribution validation") {
  const LossModel loss = make_squared_loss(1.0);
  CHECK_THROWS_AS(DiscreteDistribution({}, Vec{}), TooFewAtoms);
  CHECK_THROWS_AS(
      DiscreteDistribution({datum1(loss, 1.0, 0.0)}, Vec::Constant(1, 0.5)),
      Error);
  Vec negative(2);
  negative << 1.5, -0.5;
  CHECK_THROWS_AS(DiscreteDistribution(
                      {datum1(loss, 1.0, 0.0), datum1(loss, 0.5, 0.1)},
                      negative),
                  Error);
}

TEST_CASE("derived tolerance scales with the statistical rate") {
  const LossModel loss = make_squared_loss(1.0);
  const double t100 = derive_erm_tolerance(loss, 5, 100, 1.0);
  const double t400 = derive_erm_tolerance(loss, 5, 400, 1.0);
  CHECK(t100 > 0.0);
  CHECK(t400 == doctest::Approx(t100 / 2.0));
}
