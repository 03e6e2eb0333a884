#include "ermlab/processes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "ermlab/parallel.hpp"
#include "ermlab/rng.hpp"

namespace ermlab {

OffsetProcessInstance::OffsetProcessInstance(EmpiricalObjective obj,
                                             Vec w_star, Ball domain,
                                             std::vector<Vec> eval_set,
                                             double lambda_override)
    : obj_(std::move(obj)),
      w_star_(std::move(w_star)),
      domain_(std::move(domain)),
      eval_set_(std::move(eval_set)) {
  if (w_star_.size() != obj_.dim())
    throw DimMismatch("OffsetProcessInstance: w_star dimension mismatch");
  for (const Vec& w : eval_set_)
    if (!domain_.contains(w, 1e-9))
      throw Error("OffsetProcessInstance: eval point outside the domain");
  lambda_ = lambda_override > 0.0
                ? lambda_override
                : default_offset_lambda(obj_.loss, obj_.n());

  const std::size_t m = eval_set_.size();
  const int n = obj_.n();
  diffs_.resize(m * static_cast<std::size_t>(n));
  penalties_.resize(m);
  std::vector<double> star_losses(n);
  for (int i = 0; i < n; ++i)
    star_losses[i] = obj_.loss.evaluate(w_star_, obj_.sample[i]);
  for (std::size_t j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i)
      diffs_[static_cast<std::size_t>(i) * m + j] =
          obj_.loss.evaluate(eval_set_[j], obj_.sample[i]) - star_losses[i];
    const double dist = obj_.h.seminorm(eval_set_[j] - w_star_);
    penalties_[j] = obj_.loss.sigma / 8.0 * dist * dist;
  }
}

double default_offset_lambda(const LossModel& loss, int n) {
  return loss.sigma * n /
         (32.0 * std::exp(1.0) * loss.lipschitz * loss.lipschitz);
}

double offset_supremum(const OffsetProcessInstance& inst,
                       const std::vector<int>& signs) {
  const int n = inst.n();
  if (static_cast<int>(signs.size()) != n)
    throw DimMismatch("offset_supremum: sign count != n");
  const std::size_t m = inst.eval_set().size();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) {
    double dot = 0.0;
    for (int i = 0; i < n; ++i) dot += signs[i] * inst.diff(static_cast<int>(j), i);
    best = std::max(best, dot / n - inst.penalty(static_cast<int>(j)));
  }
  return best;
}

namespace {

struct RangeSums {
  double sum_exp = 0.0;
  double sum_sup = 0.0;
};

// Walks sign vectors gray(t) for t in [begin, end), maintaining the dot
// products incrementally: consecutive Gray codes differ in bit ctz(t).
RangeSums enumerate_range(const OffsetProcessInstance& inst,
                          std::uint64_t begin, std::uint64_t end) {
  const std::size_t m = inst.eval_set().size();
  const int n = inst.n();
  const double inv_n = 1.0 / n;
  const double lambda = inst.lambda();

  std::uint64_t gray = begin ^ (begin >> 1);
  std::vector<double> dots(m, 0.0);
  for (int i = 0; i < n; ++i) {
    const double sign = (gray >> i) & 1ULL ? -1.0 : 1.0;
    for (std::size_t j = 0; j < m; ++j)
      dots[j] += sign * inst.diff(static_cast<int>(j), i);
  }

  RangeSums sums;
  for (std::uint64_t t = begin;;) {
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j)
      sup = std::max(sup, dots[j] * inv_n - inst.penalty(static_cast<int>(j)));
    sums.sum_exp += std::exp(lambda * sup);
    sums.sum_sup += sup;

    if (++t >= end) break;
    const int bit = std::countr_zero(t);
    gray ^= 1ULL << bit;
    const double delta = (gray >> bit) & 1ULL ? -2.0 : 2.0;
    for (std::size_t j = 0; j < m; ++j)
      dots[j] += delta * inst.diff(static_cast<int>(j), bit);
  }
  return sums;
}

}  // namespace

ExpMomentResult exp_moment_exhaustive(const OffsetProcessInstance& inst,
                                      int threads) {
  const int n = inst.n();
  if (n > 16)
    throw TooManySigns("exp_moment_exhaustive: n = " + std::to_string(n) +
                       " > 16");
  const std::uint64_t total = 1ULL << n;
  // Fixed partition count, independent of the thread count, so partial
  // sums always combine identically.
  const std::uint64_t parts = std::min<std::uint64_t>(64, total);
  const std::uint64_t chunk = total / parts;

  std::vector<RangeSums> partial(parts);
  parallel_for(parts, threads, [&](std::size_t p) {
    partial[p] = enumerate_range(inst, p * chunk, (p + 1) * chunk);
  });

  double sum_exp = 0.0;
  double sum_sup = 0.0;
  for (const RangeSums& s : partial) {
    sum_exp += s.sum_exp;
    sum_sup += s.sum_sup;
  }
  const double weight = std::ldexp(1.0, -n);
  ExpMomentResult out;
  out.moment = sum_exp * weight;
  out.log_moment = std::log(out.moment);
  out.mean_sup = sum_sup * weight;
  return out;
}

double exp_moment_bound_log(int dim) {
  const double e = std::exp(1.0);
  const double c = 2048.0 * (1.0 + e) * (1.0 + e) / e;
  const double terms[3] = {1.0, 3.0 * dim, std::log(14.0) + c * dim};
  const double top = std::max({terms[0], terms[1], terms[2]});
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return top + std::log(sum);
}

McEstimate rademacher_sup_mc(const OffsetProcessInstance& inst, int trials,
                             std::uint64_t rng_seed) {
  if (trials < 100) throw Error("rademacher_sup_mc: trials < 100");
  const std::size_t m = inst.eval_set().size();
  const int n = inst.n();
  const double inv_n = 1.0 / n;

  double sum = 0.0;
  double sum_sq = 0.0;
  std::vector<double> signs(n);
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed({rng_seed, static_cast<std::uint64_t>(t)}));
    for (int i = 0; i < n; ++i) signs[i] = rng.sign();
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      double dot = 0.0;
      for (int i = 0; i < n; ++i)
        dot += signs[i] * inst.diff(static_cast<int>(j), i);
      sup = std::max(sup, dot * inv_n);
    }
    sum += sup;
    sum_sq += sup * sup;
  }
  McEstimate est;
  est.trials = trials;
  est.mean = sum / trials;
  const double var =
      std::max(0.0, (sum_sq - sum * sum / trials) / std::max(1, trials - 1));
  est.stderr_ = std::sqrt(var / trials);
  return est;
}

std::vector<Annulus> peel_decompose(const Ball& domain, const Vec& w_star,
                                    const PsdSeminorm& h, double r,
                                    int k_max) {
  if (r <= 0.0) throw NonPositiveRadius("peel_decompose: r <= 0");
  std::vector<Annulus> shells;
  shells.reserve(static_cast<std::size_t>(k_max) + 2);
  shells.emplace_back(domain, w_star, h, 0.0, r);
  double lo = r;
  for (int k = 0; k <= k_max; ++k) {
    shells.emplace_back(domain, w_star, h, lo, 2.0 * lo);
    lo *= 2.0;
  }
  return shells;
}

double peeling_radius(const LossModel& loss, int dim, int n) {
  return loss.lipschitz / loss.sigma * std::sqrt(static_cast<double>(dim) / n);
}

double h_diameter_bound(const Ball& domain, const Vec& w_star,
                        const PsdSeminorm& h) {
  const double lambda_top = h.eigenvalues().size() > 0 ? h.eigenvalues()[0] : 0.0;
  return std::sqrt(std::max(lambda_top, 0.0)) *
         ((domain.center - w_star).norm() + domain.radius);
}

std::vector<Vec> grid_eval_set(const Ball& domain, int per_axis) {
  const int d = static_cast<int>(domain.center.size());
  if (d < 1 || d > 2)
    throw Error("grid_eval_set: supported for d in {1, 2}");
  if (per_axis < 2) throw Error("grid_eval_set: per_axis < 2");
  std::vector<Vec> points;
  const double lo = -domain.radius;
  const double step = 2.0 * domain.radius / (per_axis - 1);
  if (d == 1) {
    points.reserve(per_axis);
    for (int i = 0; i < per_axis; ++i) {
      Vec w(1);
      w[0] = domain.center[0] + lo + i * step;
      points.push_back(std::move(w));
    }
    return points;
  }
  for (int i = 0; i < per_axis; ++i) {
    for (int j = 0; j < per_axis; ++j) {
      Vec w(2);
      w[0] = domain.center[0] + lo + i * step;
      w[1] = domain.center[1] + lo + j * step;
      if ((w - domain.center).norm() <= domain.radius) points.push_back(std::move(w));
    }
  }
  return points;
}

}  // namespace ermlab
