#include "ermlab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ermlab/parallel.hpp"
#include "ermlab/rng.hpp"

namespace ermlab {

std::string loss_kind_name(LossKind kind) {
  return kind == LossKind::kSquared ? "squared" : "logistic";
}

LossModel ExperimentConfig::make_loss() const {
  return loss_kind == LossKind::kSquared
             ? make_squared_loss(radius_r)
             : make_logistic_loss(ball_b, radius_r);
}

void ExperimentConfig::validate() const {
  if (dims.empty()) throw RangeError("config: dims is empty");
  if (sample_sizes.empty()) throw RangeError("config: ns is empty");
  if (deltas.empty()) throw RangeError("config: deltas is empty");
  if (trials < 1) throw RangeError("config: trials < 1");
  if (atoms < 2) throw RangeError("config: atoms < 2");
  if (radius_r <= 0.0) throw RangeError("config: R <= 0");
  if (loss_kind == LossKind::kLogistic && ball_b <= 0.0)
    throw RangeError("config: B <= 0");
  if (bound_constant <= 0.0) throw RangeError("config: bound_constant <= 0");
  for (int d : dims)
    if (d < 1) throw RangeError("config: dims must be positive");
  for (int n : sample_sizes)
    if (n < 1) throw RangeError("config: ns must be positive");
  double delta_min = 1.0;
  for (double delta : deltas) {
    if (!(delta > 0.0 && delta < 1.0))
      throw RangeError("config: delta " + std::to_string(delta) +
                       " outside (0, 1)");
    delta_min = std::min(delta_min, delta);
  }
  if (static_cast<double>(trials) < 50.0 / delta_min)
    throw RangeError("config: trials = " + std::to_string(trials) +
                     " below the quantile requirement trials >= 50/delta (= " +
                     std::to_string(50.0 / delta_min) + ")");
}

DiscreteDistribution make_distribution(const LossModel& loss, int dim,
                                       int atoms, std::uint64_t rng_seed) {
  if (atoms < 2) throw TooFewAtoms("make_distribution: atoms < 2");
  Rng rng(rng_seed);

  std::vector<Vec> features;
  features.reserve(atoms);
  for (int j = 0; j < atoms; ++j) {
    const double scale = rng.uniform(0.3, 1.0);
    features.push_back(loss.feature_radius * scale * rng.sphere_direction(dim));
  }
  Vec weights(atoms);
  double total = 0.0;
  for (int j = 0; j < atoms; ++j) {
    weights[j] = rng.uniform();
    total += weights[j];
  }
  weights /= total;

  std::vector<Datum> data;
  Vec probabilities;
  if (loss.label_kind == LabelKind::kRealBounded) {
    probabilities = weights;
    data.reserve(atoms);
    for (int j = 0; j < atoms; ++j)
      data.push_back(loss.make_datum(
          features[j], rng.uniform(-loss.label_bound, loss.label_bound)));
  } else {
    // Fold the per-atom label law P(y = +1 | x_j) into duplicate atoms.
    probabilities.resize(2 * atoms);
    data.reserve(2 * atoms);
    for (int j = 0; j < atoms; ++j) {
      const double q = rng.uniform();
      data.push_back(loss.make_datum(features[j], 1.0));
      probabilities[2 * j] = weights[j] * q;
      data.push_back(loss.make_datum(features[j], -1.0));
      probabilities[2 * j + 1] = weights[j] * (1.0 - q);
    }
    probabilities /= probabilities.sum();
  }
  return DiscreteDistribution(std::move(data), std::move(probabilities));
}

double empirical_quantile(const std::vector<double>& sorted, double delta) {
  if (sorted.empty()) throw Error("empirical_quantile: empty sample");
  const auto count = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil((1.0 - delta) * count));
  rank = std::min(std::max<std::size_t>(rank, 1), sorted.size());
  return sorted[rank - 1];
}

RateFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  RateFit fit;
  fit.points = static_cast<int>(x.size());
  if (x.size() != y.size() || x.size() < 2)
    throw Error("fit_line: need at least two points");
  const double m = static_cast<double>(x.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= m;
  mean_y /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mean_x) * (x[i] - mean_x);
    sxy += (x[i] - mean_x) * (y[i] - mean_y);
  }
  if (sxx == 0.0) throw Error("fit_line: degenerate abscissae");
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  if (x.size() > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      ssr += r * r;
    }
    fit.stderr_ = std::sqrt(ssr / (m - 2.0) / sxx);
  }
  return fit;
}

const CellResult* RiskSweepResult::find_cell(int d, int n) const {
  for (const CellResult& cell : cells)
    if (cell.d == d && cell.n == n) return &cell;
  return nullptr;
}

void fit_slopes(RiskSweepResult& result) {
  const ExperimentConfig& cfg = result.config;

  std::vector<double> deltas_with_median = cfg.deltas;
  if (std::find(deltas_with_median.begin(), deltas_with_median.end(), 0.5) ==
      deltas_with_median.end())
    deltas_with_median.push_back(0.5);

  for (int d : cfg.dims) {
    if (cfg.sample_sizes.size() < 2) break;
    for (double delta : deltas_with_median) {
      std::vector<double> xs, ys;
      bool usable = true;
      for (int n : cfg.sample_sizes) {
        const CellResult* cell = result.find_cell(d, n);
        double q;
        const auto it =
            std::find(cfg.deltas.begin(), cfg.deltas.end(), delta);
        if (it != cfg.deltas.end()) {
          q = cell->quantiles[static_cast<std::size_t>(it - cfg.deltas.begin())];
        } else {
          q = empirical_quantile(cell->sorted_risks, 0.5);
        }
        if (q <= 0.0) {
          usable = false;
          break;
        }
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(q));
      }
      if (!usable) continue;
      SlopeEntry entry;
      entry.axis = 'n';
      entry.fixed = d;
      entry.delta = delta;
      entry.fit = fit_line(xs, ys);
      result.slopes.push_back(entry);
    }
  }

  for (int n : cfg.sample_sizes) {
    if (cfg.dims.size() < 2) break;
    for (std::size_t k = 0; k < cfg.deltas.size(); ++k) {
      std::vector<double> xs, ys;
      bool usable = true;
      for (int d : cfg.dims) {
        const CellResult* cell = result.find_cell(d, n);
        const double q = cell->quantiles[k];
        if (q <= 0.0) {
          usable = false;
          break;
        }
        xs.push_back(std::log(static_cast<double>(d)));
        ys.push_back(std::log(q));
      }
      if (!usable) continue;
      SlopeEntry entry;
      entry.axis = 'd';
      entry.fixed = n;
      entry.delta = cfg.deltas[k];
      entry.fit = fit_line(xs, ys);
      result.slopes.push_back(entry);
    }
  }
}

RiskSweepResult run_sweep(const ExperimentConfig& config, int threads) {
  config.validate();
  const LossModel loss = config.make_loss();

  RiskSweepResult result;
  result.config = config;
  result.sigma = loss.sigma;
  result.lipschitz = loss.lipschitz;

  const int max_n =
      *std::max_element(config.sample_sizes.begin(), config.sample_sizes.end());

  for (int d : config.dims) {
    const Ball domain(Vec::Zero(d), loss.domain_radius);
    const DiscreteDistribution dist = make_distribution(
        loss, d, config.atoms, derive_seed({config.distribution_seed,
                                            static_cast<std::uint64_t>(d)}));
    // One exact minimizer per dimension, solved well below every cell's
    // ERM tolerance so its error never shows in the excess risks.
    const double w_star_tol =
        derive_erm_tolerance(loss, d, max_n, loss.domain_radius) / 10.0;
    const Vec w_star =
        minimize_population(loss, dist, domain, w_star_tol).w_hat;
    const double f_star = population_risk(loss, dist, w_star);

    for (int n : config.sample_sizes) {
      const double tol = derive_erm_tolerance(loss, d, n, loss.domain_radius);
      std::vector<TrialRecord> records(config.trials);

      parallel_for(config.trials, threads, [&](std::size_t t) {
        Rng rng(derive_seed({config.trial_seed, static_cast<std::uint64_t>(d),
                             static_cast<std::uint64_t>(n),
                             static_cast<std::uint64_t>(t)}));
        std::vector<Datum> sample;
        sample.reserve(n);
        for (int i = 0; i < n; ++i)
          sample.push_back(dist.atoms[dist.sample_index(rng)]);
        EmpiricalObjective obj =
            make_empirical_objective(loss, std::move(sample));

        TrialRecord rec;
        rec.d = d;
        rec.n = n;
        rec.trial = static_cast<int>(t);
        Vec w_hat;
        try {
          w_hat = minimize_empirical(obj, domain, tol).w_hat;
          rec.converged = true;
        } catch (const NotConverged& err) {
          w_hat = err.partial().w_hat;
          rec.converged = false;
        }
        rec.excess_signed = population_risk(loss, dist, w_hat) - f_star;
        rec.excess = std::max(rec.excess_signed, 0.0);
        records[t] = std::move(rec);
      });

      CellResult cell;
      cell.d = d;
      cell.n = n;
      cell.min_signed = std::numeric_limits<double>::infinity();
      for (const TrialRecord& rec : records) {
        if (rec.converged) {
          cell.sorted_risks.push_back(rec.excess);
          cell.mean += rec.excess;
          cell.min_signed = std::min(cell.min_signed, rec.excess_signed);
        } else {
          ++cell.flagged;
        }
      }
      if (cell.flagged > 0.001 * config.trials)
        throw Error("run_sweep: cell d=" + std::to_string(d) +
                    " n=" + std::to_string(n) + " has " +
                    std::to_string(cell.flagged) +
                    " non-converged trials (above the 0.1% cap)");
      std::sort(cell.sorted_risks.begin(), cell.sorted_risks.end());
      cell.mean /= static_cast<double>(cell.sorted_risks.size());
      for (double delta : config.deltas)
        cell.quantiles.push_back(empirical_quantile(cell.sorted_risks, delta));

      result.trials.insert(result.trials.end(), records.begin(), records.end());
      result.cells.push_back(std::move(cell));
    }
  }

  fit_slopes(result);
  return result;
}

double theory_bound(const LossModel& loss, int d, int n, double delta,
                    double constant, bool corollary_min_form) {
  if (!(delta > 0.0 && delta < 1.0))
    throw BadDelta("theory_bound: delta outside (0, 1)");
  const double lips2 = loss.lipschitz * loss.lipschitz;
  const double log_term = std::log(1.0 / delta);
  double complexity = d + log_term;
  if (corollary_min_form)
    complexity = std::min(complexity, std::log(static_cast<double>(n)) * log_term);
  return constant * lips2 * complexity / (loss.sigma * n);
}

std::vector<TailPoint> tail_profile(const RiskSweepResult& result, int d,
                                    int n) {
  const CellResult* cell = result.find_cell(d, n);
  if (cell == nullptr)
    throw Error("tail_profile: no cell for d=" + std::to_string(d) +
                " n=" + std::to_string(n));
  double delta_min = 1.0;
  for (double delta : result.config.deltas) delta_min = std::min(delta_min, delta);
  if (static_cast<double>(cell->sorted_risks.size()) < 50.0 / delta_min)
    throw InsufficientTrials("tail_profile: fewer than 50/delta samples");

  std::vector<std::size_t> order(result.config.deltas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return result.config.deltas[a] > result.config.deltas[b];
  });

  const double lips2 = result.lipschitz * result.lipschitz;
  std::vector<TailPoint> profile;
  profile.reserve(order.size());
  for (std::size_t idx : order) {
    TailPoint point;
    point.delta = result.config.deltas[idx];
    point.quantile = cell->quantiles[idx];
    point.rho = std::numeric_limits<double>::quiet_NaN();
    if (!profile.empty()) {
      const TailPoint& prev = profile.back();
      const double log_gap =
          std::log(1.0 / point.delta) - std::log(1.0 / prev.delta);
      if (log_gap > 0.0)
        point.rho = (point.quantile - prev.quantile) * n * result.sigma /
                    (lips2 * log_gap);
    }
    profile.push_back(point);
  }
  return profile;
}

}  // namespace ermlab
