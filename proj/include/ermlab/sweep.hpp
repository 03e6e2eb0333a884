#ifndef ERMLAB_SWEEP_HPP
#define ERMLAB_SWEEP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ermlab/solver.hpp"

namespace ermlab {

enum class LossKind { kSquared, kLogistic };

std::string loss_kind_name(LossKind kind);

// Grid experiment description. `radius_r` is the label/feature radius R;
// `ball_b` is the reference-ball radius for the logistic loss.
struct ExperimentConfig {
  LossKind loss_kind = LossKind::kSquared;
  double radius_r = 1.0;
  double ball_b = 1.0;
  std::vector<int> dims;
  std::vector<int> sample_sizes;
  int trials = 0;
  std::vector<double> deltas;
  int atoms = 40;
  std::uint64_t distribution_seed = 0;
  std::uint64_t trial_seed = 0;
  double bound_constant = 1.0;

  LossModel make_loss() const;
  // Throws RangeError on an invalid grid, delta outside (0,1), or
  // trials < 50 / min(delta).
  void validate() const;
};

// m feature atoms on scaled spheres with in-spec labels; probabilities
// are normalized uniform weights. For the logistic loss each feature atom
// is duplicated into a (+1, -1) label pair with folded probabilities.
DiscreteDistribution make_distribution(const LossModel& loss, int dim,
                                       int atoms, std::uint64_t rng_seed);

struct TrialRecord {
  int d = 0;
  int n = 0;
  int trial = 0;
  double excess = 0.0;        // clipped at zero
  double excess_signed = 0.0; // pre-clip value
  bool converged = false;
};

struct CellResult {
  int d = 0;
  int n = 0;
  std::vector<double> sorted_risks;  // converged trials, ascending
  double mean = 0.0;
  std::vector<double> quantiles;     // aligned with config.deltas
  int flagged = 0;
  double min_signed = 0.0;
};

struct RateFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  double intercept = 0.0;
  int points = 0;
};

struct SlopeEntry {
  char axis = 'n';   // 'n': log q vs log n at fixed d; 'd': vs log d at fixed n
  int fixed = 0;     // the fixed d (axis 'n') or n (axis 'd')
  double delta = 0.0;  // 0.5 marks the median fit
  RateFit fit;
};

struct RiskSweepResult {
  ExperimentConfig config;
  double sigma = 0.0;
  double lipschitz = 0.0;
  std::vector<TrialRecord> trials;  // ordered by (d, n, trial)
  std::vector<CellResult> cells;    // ordered by (d, n)
  std::vector<SlopeEntry> slopes;

  const CellResult* find_cell(int d, int n) const;
};

// Empirical (1-delta)-quantile: ascending order statistic at the 1-based
// index ceil((1-delta) * count).
double empirical_quantile(const std::vector<double>& sorted, double delta);

// Ordinary least squares of y against x with slope standard error.
RateFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Fills result.slopes with log-log fits per (d, delta) and (n, delta);
// cells and quantiles must already be populated.
void fit_slopes(RiskSweepResult& result);

// Runs the full (d, n) grid: one distribution and exact w* per d, then
// `trials` ERM solves per cell with per-trial derived seeds. Output is
// identical for any thread count. Throws if more than 0.1% of a cell's
// trials fail to converge.
RiskSweepResult run_sweep(const ExperimentConfig& config, int threads = 1);

// c L^2 (d + log(1/delta)) / (sigma n); the corollary variant uses
// min{d + log(1/delta), log n log(1/delta)}.
double theory_bound(const LossModel& loss, int d, int n, double delta,
                    double constant, bool corollary_min_form = false);

struct TailPoint {
  double delta = 0.0;
  double quantile = 0.0;
  // [q(d2) - q(d1)] n sigma / (L^2 [log(1/d2) - log(1/d1)]) against the
  // previous point; NaN for the first entry and for repeated deltas.
  double rho = 0.0;
};

// Per-delta quantiles for one cell, sorted by decreasing delta, with the
// normalized tail-gap ratios.
std::vector<TailPoint> tail_profile(const RiskSweepResult& result, int d,
                                    int n);

}  // namespace ermlab

#endif  // ERMLAB_SWEEP_HPP
