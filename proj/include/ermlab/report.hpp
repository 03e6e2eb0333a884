#ifndef ERMLAB_REPORT_HPP
#define ERMLAB_REPORT_HPP

#include <string>
#include <vector>

#include "ermlab/config.hpp"
#include "ermlab/sweep.hpp"

namespace ermlab {

// Writes trials.csv, summary.csv, rates.csv, plotdata_*.tsv and
// config.resolved into out_dir. Every file starts with a
// `# config-hash: <hex>` line binding it to the resolved configuration.
// Returns the paths written.
std::vector<std::string> emit_reports(const RiskSweepResult& result,
                                      const std::string& out_dir);

// Reloads the trial rows of a previously written trials.csv.
std::vector<TrialRecord> read_trials_csv(const std::string& path);

// Rebuilds cells, quantiles and slope fits from stored trial rows.
RiskSweepResult rebuild_result(const ExperimentConfig& config,
                               const std::vector<TrialRecord>& trials);

// Property checks behind the CLI `--check` flag. Returns human-readable
// violation messages; empty means all checks passed.
std::vector<std::string> check_sweep_properties(const RiskSweepResult& result);

}  // namespace ermlab

#endif  // ERMLAB_REPORT_HPP
