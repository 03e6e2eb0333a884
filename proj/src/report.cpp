#include "ermlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace ermlab {

namespace {

std::string hash_line(const std::string& resolved) {
  std::ostringstream out;
  out << "# config-hash: " << std::hex << fnv1a_hash(resolved) << "\n";
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace

std::vector<std::string> emit_reports(const RiskSweepResult& result,
                                      const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir + "'");

  const ExperimentConfig& cfg = result.config;
  const LossModel loss = cfg.make_loss();
  const std::string resolved = emit_resolved_config(cfg);
  const std::string stamp = hash_line(resolved);
  std::vector<std::string> written;

  auto emit = [&](const std::string& name, const std::string& body) {
    const std::string path = (fs::path(out_dir) / name).string();
    write_file(path, stamp + body);
    written.push_back(path);
  };

  emit("config.resolved", resolved);

  {
    std::ostringstream out;
    out << "d,n,trial,excess_risk,converged\n";
    for (const TrialRecord& rec : result.trials)
      out << rec.d << "," << rec.n << "," << rec.trial << ","
          << format_float(rec.excess) << "," << (rec.converged ? 1 : 0) << "\n";
    emit("trials.csv", out.str());
  }

  {
    std::ostringstream out;
    out << "d,n,delta,quantile,mean,theory_bound,ratio\n";
    for (const CellResult& cell : result.cells) {
      for (std::size_t k = 0; k < cfg.deltas.size(); ++k) {
        const double bound = theory_bound(loss, cell.d, cell.n, cfg.deltas[k],
                                          cfg.bound_constant);
        out << cell.d << "," << cell.n << "," << format_float(cfg.deltas[k])
            << "," << format_float(cell.quantiles[k]) << ","
            << format_float(cell.mean) << "," << format_float(bound) << ","
            << format_float(cell.quantiles[k] / bound) << "\n";
      }
    }
    emit("summary.csv", out.str());
  }

  {
    std::ostringstream out;
    out << "axis,fixed,delta,slope,stderr,intercept,points\n";
    for (const SlopeEntry& entry : result.slopes)
      out << entry.axis << "," << entry.fixed << ","
          << format_float(entry.delta) << "," << format_float(entry.fit.slope)
          << "," << format_float(entry.fit.stderr_) << ","
          << format_float(entry.fit.intercept) << "," << entry.fit.points
          << "\n";
    emit("rates.csv", out.str());
  }

  if (cfg.sample_sizes.size() >= 2) {
    for (int d : cfg.dims) {
      std::ostringstream out;
      out << "log_n";
      for (double delta : cfg.deltas)
        out << "\tlog_q_" << format_float(delta) << "\tlog_bound_"
            << format_float(delta);
      out << "\n";
      for (int n : cfg.sample_sizes) {
        const CellResult* cell = result.find_cell(d, n);
        out << format_float(std::log(static_cast<double>(n)));
        for (std::size_t k = 0; k < cfg.deltas.size(); ++k) {
          const double bound = theory_bound(loss, d, n, cfg.deltas[k],
                                            cfg.bound_constant);
          out << "\t" << format_float(std::log(cell->quantiles[k])) << "\t"
              << format_float(std::log(bound));
        }
        out << "\n";
      }
      emit("plotdata_n_d" + std::to_string(d) + ".tsv", out.str());
    }
  }
  if (cfg.dims.size() >= 2) {
    for (int n : cfg.sample_sizes) {
      std::ostringstream out;
      out << "log_d";
      for (double delta : cfg.deltas)
        out << "\tlog_q_" << format_float(delta) << "\tlog_bound_"
            << format_float(delta);
      out << "\n";
      for (int d : cfg.dims) {
        const CellResult* cell = result.find_cell(d, n);
        out << format_float(std::log(static_cast<double>(d)));
        for (std::size_t k = 0; k < cfg.deltas.size(); ++k) {
          const double bound = theory_bound(loss, d, n, cfg.deltas[k],
                                            cfg.bound_constant);
          out << "\t" << format_float(std::log(cell->quantiles[k])) << "\t"
              << format_float(std::log(bound));
        }
        out << "\n";
      }
      emit("plotdata_d_n" + std::to_string(n) + ".tsv", out.str());
    }
  }

  return written;
}

std::vector<TrialRecord> read_trials_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<TrialRecord> records;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // column header
      continue;
    }
    std::stringstream row(line);
    std::string field;
    TrialRecord rec;
    std::getline(row, field, ',');
    rec.d = std::stoi(field);
    std::getline(row, field, ',');
    rec.n = std::stoi(field);
    std::getline(row, field, ',');
    rec.trial = std::stoi(field);
    std::getline(row, field, ',');
    rec.excess = std::stod(field);
    rec.excess_signed = rec.excess;
    std::getline(row, field, ',');
    rec.converged = field == "1";
    records.push_back(rec);
  }
  return records;
}

RiskSweepResult rebuild_result(const ExperimentConfig& config,
                               const std::vector<TrialRecord>& trials) {
  const LossModel loss = config.make_loss();
  RiskSweepResult result;
  result.config = config;
  result.sigma = loss.sigma;
  result.lipschitz = loss.lipschitz;
  result.trials = trials;

  for (int d : config.dims) {
    for (int n : config.sample_sizes) {
      CellResult cell;
      cell.d = d;
      cell.n = n;
      cell.min_signed = std::numeric_limits<double>::infinity();
      for (const TrialRecord& rec : trials) {
        if (rec.d != d || rec.n != n) continue;
        if (rec.converged) {
          cell.sorted_risks.push_back(rec.excess);
          cell.mean += rec.excess;
          cell.min_signed = std::min(cell.min_signed, rec.excess_signed);
        } else {
          ++cell.flagged;
        }
      }
      if (cell.sorted_risks.empty())
        throw Error("rebuild_result: no rows for cell d=" + std::to_string(d) +
                    " n=" + std::to_string(n));
      std::sort(cell.sorted_risks.begin(), cell.sorted_risks.end());
      cell.mean /= static_cast<double>(cell.sorted_risks.size());
      for (double delta : config.deltas)
        cell.quantiles.push_back(empirical_quantile(cell.sorted_risks, delta));
      result.cells.push_back(std::move(cell));
    }
  }

  fit_slopes(result);
  return result;
}

std::vector<std::string> check_sweep_properties(const RiskSweepResult& result) {
  std::vector<std::string> violations;
  const ExperimentConfig& cfg = result.config;
  const LossModel loss = cfg.make_loss();

  for (const CellResult& cell : result.cells) {
    if (cell.min_signed < -1e-12)
      violations.push_back("cell d=" + std::to_string(cell.d) +
                           " n=" + std::to_string(cell.n) +
                           ": excess risk below -1e-12 before clipping");
    // Quantiles must not decrease as delta shrinks.
    std::vector<std::size_t> order(cfg.deltas.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return cfg.deltas[a] > cfg.deltas[b];
    });
    for (std::size_t i = 1; i < order.size(); ++i)
      if (cell.quantiles[order[i]] < cell.quantiles[order[i - 1]] - 1e-15)
        violations.push_back("cell d=" + std::to_string(cell.d) +
                             " n=" + std::to_string(cell.n) +
                             ": quantiles decrease as delta shrinks");
  }

  // Bound domination with the constant calibrated on the first cell.
  if (!result.cells.empty() && !cfg.deltas.empty()) {
    const CellResult& base = result.cells.front();
    const double base_bound =
        theory_bound(loss, base.d, base.n, cfg.deltas.front(), 1.0);
    const double calibrated = base.quantiles.front() / base_bound;
    if (calibrated > 0.0) {
      for (const CellResult& cell : result.cells)
        for (std::size_t k = 0; k < cfg.deltas.size(); ++k) {
          const double bound =
              theory_bound(loss, cell.d, cell.n, cfg.deltas[k], calibrated);
          if (cell.quantiles[k] > 4.0 * bound)
            violations.push_back(
                "cell d=" + std::to_string(cell.d) + " n=" +
                std::to_string(cell.n) + " delta=" +
                format_float(cfg.deltas[k]) +
                ": quantile exceeds 4x the calibrated theory bound");
        }
    }
  }

  // Rate shape, only when the grid is rich enough to fit it.
  if (cfg.sample_sizes.size() >= 3) {
    for (const SlopeEntry& entry : result.slopes)
      if (entry.axis == 'n' && entry.delta != 0.5 &&
          (entry.fit.slope < -1.25 || entry.fit.slope > -0.80))
        violations.push_back("slope_n at d=" + std::to_string(entry.fixed) +
                             " delta=" + format_float(entry.delta) + " is " +
                             format_float(entry.fit.slope) +
                             ", outside [-1.25, -0.80]");
  }
  if (cfg.dims.size() >= 3) {
    for (const SlopeEntry& entry : result.slopes)
      if (entry.axis == 'd' &&
          (entry.fit.slope < 0.5 || entry.fit.slope > 1.5))
        violations.push_back("slope_d at n=" + std::to_string(entry.fixed) +
                             " delta=" + format_float(entry.delta) + " is " +
                             format_float(entry.fit.slope) +
                             ", outside [0.5, 1.5]");
  }
  return violations;
}

}  // namespace ermlab
