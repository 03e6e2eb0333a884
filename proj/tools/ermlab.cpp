#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ermlab/config.hpp"
#include "ermlab/parallel.hpp"
#include "ermlab/processes.hpp"
#include "ermlab/report.hpp"
#include "ermlab/rng.hpp"
#include "ermlab/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCheck = 4;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  int threads = 0;
  bool check = false;
};

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("ERMLAB_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return ermlab::default_thread_count();
}

ermlab::KeyValueFile load_config(const CommonArgs& args) {
  ermlab::KeyValueFile file = ermlab::parse_key_value_file(args.config_path);
  ermlab::apply_overrides(file, args.overrides);
  return file;
}

void write_output(const std::string& out_dir, const std::string& name,
                  const std::string& header_comment, const std::string& body) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ermlab::IoError("cannot create output directory " + out_dir);
  const std::string path = (fs::path(out_dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ermlab::IoError("cannot open " + path);
  out << header_comment << body;
  if (!out) throw ermlab::IoError("write failed for " + path);
  std::cout << "wrote " << path << "\n";
}

// Sample of size n drawn i.i.d. from a generated finite-support
// distribution; shared by the certify / solve / expmoment subcommands.
std::vector<ermlab::Datum> draw_sample(const ermlab::LossModel& loss, int dim,
                                       int atoms, int n, std::uint64_t seed,
                                       ermlab::DiscreteDistribution* dist_out) {
  ermlab::DiscreteDistribution dist = ermlab::make_distribution(
      loss, dim, atoms, ermlab::derive_seed({seed, 0xD157ULL}));
  ermlab::Rng rng(ermlab::derive_seed({seed, 0x5A3eULL}));
  std::vector<ermlab::Datum> sample;
  sample.reserve(n);
  for (int i = 0; i < n; ++i)
    sample.push_back(dist.atoms[dist.sample_index(rng)]);
  if (dist_out) *dist_out = std::move(dist);
  return sample;
}

int run_certify(const CommonArgs& args) {
  const ermlab::CertifyConfig cfg =
      ermlab::parse_certify_config(load_config(args));
  const ermlab::LossModel loss = cfg.loss_kind == ermlab::LossKind::kSquared
                                     ? ermlab::make_squared_loss(cfg.radius_r)
                                     : ermlab::make_logistic_loss(cfg.ball_b,
                                                                  cfg.radius_r);
  std::vector<ermlab::Datum> sample =
      draw_sample(loss, cfg.dim, cfg.atoms, cfg.n, cfg.seed, nullptr);
  const ermlab::EmpiricalObjective obj =
      ermlab::make_empirical_objective(loss, std::move(sample));
  const ermlab::CertificationReport report =
      ermlab::certify_assumption1(obj, cfg.trials, cfg.seed);

  std::ostringstream body;
  body << "check,value,threshold,pass\n";
  body << "strong_convexity," << ermlab::format_float(report.worst_strong_convexity)
       << "," << ermlab::format_float(ermlab::kCertifyGapTol) << ","
       << (report.strong_convexity_ok ? 1 : 0) << "\n";
  body << "empirical_lipschitz,"
       << ermlab::format_float(report.worst_empirical_lipschitz) << ","
       << ermlab::format_float(ermlab::kCertifyGapTol) << ","
       << (report.empirical_lipschitz_ok ? 1 : 0) << "\n";
  body << "range," << ermlab::format_float(report.worst_range) << ","
       << ermlab::format_float(report.range_bound + ermlab::kCertifyGapTol)
       << "," << (report.range_ok ? 1 : 0) << "\n";
  body << "exp_concavity," << ermlab::format_float(report.worst_exp_concavity)
       << "," << ermlab::format_float(ermlab::kCertifyExpConcavityTol) << ","
       << (report.exp_concavity_ok ? 1 : 0) << "\n";
  write_output(args.out_dir, "certify.csv", "", body.str());

  if (args.check && !report.all_ok()) {
    std::cerr << "certification failed on at least one check\n";
    return kExitCheck;
  }
  return kExitOk;
}

int run_solve(const CommonArgs& args) {
  const ermlab::SolveConfig cfg = ermlab::parse_solve_config(load_config(args));
  const ermlab::LossModel loss = cfg.loss_kind == ermlab::LossKind::kSquared
                                     ? ermlab::make_squared_loss(cfg.radius_r)
                                     : ermlab::make_logistic_loss(cfg.ball_b,
                                                                  cfg.radius_r);
  std::vector<ermlab::Datum> sample =
      draw_sample(loss, cfg.dim, cfg.atoms, cfg.n, cfg.seed, nullptr);
  const ermlab::EmpiricalObjective obj =
      ermlab::make_empirical_objective(loss, std::move(sample));
  const ermlab::Ball domain(ermlab::Vec::Zero(cfg.dim), loss.domain_radius);
  const double tol =
      cfg.tol > 0.0 ? cfg.tol
                    : ermlab::derive_erm_tolerance(loss, cfg.dim, cfg.n,
                                                   loss.domain_radius);
  const ermlab::ErmResult result =
      ermlab::minimize_empirical(obj, domain, tol, cfg.max_iters);

  std::ostringstream body;
  body << "objective,gradient_map_norm,iterations,converged,certified_gap";
  for (int j = 0; j < cfg.dim; ++j) body << ",w" << j;
  body << "\n";
  body << ermlab::format_float(result.objective) << ","
       << ermlab::format_float(result.gradient_map_norm) << ","
       << result.iterations << "," << (result.converged ? 1 : 0) << ","
       << ermlab::format_float(result.certified_gap);
  for (int j = 0; j < cfg.dim; ++j)
    body << "," << ermlab::format_float(result.w_hat[j]);
  body << "\n";
  write_output(args.out_dir, "solve.csv", "", body.str());
  return kExitOk;
}

int run_cover(const CommonArgs& args) {
  const ermlab::CoverConfig cfg = ermlab::parse_cover_config(load_config(args));

  ermlab::PsdSeminorm h = ermlab::build_seminorm(
      ermlab::Mat::Identity(cfg.dim, cfg.dim));
  if (cfg.n > 0) {
    const ermlab::LossModel loss =
        cfg.loss_kind == ermlab::LossKind::kSquared
            ? ermlab::make_squared_loss(cfg.radius_r)
            : ermlab::make_logistic_loss(cfg.ball_b, cfg.radius_r);
    std::vector<ermlab::Datum> sample =
        draw_sample(loss, cfg.dim, cfg.atoms, cfg.n, cfg.seed, nullptr);
    h = ermlab::build_seminorm(loss.build_h(sample));
  }

  const ermlab::Ball ambient(ermlab::Vec::Zero(cfg.dim), cfg.ball);
  const ermlab::Annulus region(ambient, ermlab::Vec::Zero(cfg.dim), h, 0.0,
                               cfg.r);
  const ermlab::SeminormNet net =
      ermlab::cover_annulus(region, cfg.u, cfg.seed);

  std::ostringstream body;
  body << "# points=" << net.points.size()
       << " cardinality_bound=" << ermlab::format_float(net.certificate)
       << "\n";
  body << "index";
  for (int j = 0; j < cfg.dim; ++j) body << ",x" << j;
  body << "\n";
  for (std::size_t i = 0; i < net.points.size(); ++i) {
    body << i;
    for (int j = 0; j < cfg.dim; ++j)
      body << "," << ermlab::format_float(net.points[i][j]);
    body << "\n";
  }
  write_output(args.out_dir, "cover.csv", "", body.str());

  if (args.check) {
    // Rejection-sample W[0, r] and verify the covering radius.
    ermlab::Rng rng(ermlab::derive_seed({cfg.seed, 0xC0EBULL}));
    int accepted = 0;
    long attempts = 0;
    while (accepted < 10000 && attempts < 4000000) {
      ++attempts;
      const ermlab::Vec w = rng.uniform_in_ball(ambient.center, ambient.radius);
      if (h.seminorm(w) > cfg.r) continue;
      ++accepted;
      if (ermlab::net_distance(net, h, w) > cfg.u + 1e-8) {
        std::cerr << "coverage violation at sampled point\n";
        return kExitCheck;
      }
    }
    const double bound = std::pow(1.0 + 2.0 * cfg.r / cfg.u, h.rank());
    if (static_cast<double>(net.points.size()) > std::min(bound, net.certificate)) {
      std::cerr << "cardinality bound violated\n";
      return kExitCheck;
    }
  }
  return kExitOk;
}

int run_expmoment(const CommonArgs& args) {
  const ermlab::ExpMomentConfig cfg =
      ermlab::parse_expmoment_config(load_config(args));
  const ermlab::LossModel loss = cfg.loss_kind == ermlab::LossKind::kSquared
                                     ? ermlab::make_squared_loss(cfg.radius_r)
                                     : ermlab::make_logistic_loss(cfg.ball_b,
                                                                  cfg.radius_r);
  const int threads = resolve_threads(0);

  std::ostringstream body;
  body << "d,n,lambda,log_moment,paper_bound_log,pass\n";
  bool all_pass = true;
  for (int d : cfg.dims) {
    const ermlab::Ball domain(ermlab::Vec::Zero(d), loss.domain_radius);
    for (int n : cfg.sample_sizes) {
      const std::uint64_t seed = ermlab::derive_seed(
          {cfg.seed, static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(n)});
      std::vector<ermlab::Datum> sample =
          draw_sample(loss, d, cfg.atoms, n, seed, nullptr);
      ermlab::EmpiricalObjective obj =
          ermlab::make_empirical_objective(loss, std::move(sample));
      const ermlab::Vec w_star =
          ermlab::minimize_population(
              loss,
              ermlab::DiscreteDistribution(
                  obj.sample,
                  ermlab::Vec::Constant(n, 1.0 / static_cast<double>(n))),
              domain, 1e-7)
              .w_hat;
      const std::vector<ermlab::Vec> grid = ermlab::grid_eval_set(
          domain, d == 1 ? cfg.grid_1d : cfg.grid_2d);
      const ermlab::OffsetProcessInstance inst(std::move(obj), w_star, domain,
                                               grid);
      const ermlab::ExpMomentResult res =
          ermlab::exp_moment_exhaustive(inst, threads);
      const double bound_log = ermlab::exp_moment_bound_log(d);
      const bool pass = res.log_moment <= bound_log;
      all_pass = all_pass && pass;
      body << d << "," << n << "," << ermlab::format_float(inst.lambda()) << ","
           << ermlab::format_float(res.log_moment) << ","
           << ermlab::format_float(bound_log) << "," << (pass ? 1 : 0) << "\n";
    }
  }
  write_output(args.out_dir, "expmoment.csv", "", body.str());
  if (args.check && !all_pass) return kExitCheck;
  return kExitOk;
}

int run_risk_sweep(const CommonArgs& args) {
  const ermlab::ExperimentConfig cfg =
      ermlab::parse_sweep_config(load_config(args));
  const int threads = resolve_threads(args.threads);
  const ermlab::RiskSweepResult result = ermlab::run_sweep(cfg, threads);
  ermlab::emit_reports(result, args.out_dir);
  if (args.check) {
    const std::vector<std::string> violations =
        ermlab::check_sweep_properties(result);
    if (!violations.empty()) {
      for (const std::string& v : violations) std::cerr << "check: " << v << "\n";
      return kExitCheck;
    }
  }
  return kExitOk;
}

int run_report(const CommonArgs& args, const std::string& trials_path) {
  const ermlab::ExperimentConfig cfg =
      ermlab::parse_sweep_config(load_config(args));
  const std::vector<ermlab::TrialRecord> trials =
      ermlab::read_trials_csv(trials_path);
  const ermlab::RiskSweepResult result = ermlab::rebuild_result(cfg, trials);
  ermlab::emit_reports(result, args.out_dir);
  if (args.check) {
    const std::vector<std::string> violations =
        ermlab::check_sweep_properties(result);
    if (!violations.empty()) {
      for (const std::string& v : violations) std::cerr << "check: " << v << "\n";
      return kExitCheck;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ermlab: excess-risk experiments for exp-concave losses"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string trials_path;

  auto add_common = [&](CLI::App* cmd, bool needs_check = true) {
    cmd->add_option("-c,--config", args.config_path,
                    "flat key=value config file")
        ->required();
    cmd->add_option("-o,--out", args.out_dir, "output directory (default '.')");
    cmd->add_option("-s,--set", args.overrides,
                    "override config entries, e.g. --set trials=500");
    cmd->add_option("-t,--threads", args.threads,
                    "worker threads (default: ERMLAB_THREADS or all cores)");
    if (needs_check)
      cmd->add_flag("--check", args.check,
                    "verify the module properties of the fresh outputs; "
                    "exit 4 on violation");
  };

  CLI::App* certify = app.add_subcommand(
      "certify",
      "check the loss-class assumptions on one generated sample\n"
      "config keys: loss (required), R=1, B=1, d (required), n (required),\n"
      "trials=200, atoms=40, seed=1");
  add_common(certify);

  CLI::App* solve = app.add_subcommand(
      "solve",
      "run the projected-gradient ERM solver on one generated sample\n"
      "config keys: loss, R=1, B=1, d, n, atoms=40, seed=1, tol=derived,\n"
      "max_iters=50000");
  add_common(solve, false);

  CLI::App* cover = app.add_subcommand(
      "cover",
      "build a seminorm covering net of W[0, r]\n"
      "config keys: d, r, u (all required), ball=max(r,1), seed=1;\n"
      "n>0 builds H from a generated sample (loss, R=1, B=1, atoms=40),\n"
      "n=0 uses the identity seminorm");
  add_common(cover);

  CLI::App* expmoment = app.add_subcommand(
      "expmoment",
      "exhaustive offset-process exponential moments (one CSV row per d,n)\n"
      "config keys: loss, R=1, B=1, ds (required, entries in {1,2}),\n"
      "ns (required, entries <= 16), grid_1d=2001, grid_2d=81, atoms=40, seed=1");
  add_common(expmoment);

  CLI::App* sweep = app.add_subcommand(
      "risk-sweep",
      "full excess-risk quantile sweep over the (d, n) grid\n"
      "config keys: loss, R=1, B=1, dims, ns, trials, deltas (required),\n"
      "atoms=40, seed=1 (or explicit distribution_seed / trial_seed),\n"
      "bound_constant=1");
  add_common(sweep);

  CLI::App* report = app.add_subcommand(
      "report", "recompute summary/rates/plotdata from a stored trials.csv");
  add_common(report);
  report->add_option("--trials-file", trials_path, "path to trials.csv")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (certify->parsed()) return run_certify(args);
    if (solve->parsed()) return run_solve(args);
    if (cover->parsed()) return run_cover(args);
    if (expmoment->parsed()) return run_expmoment(args);
    if (sweep->parsed()) return run_risk_sweep(args);
    if (report->parsed()) return run_report(args, trials_path);
  } catch (const ermlab::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const ermlab::IoError& err) {
    std::cerr << "io error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const ermlab::NotConverged& err) {
    std::cerr << "numerical failure: " << err.what() << "\n";
    return kExitNumerical;
  } catch (const ermlab::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
