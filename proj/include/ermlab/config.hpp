#ifndef ERMLAB_CONFIG_HPP
#define ERMLAB_CONFIG_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ermlab/sweep.hpp"

namespace ermlab {

// Flat key=value configuration text: one pair per line, `#` comments,
// comma-separated lists. Unknown and duplicate keys are errors.
struct KeyValueFile {
  struct Entry {
    std::string key;
    std::string value;
    int line = 0;
  };
  std::vector<Entry> entries;

  const Entry* find(const std::string& key) const;
  bool has(const std::string& key) const { return find(key) != nullptr; }
};

KeyValueFile parse_key_value_text(const std::string& text);
KeyValueFile parse_key_value_file(const std::string& path);

// Applies CLI `key=value` overrides on top of the parsed file.
void apply_overrides(KeyValueFile& file,
                     const std::vector<std::string>& assignments);

ExperimentConfig parse_sweep_config(const KeyValueFile& file);

struct CertifyConfig {
  LossKind loss_kind = LossKind::kSquared;
  double radius_r = 1.0;
  double ball_b = 1.0;
  int dim = 0;
  int n = 0;
  int trials = 200;
  int atoms = 40;
  std::uint64_t seed = 1;
};
CertifyConfig parse_certify_config(const KeyValueFile& file);

struct SolveConfig {
  LossKind loss_kind = LossKind::kSquared;
  double radius_r = 1.0;
  double ball_b = 1.0;
  int dim = 0;
  int n = 0;
  int atoms = 40;
  std::uint64_t seed = 1;
  double tol = 0.0;  // 0: derive from the 1%-of-statistical-scale rule
  long max_iters = 50000;
};
SolveConfig parse_solve_config(const KeyValueFile& file);

struct CoverConfig {
  int dim = 0;
  double r = 0.0;
  double u = 0.0;
  double ball = 0.0;  // ambient ball radius; defaults to max(r, 1)
  std::uint64_t seed = 1;
  // When n > 0 the seminorm comes from a generated n-point sample of the
  // given loss family; otherwise H is the identity.
  LossKind loss_kind = LossKind::kSquared;
  double radius_r = 1.0;
  double ball_b = 1.0;
  int n = 0;
  int atoms = 40;
};
CoverConfig parse_cover_config(const KeyValueFile& file);

struct ExpMomentConfig {
  LossKind loss_kind = LossKind::kSquared;
  double radius_r = 1.0;
  double ball_b = 1.0;
  std::vector<int> dims;
  std::vector<int> sample_sizes;
  int grid_1d = 2001;
  int grid_2d = 81;
  int atoms = 40;
  std::uint64_t seed = 1;
};
ExpMomentConfig parse_expmoment_config(const KeyValueFile& file);

// Canonical text with every key explicit; parsing it back reproduces the
// config exactly.
std::string emit_resolved_config(const ExperimentConfig& config);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

// 17 significant digits; round-trips any double.
std::string format_float(double value);

std::uint64_t fnv1a_hash(std::string_view text);

}  // namespace ermlab

#endif  // ERMLAB_CONFIG_HPP
