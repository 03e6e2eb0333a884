#include "ermlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "ermlab/rng.hpp"

namespace ermlab {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

long long parse_integer(const KeyValueFile::Entry& e) {
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(e.value, &used);
  } catch (const std::exception&) {
    throw ParseError("expected integer for key '" + e.key + "', got '" +
                         e.value + "'",
                     e.line);
  }
  if (used != e.value.size())
    throw ParseError("trailing characters in integer for key '" + e.key + "'",
                     e.line);
  return value;
}

double parse_real(const KeyValueFile::Entry& e) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(e.value, &used);
  } catch (const std::exception&) {
    throw ParseError("expected number for key '" + e.key + "', got '" +
                         e.value + "'",
                     e.line);
  }
  if (used != e.value.size())
    throw ParseError("trailing characters in number for key '" + e.key + "'",
                     e.line);
  return value;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) items.push_back(trim(item));
  return items;
}

std::vector<int> parse_int_list(const KeyValueFile::Entry& e) {
  std::vector<int> out;
  for (const std::string& item : split_list(e.value)) {
    KeyValueFile::Entry piece{e.key, item, e.line};
    out.push_back(static_cast<int>(parse_integer(piece)));
  }
  if (out.empty()) throw ParseError("empty list for key '" + e.key + "'", e.line);
  return out;
}

std::vector<double> parse_real_list(const KeyValueFile::Entry& e) {
  std::vector<double> out;
  for (const std::string& item : split_list(e.value)) {
    KeyValueFile::Entry piece{e.key, item, e.line};
    out.push_back(parse_real(piece));
  }
  if (out.empty()) throw ParseError("empty list for key '" + e.key + "'", e.line);
  return out;
}

LossKind parse_loss_kind(const KeyValueFile::Entry& e) {
  if (e.value == "squared") return LossKind::kSquared;
  if (e.value == "logistic") return LossKind::kLogistic;
  throw RangeError("loss must be 'squared' or 'logistic', got '" + e.value + "'",
                   e.line);
}

void require_known_keys(const KeyValueFile& file,
                        const std::set<std::string>& allowed) {
  for (const auto& e : file.entries)
    if (allowed.find(e.key) == allowed.end())
      throw UnknownKey("unknown key '" + e.key + "'", e.line);
}

std::uint64_t parse_seed(const KeyValueFile::Entry& e) {
  std::size_t used = 0;
  std::uint64_t value = 0;
  try {
    value = std::stoull(e.value, &used);
  } catch (const std::exception&) {
    throw ParseError("expected unsigned integer for key '" + e.key + "'",
                     e.line);
  }
  if (used != e.value.size())
    throw ParseError("trailing characters in seed for key '" + e.key + "'",
                     e.line);
  return value;
}

// (distribution_seed, trial_seed) derived from a single user seed.
std::pair<std::uint64_t, std::uint64_t> split_seed(std::uint64_t seed) {
  return {derive_seed({seed, 0xD157ULL}), derive_seed({seed, 0x7219ULL})};
}

}  // namespace

const KeyValueFile::Entry* KeyValueFile::find(const std::string& key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

KeyValueFile parse_key_value_text(const std::string& text) {
  KeyValueFile file;
  std::stringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key=value", line_no);
    KeyValueFile::Entry entry;
    entry.key = trim(line.substr(0, eq));
    entry.value = trim(line.substr(eq + 1));
    entry.line = line_no;
    if (entry.key.empty()) throw ParseError("empty key", line_no);
    if (entry.value.empty())
      throw ParseError("empty value for key '" + entry.key + "'", line_no);
    if (file.has(entry.key))
      throw ParseError("duplicate key '" + entry.key + "'", line_no);
    file.entries.push_back(std::move(entry));
  }
  return file;
}

KeyValueFile parse_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_key_value_text(buffer.str());
}

void apply_overrides(KeyValueFile& file,
                     const std::vector<std::string>& assignments) {
  for (const std::string& a : assignments) {
    const std::size_t eq = a.find('=');
    if (eq == std::string::npos)
      throw ParseError("override '" + a + "' is not key=value");
    const std::string key = trim(a.substr(0, eq));
    const std::string value = trim(a.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError("override '" + a + "' is not key=value");
    bool replaced = false;
    for (auto& e : file.entries)
      if (e.key == key) {
        e.value = value;
        e.line = 0;
        replaced = true;
        break;
      }
    if (!replaced) file.entries.push_back({key, value, 0});
  }
}

ExperimentConfig parse_sweep_config(const KeyValueFile& file) {
  require_known_keys(file, {"loss", "R", "B", "dims", "ns", "trials", "deltas",
                            "seed", "distribution_seed", "trial_seed", "atoms",
                            "bound_constant"});
  ExperimentConfig cfg;
  const auto* loss = file.find("loss");
  if (!loss) throw RangeError("missing required key 'loss'");
  cfg.loss_kind = parse_loss_kind(*loss);
  if (const auto* e = file.find("R")) cfg.radius_r = parse_real(*e);
  if (const auto* e = file.find("B")) cfg.ball_b = parse_real(*e);
  const auto* dims = file.find("dims");
  if (!dims) throw RangeError("missing required key 'dims'");
  cfg.dims = parse_int_list(*dims);
  const auto* ns = file.find("ns");
  if (!ns) throw RangeError("missing required key 'ns'");
  cfg.sample_sizes = parse_int_list(*ns);
  const auto* trials = file.find("trials");
  if (!trials) throw RangeError("missing required key 'trials'");
  cfg.trials = static_cast<int>(parse_integer(*trials));
  const auto* deltas = file.find("deltas");
  if (!deltas) throw RangeError("missing required key 'deltas'");
  cfg.deltas = parse_real_list(*deltas);
  if (const auto* e = file.find("atoms"))
    cfg.atoms = static_cast<int>(parse_integer(*e));
  if (const auto* e = file.find("bound_constant"))
    cfg.bound_constant = parse_real(*e);

  std::uint64_t base_seed = 1;
  if (const auto* e = file.find("seed")) base_seed = parse_seed(*e);
  auto [dist_seed, trial_seed] = split_seed(base_seed);
  cfg.distribution_seed = dist_seed;
  cfg.trial_seed = trial_seed;
  if (const auto* e = file.find("distribution_seed"))
    cfg.distribution_seed = parse_seed(*e);
  if (const auto* e = file.find("trial_seed")) cfg.trial_seed = parse_seed(*e);

  cfg.validate();
  return cfg;
}

CertifyConfig parse_certify_config(const KeyValueFile& file) {
  require_known_keys(file, {"loss", "R", "B", "d", "n", "trials", "atoms", "seed"});
  CertifyConfig cfg;
  const auto* loss = file.find("loss");
  if (!loss) throw RangeError("missing required key 'loss'");
  cfg.loss_kind = parse_loss_kind(*loss);
  if (const auto* e = file.find("R")) cfg.radius_r = parse_real(*e);
  if (const auto* e = file.find("B")) cfg.ball_b = parse_real(*e);
  const auto* d = file.find("d");
  if (!d) throw RangeError("missing required key 'd'");
  cfg.dim = static_cast<int>(parse_integer(*d));
  const auto* n = file.find("n");
  if (!n) throw RangeError("missing required key 'n'");
  cfg.n = static_cast<int>(parse_integer(*n));
  if (const auto* e = file.find("trials"))
    cfg.trials = static_cast<int>(parse_integer(*e));
  if (const auto* e = file.find("atoms"))
    cfg.atoms = static_cast<int>(parse_integer(*e));
  if (const auto* e = file.find("seed")) cfg.seed = parse_seed(*e);
  if (cfg.dim < 1) throw RangeError("d must be positive");
  if (cfg.n < 1) throw RangeError("n must be positive");
  if (cfg.trials < 1) throw RangeError("trials must be positive");
  return cfg;
}

SolveConfig parse_solve_config(const KeyValueFile& file) {
  require_known_keys(file, {"loss", "R", "B", "d", "n", "atoms", "seed", "tol",
                            "max_iters"});
  SolveConfig cfg;
  const auto* loss = file.find("loss");
  if (!loss) throw RangeError("missing required key 'loss'");
  cfg.loss_kind = parse_loss_kind(*loss);
  if (const auto* e = file.find("R")) cfg.radius_r = parse_real(*e);
  if (const auto* e = file.find("B")) cfg.ball_b = parse_real(*e);
  const auto* d = file.find("d");
  if (!d) throw RangeError("missing required key 'd'");
  cfg.dim = static_cast<int>(parse_integer(*d));
  const auto* n = file.find("n");
  if (!n) throw RangeError("missing required key 'n'");
  cfg.n = static_cast<int>(parse_integer(*n));
  if (const auto* e = file.find("atoms"))
    cfg.atoms = static_cast<int>(parse_integer(*e));
  if (const auto* e = file.find("seed")) cfg.seed = parse_seed(*e);
  if (const auto* e = file.find("tol")) cfg.tol = parse_real(*e);
  if (const auto* e = file.find("max_iters")) cfg.max_iters = parse_integer(*e);
  if (cfg.dim < 1) throw RangeError("d must be positive");
  if (cfg.n < 1) throw RangeError("n must be positive");
  return cfg;
}

CoverConfig parse_cover_config(const KeyValueFile& file) {
  require_known_keys(file,
                     {"d", "r", "u", "ball", "seed", "loss", "R", "B", "n", "atoms"});
  CoverConfig cfg;
  const auto* d = file.find("d");
  if (!d) throw RangeError("missing required key 'd'");
  cfg.dim = static_cast<int>(parse_integer(*d));
  const auto* r = file.find("r");
  if (!r) throw RangeError("missing required key 'r'");
  cfg.r = parse_real(*r);
  const auto* u = file.find("u");
  if (!u) throw RangeError("missing required key 'u'");
  cfg.u = parse_real(*u);
  cfg.ball = std::max(cfg.r, 1.0);
  if (const auto* e = file.find("ball")) cfg.ball = parse_real(*e);
  if (const auto* e = file.find("seed")) cfg.seed = parse_seed(*e);
  if (const auto* e = file.find("loss")) cfg.loss_kind = parse_loss_kind(*e);
  if (const auto* e = file.find("R")) cfg.radius_r = parse_real(*e);
  if (const auto* e = file.find("B")) cfg.ball_b = parse_real(*e);
  if (const auto* e = file.find("n")) cfg.n = static_cast<int>(parse_integer(*e));
  if (const auto* e = file.find("atoms"))
    cfg.atoms = static_cast<int>(parse_integer(*e));
  if (cfg.dim < 1) throw RangeError("d must be positive");
  if (cfg.r <= 0.0) throw RangeError("r must be positive");
  if (cfg.u <= 0.0 || cfg.u > cfg.r) throw RangeError("need 0 < u <= r");
  return cfg;
}

ExpMomentConfig parse_expmoment_config(const KeyValueFile& file) {
  require_known_keys(file, {"loss", "R", "B", "ds", "ns", "grid_1d", "grid_2d",
                            "atoms", "seed"});
  ExpMomentConfig cfg;
  const auto* loss = file.find("loss");
  if (!loss) throw RangeError("missing required key 'loss'");
  cfg.loss_kind = parse_loss_kind(*loss);
  if (const auto* e = file.find("R")) cfg.radius_r = parse_real(*e);
  if (const auto* e = file.find("B")) cfg.ball_b = parse_real(*e);
  const auto* ds = file.find("ds");
  if (!ds) throw RangeError("missing required key 'ds'");
  cfg.dims = parse_int_list(*ds);
  const auto* ns = file.find("ns");
  if (!ns) throw RangeError("missing required key 'ns'");
  cfg.sample_sizes = parse_int_list(*ns);
  if (const auto* e = file.find("grid_1d"))
    cfg.grid_1d = static_cast<int>(parse_integer(*e));
  if (const auto* e = file.find("grid_2d"))
    cfg.grid_2d = static_cast<int>(parse_integer(*e));
  if (const auto* e = file.find("atoms"))
    cfg.atoms = static_cast<int>(parse_integer(*e));
  if (const auto* e = file.find("seed")) cfg.seed = parse_seed(*e);
  for (int d : cfg.dims)
    if (d < 1 || d > 2) throw RangeError("ds entries must be 1 or 2");
  for (int n : cfg.sample_sizes)
    if (n < 1 || n > 16) throw RangeError("ns entries must be in [1, 16]");
  return cfg;
}

std::string format_float(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string emit_resolved_config(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "loss=" << loss_kind_name(config.loss_kind) << "\n";
  out << "R=" << format_float(config.radius_r) << "\n";
  out << "B=" << format_float(config.ball_b) << "\n";
  out << "dims=";
  for (std::size_t i = 0; i < config.dims.size(); ++i)
    out << (i ? "," : "") << config.dims[i];
  out << "\n";
  out << "ns=";
  for (std::size_t i = 0; i < config.sample_sizes.size(); ++i)
    out << (i ? "," : "") << config.sample_sizes[i];
  out << "\n";
  out << "trials=" << config.trials << "\n";
  out << "deltas=";
  for (std::size_t i = 0; i < config.deltas.size(); ++i)
    out << (i ? "," : "") << format_float(config.deltas[i]);
  out << "\n";
  out << "atoms=" << config.atoms << "\n";
  out << "distribution_seed=" << config.distribution_seed << "\n";
  out << "trial_seed=" << config.trial_seed << "\n";
  out << "bound_constant=" << format_float(config.bound_constant) << "\n";
  return out.str();
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.loss_kind == b.loss_kind && a.radius_r == b.radius_r &&
         a.ball_b == b.ball_b && a.dims == b.dims &&
         a.sample_sizes == b.sample_sizes && a.trials == b.trials &&
         a.deltas == b.deltas && a.atoms == b.atoms &&
         a.distribution_seed == b.distribution_seed &&
         a.trial_seed == b.trial_seed && a.bound_constant == b.bound_constant;
}

std::uint64_t fnv1a_hash(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace ermlab
