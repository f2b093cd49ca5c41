#include <brwp/config.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <brwp/errors.hpp>
#include <brwp/io.hpp>

namespace brwp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// line > 0 points into the config text; kOverrideLine marks a command-line
// override; 0 means the problem has no single source location.
constexpr int kOverrideLine = -1;

struct RawEntry {
  std::string value;
  int line = 0;
};

struct ErrorList {
  std::string origin;
  std::vector<std::string> messages;
  void add(int line, const std::string& msg) {
    std::ostringstream os;
    os << origin;
    if (line > 0)
      os << ':' << line;
    else if (line == kOverrideLine)
      os << ":<override>";
    os << ": " << msg;
    messages.push_back(os.str());
  }
};

// Collects `section.key` entries; top-level keys have no dot.
std::map<std::string, RawEntry> parse_raw(const std::string& text,
                                          ErrorList& errors) {
  std::map<std::string, RawEntry> entries;
  std::istringstream is(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) {
        errors.add(lineno, "malformed section header '" + t + "'");
        continue;
      }
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      errors.add(lineno, "expected 'key = value', got '" + t + "'");
      continue;
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      errors.add(lineno, "empty key");
      continue;
    }
    const std::string full = section.empty() ? key : section + "." + key;
    if (entries.count(full)) {
      errors.add(lineno, "duplicate key '" + full + "'");
      continue;
    }
    entries[full] = RawEntry{value, lineno};
  }
  return entries;
}

void apply_overrides(std::map<std::string, RawEntry>& entries,
                     const std::vector<std::string>& overrides,
                     ErrorList& errors) {
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) {
      errors.add(kOverrideLine, "override must be key=value, got '" + ov + "'");
      continue;
    }
    entries[trim(ov.substr(0, eq))] =
        RawEntry{trim(ov.substr(eq + 1)), kOverrideLine};
  }
}

// Typed view over the raw entries that records every failure.
class Reader {
 public:
  Reader(std::map<std::string, RawEntry> entries, ErrorList& errors)
      : entries_(std::move(entries)), errors_(&errors) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  void require(const std::string& key) {
    if (!has(key)) errors_->add(0, "missing required key '" + key + "'");
  }

  void read_int(const std::string& key, int& out) {
    read_arith<int>(key, out, "integer");
  }
  void read_u64(const std::string& key, std::uint64_t& out) {
    read_arith<std::uint64_t>(key, out, "unsigned integer");
  }
  void read_double(const std::string& key, double& out) {
    read_arith<double>(key, out, "number");
  }
  void read_string(const std::string& key, std::string& out) {
    if (const RawEntry* e = take(key)) out = e->value;
  }

  template <typename Enum>
  void read_enum(const std::string& key, Enum& out,
                 const std::vector<std::pair<std::string, Enum>>& table) {
    const RawEntry* e = take(key);
    if (!e) return;
    for (const auto& [name, value] : table)
      if (e->value == name) {
        out = value;
        return;
      }
    std::string allowed;
    for (const auto& [name, value] : table) {
      if (!allowed.empty()) allowed += ", ";
      allowed += name;
    }
    errors_->add(e->line, "key '" + key + "': unknown value '" + e->value +
                              "' (allowed: " + allowed + ")");
  }

  // Every entry not consumed by a read_* call is an unknown key.
  void report_unknown() {
    for (const auto& [key, entry] : entries_)
      if (!consumed_.count(key))
        errors_->add(entry.line, "unknown key '" + key + "'");
  }

 private:
  const RawEntry* take(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    consumed_.insert(key);
    return &it->second;
  }

  template <typename T>
  void read_arith(const std::string& key, T& out, const char* kind) {
    const RawEntry* e = take(key);
    if (!e) return;
    T v{};
    const char* b = e->value.data();
    const char* n = b + e->value.size();
    const auto [ptr, ec] = std::from_chars(b, n, v);
    if (ec != std::errc{} || ptr != n) {
      errors_->add(e->line, "key '" + key + "': expected " +
                                std::string(kind) + ", got '" + e->value +
                                "'");
      return;
    }
    out = v;
  }

  std::map<std::string, RawEntry> entries_;
  std::set<std::string> consumed_;
  ErrorList* errors_;
};

const std::vector<std::pair<std::string, ExperimentKind>>& experiment_table() {
  static const std::vector<std::pair<std::string, ExperimentKind>> t = {
      {"mixture", ExperimentKind::mixture},
      {"logistic", ExperimentKind::logistic},
      {"l12tv_denoise", ExperimentKind::l12tv_denoise},
      {"cs_hpd", ExperimentKind::cs_hpd},
      {"gaussian_sanity", ExperimentKind::gaussian_sanity},
      {"kernel_validation", ExperimentKind::kernel_validation},
  };
  return t;
}

const std::vector<std::pair<std::string, SamplerKind>>& sampler_table() {
  static const std::vector<std::pair<std::string, SamplerKind>> t = {
      {"brwp", SamplerKind::brwp},
      {"myula", SamplerKind::myula},
  };
  return t;
}

// `general` needs programmatic callbacks, so config files cannot request it.
const std::vector<std::pair<std::string, KernelVariant>>& kernel_table() {
  static const std::vector<std::pair<std::string, KernelVariant>> t = {
      {"delta", KernelVariant::delta},
      {"gaussian", KernelVariant::gaussian},
      {"separable", KernelVariant::separable},
  };
  return t;
}

}  // namespace

const char* to_string(ExperimentKind k) {
  for (const auto& [name, value] : experiment_table())
    if (value == k) return name.c_str();
  return "?";
}

const char* to_string(SamplerKind k) {
  for (const auto& [name, value] : sampler_table())
    if (value == k) return name.c_str();
  return "?";
}

const char* to_string(KernelVariant k) {
  switch (k) {
    case KernelVariant::delta:
      return "delta";
    case KernelVariant::gaussian:
      return "gaussian";
    case KernelVariant::separable:
      return "separable";
    case KernelVariant::general:
      return "general";
  }
  return "?";
}

std::vector<std::string> config_problems(const ExperimentConfig& cfg) {
  std::vector<std::string> out;
  const auto bad = [&out](const std::string& msg) { out.push_back(msg); };

  if (!(cfg.h > 0.0)) bad("h must be > 0");
  if (!(cfg.beta > 0.0)) bad("beta must be > 0");
  if (cfg.lambda < 0.0) bad("lambda must be >= 0");
  if (cfg.dims < 1) bad("dims must be >= 1");
  if (cfg.n_particles < 1) bad("n_particles must be >= 1");
  if (cfg.n_iters < 0) bad("n_iters must be >= 0");
  if (!(cfg.init_spread > 0.0)) bad("init_spread must be > 0");
  if (cfg.output_dir.empty()) bad("output_dir must not be empty");

  if (cfg.mixture.n_centers < 1) bad("mixture.n_centers must be >= 1");
  if (!(cfg.mixture.sigma > 0.0)) bad("mixture.sigma must be > 0");
  if (!(cfg.mixture.box > 0.0)) bad("mixture.box must be > 0");
  if (cfg.logistic.n_data < 1) bad("logistic.n_data must be >= 1");
  if (cfg.imaging.rows < 2 || cfg.imaging.cols < 2)
    bad("imaging.rows and imaging.cols must be >= 2");
  if (cfg.imaging.gamma < 0.0) bad("imaging.gamma must be >= 0");
  if (cfg.imaging.measurement_variance < 0.0)
    bad("imaging.measurement_variance must be >= 0");
  if (!(cfg.metrics.grid_lo < cfg.metrics.grid_hi))
    bad("metrics.grid_lo must be below metrics.grid_hi");
  if (cfg.metrics.grid_points < 2) bad("metrics.grid_points must be >= 2");
  if (!(cfg.metrics.kde_bandwidth > 0.0))
    bad("metrics.kde_bandwidth must be > 0");

  if (cfg.experiment == ExperimentKind::l12tv_denoise &&
      cfg.sampler == SamplerKind::myula)
    bad("l12tv_denoise supports only sampler = brwp");
  if (cfg.experiment == ExperimentKind::logistic && cfg.dims % 4 != 0)
    bad("logistic requires dims divisible by 4");
  if (cfg.experiment == ExperimentKind::cs_hpd &&
      (cfg.imaging.rows * cfg.imaging.cols) % 4 != 0)
    bad("cs_hpd requires an image size divisible by 4");
  if (cfg.kernel_variant == KernelVariant::general)
    bad("kernel_variant = general requires programmatic callbacks");
  return out;
}

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin,
                                   const std::vector<std::string>& overrides) {
  ErrorList errors{origin, {}};
  auto entries = parse_raw(text, errors);
  apply_overrides(entries, overrides, errors);
  Reader r(std::move(entries), errors);

  ExperimentConfig cfg;
  r.require("experiment");
  r.read_enum("experiment", cfg.experiment, experiment_table());

  if (errors.messages.empty()) {
    const bool sampling = cfg.experiment != ExperimentKind::kernel_validation;
    const bool imaging = cfg.experiment == ExperimentKind::l12tv_denoise ||
                         cfg.experiment == ExperimentKind::cs_hpd;
    r.require("seed");
    if (sampling) {
      r.require("n_particles");
      r.require("n_iters");
      r.require("h");
      if (!imaging) r.require("dims");
    }
    if (cfg.experiment == ExperimentKind::mixture || imaging)
      r.require("lambda");
  }

  r.read_enum("sampler", cfg.sampler, sampler_table());
  r.read_enum("kernel_variant", cfg.kernel_variant, kernel_table());
  r.read_int("dims", cfg.dims);
  r.read_int("n_particles", cfg.n_particles);
  r.read_int("n_iters", cfg.n_iters);
  r.read_double("h", cfg.h);
  r.read_double("beta", cfg.beta);
  r.read_double("lambda", cfg.lambda);
  r.read_double("init_spread", cfg.init_spread);
  r.read_u64("seed", cfg.seed);
  r.read_string("output_dir", cfg.output_dir);
  r.read_int("mixture.n_centers", cfg.mixture.n_centers);
  r.read_double("mixture.sigma", cfg.mixture.sigma);
  r.read_double("mixture.box", cfg.mixture.box);
  r.read_int("logistic.n_data", cfg.logistic.n_data);
  r.read_int("imaging.rows", cfg.imaging.rows);
  r.read_int("imaging.cols", cfg.imaging.cols);
  r.read_double("imaging.gamma", cfg.imaging.gamma);
  r.read_double("imaging.tau", cfg.imaging.tau);
  r.read_double("imaging.measurement_variance",
                cfg.imaging.measurement_variance);
  r.read_double("metrics.grid_lo", cfg.metrics.grid_lo);
  r.read_double("metrics.grid_hi", cfg.metrics.grid_hi);
  r.read_int("metrics.grid_points", cfg.metrics.grid_points);
  r.read_double("metrics.kde_bandwidth", cfg.metrics.kde_bandwidth);
  r.report_unknown();

  // Imaging experiments derive the state dimension from the image shape.
  if (cfg.experiment == ExperimentKind::l12tv_denoise ||
      cfg.experiment == ExperimentKind::cs_hpd)
    cfg.dims = cfg.imaging.rows * cfg.imaging.cols;

  if (errors.messages.empty())
    for (const std::string& msg : config_problems(cfg))
      errors.add(0, msg);

  if (!errors.messages.empty()) {
    std::string joined;
    for (const std::string& msg : errors.messages) {
      if (!joined.empty()) joined += '\n';
      joined += msg;
    }
    throw config_error(joined);
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path,
                                   const std::vector<std::string>& overrides) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str(), path, overrides);
}

std::string canonical_config_text(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "experiment = " << to_string(cfg.experiment) << '\n'
     << "sampler = " << to_string(cfg.sampler) << '\n'
     << "kernel_variant = " << to_string(cfg.kernel_variant) << '\n'
     << "dims = " << cfg.dims << '\n'
     << "n_particles = " << cfg.n_particles << '\n'
     << "n_iters = " << cfg.n_iters << '\n'
     << "h = " << format_shortest(cfg.h) << '\n'
     << "beta = " << format_shortest(cfg.beta) << '\n'
     << "lambda = " << format_shortest(cfg.lambda) << '\n'
     << "init_spread = " << format_shortest(cfg.init_spread) << '\n'
     << "seed = " << cfg.seed << '\n'
     << "output_dir = " << cfg.output_dir << '\n'
     << "[mixture]\n"
     << "n_centers = " << cfg.mixture.n_centers << '\n'
     << "sigma = " << format_shortest(cfg.mixture.sigma) << '\n'
     << "box = " << format_shortest(cfg.mixture.box) << '\n'
     << "[logistic]\n"
     << "n_data = " << cfg.logistic.n_data << '\n'
     << "[imaging]\n"
     << "rows = " << cfg.imaging.rows << '\n'
     << "cols = " << cfg.imaging.cols << '\n'
     << "gamma = " << format_shortest(cfg.imaging.gamma) << '\n'
     << "tau = " << format_shortest(cfg.imaging.tau) << '\n'
     << "measurement_variance = "
     << format_shortest(cfg.imaging.measurement_variance) << '\n'
     << "[metrics]\n"
     << "grid_lo = " << format_shortest(cfg.metrics.grid_lo) << '\n'
     << "grid_hi = " << format_shortest(cfg.metrics.grid_hi) << '\n'
     << "grid_points = " << cfg.metrics.grid_points << '\n'
     << "kde_bandwidth = " << format_shortest(cfg.metrics.kde_bandwidth)
     << '\n';
  return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string text = canonical_config_text(cfg);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

}  // namespace brwp
