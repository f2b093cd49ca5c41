#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <brwp/samplers.hpp>

namespace brwp {

enum class ExperimentKind {
  mixture,
  logistic,
  l12tv_denoise,
  cs_hpd,
  gaussian_sanity,
  kernel_validation,
};

enum class SamplerKind { brwp, myula };

// One experiment run, as described by a config file. The file grammar is
// INI-style: `key = value` lines, optional `[section]` headers mapping to
// the nested records below, full-line `#` comments. Unknown keys are
// rejected; every violation is reported with its line number.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::gaussian_sanity;
  SamplerKind sampler = SamplerKind::brwp;
  KernelVariant kernel_variant = KernelVariant::delta;
  int dims = 2;
  int n_particles = 100;
  int n_iters = 100;
  double h = 0.1;
  double beta = 1.0;
  double lambda = 0.0;
  double init_spread = 1.0;
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  struct MixtureSection {
    int n_centers = 4;
    double sigma = 4.0;
    double box = 10.0;  // centers drawn from [-box, box]^d
  } mixture;

  struct LogisticSection {
    int n_data = 100;
  } logistic;

  struct ImagingSection {
    int rows = 32;
    int cols = 32;
    double gamma = 1.0;
    double tau = -1.0;  // negative = power-iteration default, 0 = frozen dual
    double measurement_variance = 0.2;
  } imaging;

  struct MetricsSection {
    double grid_lo = -30.0;
    double grid_hi = 30.0;
    int grid_points = 2001;
    double kde_bandwidth = 0.1;
  } metrics;
};

// Every constraint violation in a programmatically built config, empty when
// valid. parse functions run this after materializing.
std::vector<std::string> config_problems(const ExperimentConfig& cfg);

// Parse config text. `origin` names the source in messages. `overrides` are
// `key=value` or `section.key=value` entries applied after the file, before
// validation. All errors (unknown key, bad value, missing required key,
// range violations) are collected and thrown together as one config_error.
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin,
                                   const std::vector<std::string>& overrides = {});

ExperimentConfig parse_config_file(const std::string& path,
                                   const std::vector<std::string>& overrides = {});

// Deterministic serialization of every field; parsing it back reproduces the
// config. Basis of the config hash.
std::string canonical_config_text(const ExperimentConfig& cfg);

// FNV-1a over the canonical text; stable across platforms.
std::uint64_t config_hash(const ExperimentConfig& cfg);

const char* to_string(ExperimentKind k);
const char* to_string(SamplerKind k);
const char* to_string(KernelVariant k);

}  // namespace brwp
