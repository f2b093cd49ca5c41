// Command line front end. Subcommands:
//   run <config> [--key=value ...]        execute one experiment
//   validate-kernels [--seed N] [--out F] run the kernel score checks
//   marginal <config> --dim K [--out F]   exact target marginal as x,density
// Exit codes: 0 success, 2 config error, 3 runtime failure (numeric abort,
// unwritable output), 4 validation failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <brwp/errors.hpp>
#include <brwp/experiments.hpp>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitValidation = 4;

// Unknown --key=value flags become config overrides; anything else is a
// usage error.
std::vector<std::string> overrides_from(const std::vector<std::string>& extras) {
  std::vector<std::string> overrides;
  overrides.reserve(extras.size());
  for (const std::string& extra : extras) {
    if (extra.rfind("--", 0) != 0 || extra.find('=') == std::string::npos)
      throw brwp::config_error("override must look like --key=value, got '" +
                               extra + "'");
    overrides.push_back(extra.substr(2));
  }
  return overrides;
}

// Last value of every (metric, dim) pair, in first-appearance order.
void print_final_metrics(const brwp::RunRecord& record) {
  std::vector<std::pair<std::string, int>> order;
  for (const brwp::MetricRow& row : record.metrics) {
    const std::pair<std::string, int> key{row.metric, row.dim};
    bool seen = false;
    for (const auto& k : order) seen = seen || k == key;
    if (!seen) order.push_back(key);
  }
  for (const auto& [metric, dim] : order) {
    double value = 0.0;
    for (const brwp::MetricRow& row : record.metrics)
      if (row.metric == metric && row.dim == dim) value = row.value;
    std::cout << "final " << metric;
    if (dim >= 0) std::cout << '[' << dim << ']';
    std::cout << " = " << brwp::format_shortest(value) << '\n';
  }
}

int do_run(const std::string& config_path,
           const std::vector<std::string>& extras) {
  const brwp::ExperimentConfig cfg =
      brwp::parse_config_file(config_path, overrides_from(extras));
  std::cout << "experiment = " << brwp::to_string(cfg.experiment) << '\n';
  std::cout << "sampler = " << brwp::to_string(cfg.sampler) << '\n';
  std::cout << "output_dir = " << cfg.output_dir << '\n';
  std::cout << "config_hash = " << brwp::config_hash(cfg) << '\n';

  const brwp::RunRecord record = brwp::run_experiment(cfg);
  print_final_metrics(record);
  std::cout << "wall_seconds = " << record.wall_seconds << '\n';
  if (record.failed) {
    std::cerr << "numeric abort: " << record.failure << '\n';
    return kExitRuntime;
  }
  if (record.validation_failed) {
    std::cerr << "kernel validation failed, see "
              << cfg.output_dir << "/validation.csv\n";
    return kExitValidation;
  }
  std::cout << "status = ok\n";
  return 0;
}

int do_validate_kernels(std::uint64_t seed, const std::string& out_path) {
  const brwp::ValidationReport report = brwp::validate_kernels(seed);
  if (out_path.empty()) {
    brwp::write_validation_csv(std::cout, report);
  } else {
    std::ofstream os(out_path);
    if (!os)
      throw brwp::io_error("cannot open '" + out_path + "' for writing");
    brwp::write_validation_csv(os, report);
  }
  std::size_t failed = 0;
  for (const brwp::ValidationCheck& check : report.checks)
    failed += check.pass ? 0 : 1;
  if (failed > 0) {
    std::cerr << failed << " of " << report.checks.size()
              << " kernel checks failed\n";
    return kExitValidation;
  }
  std::cerr << "all " << report.checks.size() << " kernel checks passed\n";
  return 0;
}

int do_marginal(const std::string& config_path, int dim,
                const std::string& out_path,
                const std::vector<std::string>& extras) {
  const brwp::ExperimentConfig cfg =
      brwp::parse_config_file(config_path, overrides_from(extras));
  const brwp::MarginalCurve curve = brwp::experiment_marginal(cfg, dim);

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file)
      throw brwp::io_error("cannot open '" + out_path + "' for writing");
  }
  std::ostream& os = out_path.empty() ? std::cout : file;
  os << "x,density\n";
  for (int i = 0; i < curve.grid.n_points; ++i)
    os << brwp::format_shortest(curve.grid.point(i)) << ','
       << brwp::format_shortest(curve.density(i)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interacting particle sampler for nonsmooth targets"};
  app.require_subcommand(1);

  int rc = 0;

  CLI::App* run = app.add_subcommand("run", "execute one experiment config");
  std::string run_config;
  run->add_option("config", run_config, "config file path")->required();
  run->allow_extras();
  run->footer("Unknown --key=value flags override config entries,\n"
              "e.g. --seed=3 or --mixture.sigma=2.");
  run->callback([&] { rc = do_run(run_config, run->remaining()); });

  CLI::App* validate = app.add_subcommand(
      "validate-kernels", "run the kernel score validation checks");
  std::uint64_t seed = 0;
  std::string validate_out;
  validate->add_option("--seed", seed, "seed for the check ensembles");
  validate->add_option("--out", validate_out,
                       "write the report CSV here instead of stdout");
  validate->callback([&] { rc = do_validate_kernels(seed, validate_out); });

  CLI::App* marginal = app.add_subcommand(
      "marginal", "exact target marginal along one coordinate");
  std::string marginal_config;
  std::string marginal_out;
  int dim = 0;
  marginal->add_option("config", marginal_config, "config file path")
      ->required();
  marginal->add_option("--dim", dim, "coordinate index")->required();
  marginal->add_option("--out", marginal_out,
                       "write the curve CSV here instead of stdout");
  marginal->allow_extras();
  marginal->callback([&] {
    rc = do_marginal(marginal_config, dim, marginal_out,
                     marginal->remaining());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  } catch (const brwp::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const brwp::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return rc;
}
