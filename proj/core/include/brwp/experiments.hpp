#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include <brwp/config.hpp>
#include <brwp/io.hpp>
#include <brwp/metrics.hpp>
#include <brwp/validation.hpp>

namespace brwp {

// Everything one experiment run produces. During the run metric rows are
// streamed to <output_dir>/metrics.csv one iteration at a time, so a numeric
// abort still leaves every completed iteration on disk; the ensemble
// snapshot, images and the run summary are written afterwards.
struct RunRecord {
  std::uint64_t config_hash = 0;
  std::vector<MetricRow> metrics;
  Eigen::MatrixXd final_ensemble;  // one particle per row
  double wall_seconds = 0.0;
  bool failed = false;             // sampler aborted on a non-finite value
  std::string failure;             // abort message, empty otherwise
  bool validation_failed = false;  // kernel_validation with failing checks
};

// Executes the configured experiment. Output files under cfg.output_dir:
//   metrics.csv     per-iteration rows (schema iter,metric,dim,value)
//   ensemble.csv    final particle matrix
//   record.txt      config hash, status, wall time
//   validation.csv  kernel_validation only
//   *.pgm           imaging experiments only
// Metric rows per experiment:
//   gaussian_sanity  mean_norm, variance per coordinate
//   mixture          kl for the first and last coordinates
//   logistic         l1_rel of the particle mean against the ground truth
//                    (prior weight 3d / (2 pi^2) unless lambda is positive)
//   l12tv_denoise    psnr of the particle mean, dual_linf, noisy_psnr once
//   cs_hpd           psnr plus hpd_eta rows, dim i holding the threshold
//                    for alpha = 0.05 (i + 1)
// Deterministic: identical configs produce byte-identical metrics.csv.
// Throws config_error on an invalid config and io_error when output files
// cannot be written; sampler numeric aborts are reported via `failed`.
RunRecord run_experiment(const ExperimentConfig& cfg);

// Exact target marginal along `dim` for experiments that have one (mixture
// only); throws config_error otherwise.
MarginalCurve experiment_marginal(const ExperimentConfig& cfg, int dim);

}  // namespace brwp
