#include <brwp/experiments.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>

#include <brwp/errors.hpp>
#include <brwp/problems.hpp>
#include <brwp/samplers.hpp>
#include <brwp/tv_sampler.hpp>

namespace brwp {

namespace {

void require_valid(const ExperimentConfig& cfg) {
  const std::vector<std::string> problems = config_problems(cfg);
  if (problems.empty()) return;
  std::string joined;
  for (const std::string& p : problems) {
    if (!joined.empty()) joined += '\n';
    joined += p;
  }
  throw config_error(joined);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw io_error("cannot open '" + path.string() + "' for writing");
  return os;
}

// Appends rows to the record and the on-disk CSV; the flush after every
// iteration is what preserves a partial CSV across a numeric abort.
class MetricSink {
 public:
  MetricSink(RunRecord& record, std::ofstream& os)
      : record_(&record), os_(&os) {
    write_metric_header(*os_);
    os_->flush();
  }

  void push(int iter, const std::string& metric, int dim, double value) {
    const MetricRow row{iter, metric, dim, value};
    record_->metrics.push_back(row);
    write_metric_row(*os_, row);
  }

  void end_iteration() { os_->flush(); }

 private:
  RunRecord* record_;
  std::ofstream* os_;
};

SamplerConfig sampler_config(const ExperimentConfig& cfg) {
  SamplerConfig c;
  c.h = cfg.h;
  c.n_particles = cfg.n_particles;
  c.n_iters = cfg.n_iters;
  c.kernel_variant = cfg.kernel_variant;
  c.seed = cfg.seed;
  return c;
}

MixtureSpec mixture_spec_of(const ExperimentConfig& cfg) {
  MixtureSpec spec =
      make_mixture_spec(cfg.mixture.n_centers, cfg.dims, cfg.mixture.sigma,
                        cfg.lambda, cfg.seed, cfg.mixture.box);
  spec.beta = cfg.beta;
  return spec;
}

Grid1D metrics_grid(const ExperimentConfig& cfg) {
  return Grid1D{cfg.metrics.grid_lo, cfg.metrics.grid_hi,
                cfg.metrics.grid_points};
}

// Runs brwp_run or myula_run with the hook and traps the numeric abort so
// the record keeps everything produced before the failure.
void run_particles(const ExperimentConfig& cfg, const TargetSpec& target,
                   const IterationHook& hook, RunRecord& record) {
  const SamplerConfig c = sampler_config(cfg);
  const Ensemble start =
      init_ensemble(cfg.n_particles, cfg.dims, cfg.seed, cfg.init_spread);
  try {
    if (cfg.sampler == SamplerKind::myula)
      myula_run(start, target, c, hook);
    else
      brwp_run(start, target, c, hook);
  } catch (const numeric_error& e) {
    record.failed = true;
    record.failure = e.what();
  }
}

void run_gaussian_sanity(const ExperimentConfig& cfg, MetricSink& sink,
                         RunRecord& record) {
  TargetSpec target;
  target.f_value = [](const Eigen::VectorXd& x) {
    return 0.5 * x.squaredNorm();
  };
  target.f_grad = [](const Eigen::VectorXd& x) { return x; };
  target.nonsmooth = L1Nonsmooth{cfg.lambda};
  target.beta = cfg.beta;

  const auto hook = [&sink, &record](const Ensemble& e) {
    const Eigen::VectorXd mean = e.x.colwise().mean();
    sink.push(e.iteration, "mean_norm", -1, mean.norm());
    for (Eigen::Index l = 0; l < e.dim(); ++l) {
      const double var =
          (e.x.col(l).array() - mean(l)).square().sum() /
          static_cast<double>(e.size() - 1);
      sink.push(e.iteration, "variance", static_cast<int>(l), var);
    }
    sink.end_iteration();
    record.final_ensemble = e.x;
  };
  run_particles(cfg, target, hook, record);
}

void run_mixture(const ExperimentConfig& cfg, MetricSink& sink,
                 RunRecord& record) {
  const MixtureSpec spec = mixture_spec_of(cfg);
  const TargetSpec target = mixture_target(spec);
  const Grid1D grid = metrics_grid(cfg);

  std::vector<int> tracked = {0};
  if (cfg.dims > 1) tracked.push_back(cfg.dims - 1);
  std::vector<MarginalCurve> exact;
  exact.reserve(tracked.size());
  for (const int dim : tracked)
    exact.push_back(mixture_marginal_exact(spec, dim, grid));

  const auto hook = [&](const Ensemble& e) {
    for (std::size_t k = 0; k < tracked.size(); ++k) {
      const MarginalCurve kde = kde_on_grid(
          e.x.col(tracked[k]), cfg.metrics.kde_bandwidth, grid);
      sink.push(e.iteration, "kl", tracked[k], kl_on_grid(kde, exact[k]));
    }
    sink.end_iteration();
    record.final_ensemble = e.x;
  };
  run_particles(cfg, target, hook, record);
}

void run_logistic(const ExperimentConfig& cfg, MetricSink& sink,
                  RunRecord& record) {
  LogisticData data =
      generate_logistic_data(cfg.logistic.n_data, cfg.dims, cfg.seed);
  data.beta = cfg.beta;
  if (cfg.lambda > 0.0) data.lambda = cfg.lambda;
  const TargetSpec target = logistic_posterior(data);

  const auto hook = [&](const Ensemble& e) {
    const Eigen::VectorXd mean = e.x.colwise().mean();
    sink.push(e.iteration, "l1_rel", -1,
              error_norms(mean, data.theta_star).l1_rel);
    sink.end_iteration();
    record.final_ensemble = e.x;
  };
  run_particles(cfg, target, hook, record);
}

void write_image(const std::filesystem::path& dir, const std::string& name,
                 const Eigen::VectorXd& img, int rows, int cols, double lo,
                 double hi) {
  write_pgm(quantize_image(img, rows, cols, lo, hi),
            (dir / name).string());
}

void run_l12tv(const ExperimentConfig& cfg, MetricSink& sink,
               RunRecord& record, const std::filesystem::path& dir) {
  const ImagingSpec spec = make_l12tv_denoise(
      cfg.imaging.rows, cfg.imaging.cols, cfg.lambda,
      cfg.imaging.measurement_variance, cfg.seed);
  const TvProblem problem = tv_problem(spec);
  const Eigen::Index d = spec.truth.size();

  const Ensemble u0 = init_ensemble(cfg.n_particles, static_cast<int>(d),
                                    cfg.seed, cfg.init_spread,
                                    spec.forward.phi);
  TvState state;
  state.u = u0.x;
  state.p.resize(cfg.n_particles, 2 * d);
  for (Eigen::Index i = 0; i < state.u.rows(); ++i)
    state.p.row(i) = problem.ops.grad.apply(state.u.row(i)).transpose();
  state.y = Eigen::MatrixXd::Zero(cfg.n_particles, 2 * d);
  state.params = TvParams{cfg.imaging.gamma, cfg.lambda, cfg.imaging.tau,
                          cfg.beta};

  const double noisy_psnr =
      error_norms(spec.forward.phi, spec.truth).psnr;
  const auto hook = [&](const TvState& s) {
    const Eigen::VectorXd mean = s.u.colwise().mean();
    if (s.iteration == 0)
      sink.push(0, "noisy_psnr", -1, noisy_psnr);
    sink.push(s.iteration, "psnr", -1, error_norms(mean, spec.truth).psnr);
    sink.push(s.iteration, "dual_linf", -1, s.y.cwiseAbs().maxCoeff());
    sink.end_iteration();
    record.final_ensemble = s.u;
  };

  try {
    tv_run(state, problem.ops, sampler_config(cfg), hook,
           problem.extra_smooth_grad);
  } catch (const numeric_error& e) {
    record.failed = true;
    record.failure = e.what();
  }

  if (record.final_ensemble.rows() > 0) {
    const double lo = spec.truth.minCoeff();
    const double hi = spec.truth.maxCoeff();
    const Eigen::VectorXd mean = record.final_ensemble.colwise().mean();
    write_image(dir, "mean.pgm", mean, spec.rows, spec.cols, lo, hi);
    write_image(dir, "truth.pgm", spec.truth, spec.rows, spec.cols, lo, hi);
    write_image(dir, "noisy.pgm", spec.forward.phi, spec.rows, spec.cols, lo,
                hi);
  }
}

void run_cs_hpd(const ExperimentConfig& cfg, MetricSink& sink,
                RunRecord& record, const std::filesystem::path& dir) {
  const ImagingSpec spec = make_cs_problem(
      cfg.imaging.rows, cfg.imaging.cols, cfg.lambda,
      cfg.imaging.measurement_variance, cfg.seed);
  const Eigen::MatrixXd& a = spec.forward.F;
  const Eigen::VectorXd& phi = spec.forward.phi;

  TargetSpec target;
  target.f_value = [&a, &phi](const Eigen::VectorXd& x) {
    return (a * x - phi).squaredNorm();
  };
  target.f_grad = [&a, &phi](const Eigen::VectorXd& x) {
    return (2.0 * a.transpose() * (a * x - phi)).eval();
  };
  target.nonsmooth = L1Nonsmooth{cfg.lambda};
  target.beta = cfg.beta;

  const auto hook = [&](const Ensemble& e) {
    const Eigen::VectorXd mean = e.x.colwise().mean();
    sink.push(e.iteration, "psnr", -1, error_norms(mean, spec.truth).psnr);
    Eigen::VectorXd potentials(e.size());
    for (Eigen::Index j = 0; j < e.size(); ++j) {
      const Eigen::VectorXd xj = e.x.row(j);
      potentials(j) =
          (a * xj - phi).squaredNorm() + cfg.lambda * xj.lpNorm<1>();
    }
    for (int i = 0; i < 19; ++i) {
      const double alpha = 0.05 * (i + 1);
      sink.push(e.iteration, "hpd_eta", i, hpd_threshold(potentials, alpha));
    }
    sink.end_iteration();
    record.final_ensemble = e.x;
  };
  run_particles(cfg, target, hook, record);

  if (record.final_ensemble.rows() > 0) {
    const double lo = spec.truth.minCoeff();
    const double hi = spec.truth.maxCoeff();
    const Eigen::VectorXd mean = record.final_ensemble.colwise().mean();
    write_image(dir, "mean.pgm", mean, spec.rows, spec.cols, lo, hi);
    write_image(dir, "truth.pgm", spec.truth, spec.rows, spec.cols, lo, hi);
  }
}

void run_kernel_validation(const ExperimentConfig& cfg, RunRecord& record,
                           const std::filesystem::path& dir) {
  const ValidationReport report = validate_kernels(cfg.seed);
  record.validation_failed = !report.all_pass();
  std::ofstream os = open_output(dir / "validation.csv");
  write_validation_csv(os, report);
}

}  // namespace

RunRecord run_experiment(const ExperimentConfig& cfg) {
  require_valid(cfg);
  const auto t0 = std::chrono::steady_clock::now();

  RunRecord record;
  record.config_hash = config_hash(cfg);

  const std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw io_error("cannot create output directory '" + dir.string() + "': " +
                   ec.message());

  std::ofstream metrics_os = open_output(dir / "metrics.csv");
  MetricSink sink(record, metrics_os);

  switch (cfg.experiment) {
    case ExperimentKind::gaussian_sanity:
      run_gaussian_sanity(cfg, sink, record);
      break;
    case ExperimentKind::mixture:
      run_mixture(cfg, sink, record);
      break;
    case ExperimentKind::logistic:
      run_logistic(cfg, sink, record);
      break;
    case ExperimentKind::l12tv_denoise:
      run_l12tv(cfg, sink, record, dir);
      break;
    case ExperimentKind::cs_hpd:
      run_cs_hpd(cfg, sink, record, dir);
      break;
    case ExperimentKind::kernel_validation:
      run_kernel_validation(cfg, record, dir);
      break;
  }

  {
    std::ofstream os = open_output(dir / "ensemble.csv");
    write_matrix_csv(os, record.final_ensemble);
  }

  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  {
    std::ofstream os = open_output(dir / "record.txt");
    os << "config_hash = " << record.config_hash << '\n';
    os << "status = "
       << (record.failed
               ? "failed"
               : (record.validation_failed ? "validation_failed" : "ok"))
       << '\n';
    if (record.failed) os << "failure = " << record.failure << '\n';
    os << "wall_seconds = " << record.wall_seconds << '\n';
  }
  return record;
}

MarginalCurve experiment_marginal(const ExperimentConfig& cfg, int dim) {
  require_valid(cfg);
  if (cfg.experiment != ExperimentKind::mixture)
    throw config_error(
        "exact marginals are only available for the mixture experiment");
  return mixture_marginal_exact(mixture_spec_of(cfg), dim, metrics_grid(cfg));
}

}  // namespace brwp
