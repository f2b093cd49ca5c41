#include <brwp/problems.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include <brwp/errors.hpp>
#include <brwp/rng.hpp>
#include <brwp/special.hpp>

namespace brwp {

namespace {

// log(1 + exp(t)) without overflow for large |t|.
double log1pexp(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

// 1 / (1 + exp(-t)) evaluated through the non-overflowing branch.
double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

void require_vector_size(const Eigen::VectorXd& x, Eigen::Index d,
                         const char* op) {
  if (x.size() != d) {
    std::ostringstream msg;
    msg << op << ": expected dimension " << d << ", got " << x.size();
    throw config_error(msg.str());
  }
}

}  // namespace

void MixtureSpec::validate() const {
  if (centers.rows() < 1 || centers.cols() < 1)
    throw config_error("MixtureSpec: needs at least one center");
  if (!(sigma > 0.0)) throw config_error("MixtureSpec: sigma must be > 0");
  if (lambda < 0.0) throw config_error("MixtureSpec: lambda must be >= 0");
  if (!(beta > 0.0)) throw config_error("MixtureSpec: beta must be > 0");
}

MixtureSpec make_mixture_spec(int n_centers, int d, double sigma,
                              double lambda, std::uint64_t seed, double box) {
  if (n_centers < 1 || d < 1)
    throw config_error("make_mixture_spec: n_centers and d must be >= 1");
  MixtureSpec spec;
  spec.centers.resize(n_centers, d);
  for (int i = 0; i < n_centers; ++i)
    for (int j = 0; j < d; ++j) {
      const auto ctr = static_cast<std::uint64_t>(i) * d + j;
      spec.centers(i, j) =
          box * (2.0 * rng::uniform01(seed, rng::Stream::mixture_centers, ctr) -
                 1.0);
    }
  spec.sigma = sigma;
  spec.lambda = lambda;
  spec.validate();
  return spec;
}

TargetSpec mixture_target(const MixtureSpec& spec) {
  spec.validate();
  const Eigen::MatrixXd centers = spec.centers;
  const double inv_two_sigma_sq = 1.0 / (2.0 * spec.sigma * spec.sigma);
  const double inv_sigma_sq = 1.0 / (spec.sigma * spec.sigma);
  const Eigen::Index d = centers.cols();

  auto log_weights = [centers, inv_two_sigma_sq,
                      d](const Eigen::VectorXd& x) {
    require_vector_size(x, d, "mixture_target");
    Eigen::VectorXd s(centers.rows());
    for (Eigen::Index n = 0; n < centers.rows(); ++n)
      s(n) =
          -(x - centers.row(n).transpose()).squaredNorm() * inv_two_sigma_sq;
    return s;
  };

  TargetSpec target;
  target.beta = spec.beta;
  target.nonsmooth = L1Nonsmooth{spec.lambda};
  target.f_value = [log_weights](const Eigen::VectorXd& x) {
    return -logsumexp(log_weights(x));
  };
  target.f_grad = [log_weights, centers,
                   inv_sigma_sq](const Eigen::VectorXd& x) {
    const Eigen::VectorXd w = softmax_stable(log_weights(x));
    return ((x - centers.transpose() * w) * inv_sigma_sq).eval();
  };
  return target;
}

void LogisticData::validate() const {
  if (X.rows() < 1 || X.cols() < 1)
    throw config_error("LogisticData: X must be non-empty");
  if (Y.size() != X.rows())
    throw config_error("LogisticData: one label per covariate row required");
  for (Eigen::Index i = 0; i < Y.size(); ++i)
    if (Y(i) != 0.0 && Y(i) != 1.0)
      throw config_error("LogisticData: labels must be 0 or 1");
  if (theta_star.size() != 0 && theta_star.size() != X.cols())
    throw config_error("LogisticData: theta_star dimension mismatch");
  if (lambda < 0.0) throw config_error("LogisticData: lambda must be >= 0");
  if (!(beta > 0.0)) throw config_error("LogisticData: beta must be > 0");
}

LogisticData generate_logistic_data(int n, int d, std::uint64_t seed) {
  if (n < 1) throw config_error("generate_logistic_data: n must be >= 1");
  if (d < 4 || d % 4 != 0)
    throw config_error("generate_logistic_data: d must be divisible by 4");

  LogisticData data;
  data.X.resize(n, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  // Counters [0, n*d) draw the covariate signs, [n*d, n*d + n) the labels.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) {
      const auto ctr = static_cast<std::uint64_t>(i) * d + j;
      const double u = rng::uniform01(seed, rng::Stream::logistic_data, ctr);
      data.X(i, j) = (u < 0.5 ? -scale : scale);
    }

  data.theta_star = Eigen::VectorXd::Zero(d);
  data.theta_star.head(d / 4).setOnes();

  data.Y.resize(n);
  const auto label_base = static_cast<std::uint64_t>(n) * d;
  for (int i = 0; i < n; ++i) {
    const double p = sigmoid(data.X.row(i).dot(data.theta_star));
    const double u =
        rng::uniform01(seed, rng::Stream::logistic_data, label_base + i);
    data.Y(i) = (u < p) ? 1.0 : 0.0;
  }

  data.lambda = 3.0 * d / (2.0 * std::numbers::pi * std::numbers::pi);
  data.validate();
  return data;
}

TargetSpec logistic_posterior(const LogisticData& data) {
  data.validate();
  const Eigen::MatrixXd X = data.X;
  const Eigen::VectorXd Y = data.Y;
  const Eigen::Index d = X.cols();

  TargetSpec target;
  target.beta = data.beta;
  target.nonsmooth = L1Nonsmooth{data.lambda};
  target.f_value = [X, Y, d](const Eigen::VectorXd& theta) {
    require_vector_size(theta, d, "logistic_posterior");
    const Eigen::VectorXd t = X * theta;
    double acc = -Y.dot(t);
    for (Eigen::Index i = 0; i < t.size(); ++i) acc += log1pexp(t(i));
    return acc;
  };
  target.f_grad = [X, Y, d](const Eigen::VectorXd& theta) {
    require_vector_size(theta, d, "logistic_posterior");
    const Eigen::VectorXd t = X * theta;
    Eigen::VectorXd r(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) r(i) = sigmoid(t(i)) - Y(i);
    return (X.transpose() * r).eval();
  };
  return target;
}

DiscreteGradient discrete_gradient(int rows, int cols) {
  return DiscreteGradient(rows, cols);
}

std::vector<double> box_kernel(int width) {
  if (width < 1 || width % 2 == 0)
    throw config_error("box_kernel: width must be odd and >= 1");
  return std::vector<double>(width, 1.0 / width);
}

namespace {

void check_blur_args(int d, const std::vector<double>& taps, int m) {
  if (d < 1) throw config_error("circulant_blur: d must be >= 1");
  if (taps.empty()) throw config_error("circulant_blur: kernel is empty");
  if (m < 1 || m > d)
    throw config_error("circulant_blur: need 1 <= m <= d");
  if (d % m != 0)
    throw config_error("circulant_blur: m must divide d");
}

}  // namespace

LinearDataFit circulant_blur(int d, const std::vector<double>& taps, int m) {
  check_blur_args(d, taps, m);
  const int stride = d / m;
  const int center = (static_cast<int>(taps.size()) - 1) / 2;
  LinearDataFit op;
  op.F = Eigen::MatrixXd::Zero(m, d);
  for (int i = 0; i < m; ++i) {
    const int r = i * stride;
    for (int t = 0; t < static_cast<int>(taps.size()); ++t) {
      const int c = ((r + t - center) % d + d) % d;
      op.F(i, c) += taps[t];
    }
  }
  op.phi = Eigen::VectorXd::Zero(m);
  return op;
}

Eigen::VectorXd circulant_blur_apply(int d, const std::vector<double>& taps,
                                     int m, const Eigen::VectorXd& x) {
  check_blur_args(d, taps, m);
  if (x.size() != d)
    throw config_error("circulant_blur_apply: input dimension mismatch");
  const int stride = d / m;
  const int center = (static_cast<int>(taps.size()) - 1) / 2;
  Eigen::VectorXd out(m);
  for (int i = 0; i < m; ++i) {
    const int r = i * stride;
    double acc = 0.0;
    for (int t = 0; t < static_cast<int>(taps.size()); ++t) {
      const int c = ((r + t - center) % d + d) % d;
      acc += taps[t] * x(c);
    }
    out(i) = acc;
  }
  return out;
}

Eigen::VectorXd piecewise_constant_image(int rows, int cols) {
  if (rows < 1 || cols < 1)
    throw config_error("piecewise_constant_image: shape must be positive");
  Eigen::VectorXd img = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(rows) * cols);
  auto fill = [&](int r0, int r1, int c0, int c1, double v) {
    for (int r = r0; r < r1; ++r)
      for (int c = c0; c < c1; ++c)
        img(static_cast<Eigen::Index>(r) * cols + c) = v;
  };
  fill(rows / 4, rows / 2, cols / 4, cols / 2, 1.0);
  fill(rows / 2, 7 * rows / 8, cols / 2, 7 * cols / 8, 0.5);
  return img;
}

void ImagingSpec::validate() const {
  if (rows < 1 || cols < 1)
    throw config_error("ImagingSpec: image shape must be positive");
  const auto d = static_cast<Eigen::Index>(rows) * cols;
  if (truth.size() != d)
    throw config_error("ImagingSpec: truth does not match the image shape");
  if (forward.F.cols() != d)
    throw config_error("ImagingSpec: forward operator has wrong domain");
  if (forward.phi.size() != forward.F.rows())
    throw config_error("ImagingSpec: observation does not match the operator");
  if (reg.lambda < 0.0) throw config_error("ImagingSpec: lambda must be >= 0");
  if (noise.measurement_variance < 0.0 || noise.sparse_count < 0)
    throw config_error("ImagingSpec: noise model must be nonnegative");
}

ImagingSpec make_l12tv_denoise(int rows, int cols, double lambda,
                               double measurement_variance,
                               std::uint64_t seed) {
  if (rows < 2 || cols < 2)
    throw config_error("make_l12tv_denoise: image must be at least 2x2");
  const auto d = static_cast<Eigen::Index>(rows) * cols;
  ImagingSpec spec;
  spec.rows = rows;
  spec.cols = cols;
  spec.truth = piecewise_constant_image(rows, cols);
  spec.noise.measurement_variance = measurement_variance;
  spec.noise.sparse_count = static_cast<int>(3 * d);
  spec.reg = {lambda, RegMode::l12tv};

  // F = I + sparse Gaussian perturbation with 3d entries of variance 0.1.
  // Counter layout on the imaging_noise stream: uniform01 at [0, 6d) picks
  // the positions, normal at [3d, 6d) the entry values (words [6d, 12d)) and
  // normal at [6d, 7d) the measurement noise (words [12d, 14d)).
  spec.forward.F = Eigen::MatrixXd::Identity(d, d);
  const auto du = static_cast<std::uint64_t>(d);
  const double entry_sd = std::sqrt(0.1);
  for (std::uint64_t k = 0; k < 3 * du; ++k) {
    const double ur =
        rng::uniform01(seed, rng::Stream::imaging_noise, 2 * k);
    const double uc =
        rng::uniform01(seed, rng::Stream::imaging_noise, 2 * k + 1);
    const auto r = std::min<Eigen::Index>(d - 1,
                                          static_cast<Eigen::Index>(ur * d));
    const auto c = std::min<Eigen::Index>(d - 1,
                                          static_cast<Eigen::Index>(uc * d));
    spec.forward.F(r, c) +=
        entry_sd * rng::normal(seed, rng::Stream::imaging_noise, 3 * du + k);
  }

  const double noise_sd = std::sqrt(measurement_variance);
  Eigen::VectorXd eta(d);
  for (Eigen::Index i = 0; i < d; ++i)
    eta(i) = noise_sd *
             rng::normal(seed, rng::Stream::imaging_noise, 6 * du + i);
  spec.forward.phi = spec.forward.F * spec.truth + eta;
  spec.validate();
  return spec;
}

ImagingSpec make_cs_problem(int rows, int cols, double lambda,
                            double measurement_variance, std::uint64_t seed) {
  if (rows < 2 || cols < 2)
    throw config_error("make_cs_problem: image must be at least 2x2");
  const auto d = static_cast<Eigen::Index>(rows) * cols;
  if (d % 4 != 0)
    throw config_error("make_cs_problem: image size must be divisible by 4");
  ImagingSpec spec;
  spec.rows = rows;
  spec.cols = cols;
  spec.truth = piecewise_constant_image(rows, cols);
  spec.noise.measurement_variance = measurement_variance;
  spec.noise.sparse_count = 0;
  spec.reg = {lambda, RegMode::l1tv};
  spec.forward = circulant_blur(static_cast<int>(d), box_kernel(5),
                                static_cast<int>(d / 4));

  const double noise_sd = std::sqrt(measurement_variance);
  Eigen::VectorXd eta(spec.forward.F.rows());
  for (Eigen::Index i = 0; i < eta.size(); ++i)
    eta(i) = noise_sd * rng::normal(seed, rng::Stream::cs_data, i);
  spec.forward.phi = spec.forward.F * spec.truth + eta;
  spec.validate();
  return spec;
}

namespace {

constexpr double kTvGuardEps = 1e-8;

// Gradient of -lambda sqrt(||Du||^2 + eps^2), the smooth concave part of the
// L1-2 TV regularizer.
SmoothGradFn make_l2tv_grad(const DiscreteGradient& grad, double lambda) {
  return [grad, lambda](const Eigen::VectorXd& u) {
    const Eigen::VectorXd du = grad.apply(u);
    const double guard =
        std::sqrt(du.squaredNorm() + kTvGuardEps * kTvGuardEps);
    return (-lambda * grad.apply_t(du / guard)).eval();
  };
}

}  // namespace

TargetSpec l12tv_target(const ImagingSpec& spec) {
  spec.validate();
  const LinearDataFit fit = spec.forward;
  const DiscreteGradient grad(spec.rows, spec.cols);
  const double lambda = spec.reg.lambda;
  const Eigen::Index d = fit.F.cols();
  const SmoothGradFn tv_grad = make_l2tv_grad(grad, lambda);

  TargetSpec target;
  target.nonsmooth = L1Nonsmooth{0.0};
  target.f_value = [fit, grad, lambda, d](const Eigen::VectorXd& u) {
    require_vector_size(u, d, "l12tv_target");
    const double tv =
        std::sqrt(grad.apply(u).squaredNorm() + kTvGuardEps * kTvGuardEps);
    return (fit.F * u - fit.phi).squaredNorm() - lambda * tv;
  };
  target.f_grad = [fit, tv_grad, d](const Eigen::VectorXd& u) {
    require_vector_size(u, d, "l12tv_target");
    return (2.0 * fit.F.transpose() * (fit.F * u - fit.phi) + tv_grad(u))
        .eval();
  };
  return target;
}

TvProblem tv_problem(const ImagingSpec& spec) {
  spec.validate();
  TvProblem problem{TvOps{spec.forward, DiscreteGradient(spec.rows, spec.cols)},
                    {}};
  if (spec.reg.mode == RegMode::l12tv)
    problem.extra_smooth_grad =
        make_l2tv_grad(problem.ops.grad, spec.reg.lambda);
  return problem;
}

}  // namespace brwp
