#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include <brwp/prox.hpp>
#include <brwp/samplers.hpp>
#include <brwp/tv_sampler.hpp>

namespace brwp {

// Gaussian mixture with L1 tilt: the target is
//   rho*(x) propto exp(-beta (f(x) + lambda ||x||_1)),
//   f(x) = -log sum_n exp(-||x - y_n||^2 / (2 sigma^2)).
struct MixtureSpec {
  Eigen::MatrixXd centers;  // one center per row
  double sigma = 4.0;
  double lambda = 0.0;
  double beta = 1.0;
  void validate() const;
};

// Centers drawn uniformly from [-box, box]^d.
MixtureSpec make_mixture_spec(int n_centers, int d, double sigma,
                              double lambda, std::uint64_t seed,
                              double box = 10.0);

TargetSpec mixture_target(const MixtureSpec& spec);

// Bayesian logistic regression with a Laplace prior: the negative log
// posterior is f(theta) + lambda ||theta||_1 with
//   f(theta) = -Y^T X theta + sum_i log(1 + exp(theta^T x_i)).
struct LogisticData {
  Eigen::MatrixXd X;           // covariate rows x_i^T, each of unit norm
  Eigen::VectorXd Y;           // labels in {0, 1}
  Eigen::VectorXd theta_star;  // ground truth used to draw the labels
  double lambda = 0.0;         // L1 prior weight
  double beta = 1.0;
  void validate() const;
};

// Covariates have entries +-1/sqrt(d) (unit-norm rows); labels are Bernoulli
// with success probability sigmoid(theta*^T x_i) where theta* has ones in the
// first d/4 coordinates and zeros elsewhere. Requires d divisible by 4.
// The prior weight is set to 3d / (2 pi^2).
LogisticData generate_logistic_data(int n, int d, std::uint64_t seed);

TargetSpec logistic_posterior(const LogisticData& data);

// Builder for the spec'd discrete gradient operator on an rows x cols image.
DiscreteGradient discrete_gradient(int rows, int cols);

// Circulant blur composed with row subsampling. The blur convolves
// circularly with `taps` (centred at (taps.size()-1)/2) and the subsampling
// keeps every (d/m)-th output, so the result has m rows. Requires m | d.
LinearDataFit circulant_blur(int d, const std::vector<double>& taps, int m);

// Matrix-free product of the subsampled circulant blur with x, O(d k) for a
// width-k kernel. Matches circulant_blur(d, taps, m).F * x.
Eigen::VectorXd circulant_blur_apply(int d, const std::vector<double>& taps,
                                     int m, const Eigen::VectorXd& x);

// Normalised box kernel of odd width (taps sum to one).
std::vector<double> box_kernel(int width);

// Deterministic piecewise-constant test image: background 0, one block at
// value 1 in the upper-left region, one at 0.5 in the lower-right region.
Eigen::VectorXd piecewise_constant_image(int rows, int cols);

enum class RegMode { l1tv, l12tv };

struct NoiseModel {
  double measurement_variance = 0.0;
  int sparse_count = 0;  // nonzero perturbations added to the forward map
};

struct RegSpec {
  double lambda = 1.0;
  RegMode mode = RegMode::l1tv;
};

// One imaging inverse problem: recover `truth` (an rows x cols image stored
// row-major) from forward.phi = F truth + noise, regularised by TV.
struct ImagingSpec {
  LinearDataFit forward;
  Eigen::VectorXd truth;
  int rows = 0;
  int cols = 0;
  NoiseModel noise;
  RegSpec reg;
  void validate() const;
};

// Denoising/deconvolution setup: F = I + sparse Gaussian perturbation
// (3d entries of variance 0.1 at random positions), observation
// phi = F truth + eta with eta of variance `measurement_variance`.
ImagingSpec make_l12tv_denoise(int rows, int cols, double lambda,
                               double measurement_variance,
                               std::uint64_t seed);

// Compressed-sensing setup: F = circulant box-5 blur subsampled to d/4 rows,
// phi = F truth + eta with eta of variance `measurement_variance`.
ImagingSpec make_cs_problem(int rows, int cols, double lambda,
                            double measurement_variance, std::uint64_t seed);

// Smoothed L2-TV target for samplers that need a gradient of the full
// objective: f(u) = ||F u - phi||^2 - lambda sqrt(||Du||^2 + eps^2) with
// eps = 1e-8. The L1-TV part of an l1tv problem is not representable here
// and is handled by the primal-dual machinery instead, so the returned
// nonsmooth term is zero.
TargetSpec l12tv_target(const ImagingSpec& spec);

// Inputs for the primal-dual TV sampler: data-fit and gradient operators
// plus, for l12tv problems, the gradient of the extra smooth term
// -lambda_2 sqrt(||Du||^2 + eps^2) to fold into the u half-step.
struct TvProblem {
  TvOps ops;
  SmoothGradFn extra_smooth_grad;  // empty for pure l1tv
};

TvProblem tv_problem(const ImagingSpec& spec);

}  // namespace brwp
