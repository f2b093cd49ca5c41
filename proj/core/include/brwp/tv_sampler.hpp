#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Core>

#include <brwp/prox.hpp>
#include <brwp/samplers.hpp>

namespace brwp {

// Forward-difference gradient of a rows x cols image flattened row-major
// (pixel (r, c) at index r*cols + c), with replicate boundary so the last
// difference in each direction is zero. apply stacks [horizontal; vertical]
// into a 2d vector; apply_t is the exact adjoint.
class DiscreteGradient {
 public:
  DiscreteGradient(int rows, int cols);

  Eigen::Index d() const {
    return static_cast<Eigen::Index>(rows_) * cols_;
  }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
  Eigen::VectorXd apply_t(const Eigen::VectorXd& g) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
};

// Largest eigenvalue of I + D^T D (the squared operator norm of the coupling
// v -> [v; -Dv]) estimated by `iters` power-iteration steps from a seeded
// start vector. The Rayleigh quotient approaches the eigenvalue from below.
double coupling_opnorm_sq(const DiscreteGradient& grad, int iters,
                          std::uint64_t seed);

// Dual step size 1/(gamma^2 * 1.05 * ||L||^2); the 5% inflation compensates
// the power iteration estimating ||L||^2 from below. gamma = 0 gives 0 (the
// dual is frozen).
double default_dual_step(const DiscreteGradient& grad, double gamma,
                         std::uint64_t seed);

struct TvParams {
  double gamma = 1.0;   // coupling weight enforcing p = D u
  double lambda = 1.0;  // L1 weight on p
  double tau = -1.0;    // dual step size; negative picks default_dual_step,
                        // 0 freezes the dual
  double beta = 1.0;

  void validate() const;
};

// Operators of the posterior exp(-(||phi - F u||^2 + lambda ||D u||_1)).
struct TvOps {
  LinearDataFit data;      // F and phi
  DiscreteGradient grad;   // D
};

struct TvState {
  Eigen::MatrixXd u;  // N x d image particles
  Eigen::MatrixXd p;  // N x 2d gradient-field particles
  Eigen::MatrixXd y;  // N x 2d dual particles
  TvParams params;
  int iteration = 0;

  Eigen::Index size() const { return u.rows(); }
};

// Gradient of an additional smooth term included in the u half-step (beyond
// the quadratic data fit handled by the proximal average); empty means none.
using SmoothGradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// One primal-dual sweep: gradient descent on the dual coupling for u and p,
// proximal-averaged interaction updates for both primal blocks (quadratic
// data-fit prox for u, soft thresholding for p), then projected dual ascent
//   y <- P_{||.||_inf <= 1}(y + tau gamma ((2p' - p) - D(2u' - u))).
// Throws config_error on shape mismatch, numeric_error on non-finite output.
TvState tv_pd_step(const TvState& s, const TvOps& ops, const SamplerConfig& c,
                   const SmoothGradFn& extra_grad = {});

using TvHook = std::function<void(const TvState&)>;

TvState tv_run(TvState s, const TvOps& ops, const SamplerConfig& c,
               const TvHook& hook = {}, const SmoothGradFn& extra_grad = {});

}  // namespace brwp
