#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace brwp {

// Parameters shared by the proximal and kernel operations: L1 weight lambda,
// time step h, and inverse temperature beta.
struct ProxParams {
  double lambda = 0.0;  // L1 weight, >= 0
  double h = 0.0;       // step size, > 0
  double beta = 1.0;    // inverse temperature, > 0

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

// Soft-thresholding: shrink(x, tau) = sign(x) * max(|x| - tau, 0).
// This is the proximal map of tau * |.|; at |x| == tau the output is exactly
// zero. tau must be >= 0.
double shrink(double x, double tau);
Eigen::VectorXd shrink(const Eigen::VectorXd& x, double tau);

// Gradient of the Moreau envelope of lambda * ||.||_1 at parameter h:
//   (x - shrink(x, lambda * h)) / h,
// clamped by construction to [-lambda, lambda] componentwise and satisfying
// h * moreau_grad_l1(x) + shrink(x, lambda * h) == x exactly.
Eigen::VectorXd moreau_grad_l1(const Eigen::VectorXd& x, const ProxParams& p);

// Quadratic data-fit term ||phi - F u||^2 described by its operator and data.
struct LinearDataFit {
  Eigen::MatrixXd F;    // m x d
  Eigen::VectorXd phi;  // m
};

// Proximal map of the quadratic data fit:
//   prox(v) = (I + h F^T F)^{-1} (v + h F^T phi),
// the stationary point of (1/2)||phi - F u||^2 + ||u - v||^2/(2h). The
// matrix I + h F^T F is symmetric positive definite for h > 0, so a Cholesky
// factorization is computed once in the constructor and reused per call.
class L2DataFitProx {
 public:
  L2DataFitProx(LinearDataFit data, double h);

  Eigen::VectorXd operator()(const Eigen::VectorXd& v) const;

  double h() const { return h_; }
  const LinearDataFit& data() const { return data_; }

 private:
  LinearDataFit data_;
  double h_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd h_Ft_phi_;
};

// One-shot convenience wrapper around L2DataFitProx. Factorizes on every
// call; samplers should hold an L2DataFitProx instead.
Eigen::VectorXd prox_l2_datafit(const Eigen::VectorXd& v,
                                const LinearDataFit& data, double h);

// Euclidean projection onto the unit infinity-norm ball, applied
// componentwise: y_j / max(|y_j|, 1).
Eigen::VectorXd project_linf_ball(const Eigen::VectorXd& y);

}  // namespace brwp
