#include <brwp/prox.hpp>

#include <cmath>
#include <stdexcept>

namespace brwp {

void ProxParams::validate() const {
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("ProxParams: lambda must be >= 0");
  }
  if (!(h > 0.0)) {
    throw std::invalid_argument("ProxParams: h must be > 0");
  }
  if (!(beta > 0.0)) {
    throw std::invalid_argument("ProxParams: beta must be > 0");
  }
}

double shrink(double x, double tau) {
  const double m = std::abs(x) - tau;
  return m > 0.0 ? std::copysign(m, x) : 0.0;
}

Eigen::VectorXd shrink(const Eigen::VectorXd& x, double tau) {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = shrink(x[i], tau);
  return out;
}

Eigen::VectorXd moreau_grad_l1(const Eigen::VectorXd& x, const ProxParams& p) {
  p.validate();
  return (x - shrink(x, p.lambda * p.h)) / p.h;
}

L2DataFitProx::L2DataFitProx(LinearDataFit data, double h)
    : data_(std::move(data)), h_(h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("L2DataFitProx: h must be > 0");
  }
  if (data_.F.rows() != data_.phi.size()) {
    throw std::invalid_argument(
        "L2DataFitProx: F row count must match phi length");
  }
  const Eigen::Index d = data_.F.cols();
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(d, d);
  A.noalias() += h_ * data_.F.transpose() * data_.F;
  llt_.compute(A);
  if (llt_.info() != Eigen::Success) {
    throw std::runtime_error("L2DataFitProx: Cholesky factorization failed");
  }
  h_Ft_phi_ = h_ * data_.F.transpose() * data_.phi;
}

Eigen::VectorXd L2DataFitProx::operator()(const Eigen::VectorXd& v) const {
  return llt_.solve(v + h_Ft_phi_);
}

Eigen::VectorXd prox_l2_datafit(const Eigen::VectorXd& v,
                                const LinearDataFit& data, double h) {
  return L2DataFitProx(data, h)(v);
}

Eigen::VectorXd project_linf_ball(const Eigen::VectorXd& y) {
  Eigen::VectorXd out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    out[i] = y[i] / std::max(std::abs(y[i]), 1.0);
  }
  return out;
}

}  // namespace brwp
