#include <brwp/kernels.hpp>

#include <cmath>
#include <stdexcept>

#include <brwp/special.hpp>

namespace brwp {

namespace {

// Scalar L1 exponent between coordinates xi and xj: the d = 1 case of
// kernel_exponent_l1, reused by both the dense and the per-dimension builder.
double exponent_scalar(double xi, double xj, const ProxParams& p) {
  const double s = shrink(xj, p.lambda * p.h);
  const double diff = xi - xj;
  const double shift = s - xj;
  return -(p.beta / 2.0) *
         ((diff * diff - shift * shift) / (2.0 * p.h) - p.lambda * std::abs(s));
}

}  // namespace

double kernel_exponent_l1(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj,
                          const ProxParams& p) {
  if (xi.size() != xj.size())
    throw std::invalid_argument("kernel_exponent_l1: dimension mismatch");
  p.validate();
  const Eigen::VectorXd s = shrink(xj, p.lambda * p.h);
  const double sq_diff = (xi - xj).squaredNorm();
  const double sq_shift = (s - xj).squaredNorm();
  return -(p.beta / 2.0) *
         ((sq_diff - sq_shift) / (2.0 * p.h) - p.lambda * s.lpNorm<1>());
}

Eigen::MatrixXd interaction_l1_delta(const Ensemble& ens, const ProxParams& p) {
  p.validate();
  const auto n = ens.size();
  if (n == 0) throw std::invalid_argument("interaction_l1_delta: empty ensemble");

  // Per-column terms depend on xj only; hoist them out of the pair loop.
  Eigen::VectorXd sq_shift(n), prox_l1(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::VectorXd s = shrink(ens.x.row(j).transpose(), p.lambda * p.h);
    sq_shift[j] = (s - ens.x.row(j).transpose()).squaredNorm();
    prox_l1[j] = s.lpNorm<1>();
  }

  Eigen::MatrixXd m(n, n);
  Eigen::VectorXd row(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double sq_diff = (ens.x.row(i) - ens.x.row(j)).squaredNorm();
      row[j] = -(p.beta / 2.0) *
               ((sq_diff - sq_shift[j]) / (2.0 * p.h) - p.lambda * prox_l1[j]);
    }
    m.row(i) = softmax_stable(row).transpose();
  }
  return m;
}

Eigen::MatrixXd interaction_general_prox(const Ensemble& ens,
                                         const GValueFn& g_value,
                                         const GProxFn& g_prox,
                                         const ProxParams& p) {
  p.validate();
  if (!g_value || !g_prox)
    throw std::invalid_argument("interaction_general_prox: missing g callbacks");
  const auto n = ens.size();
  if (n == 0) throw std::invalid_argument("interaction_general_prox: empty ensemble");

  Eigen::VectorXd sq_shift(n), g_at_prox(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::VectorXd pj = g_prox(ens.x.row(j).transpose(), p.h);
    sq_shift[j] = (pj - ens.x.row(j).transpose()).squaredNorm();
    g_at_prox[j] = g_value(pj);
  }

  Eigen::MatrixXd m(n, n);
  Eigen::VectorXd row(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double sq_diff = (ens.x.row(i) - ens.x.row(j)).squaredNorm();
      row[j] = -(p.beta / 2.0) *
               ((sq_diff - sq_shift[j]) / (2.0 * p.h) - g_at_prox[j]);
    }
    m.row(i) = softmax_stable(row).transpose();
  }
  return m;
}

SeparableInteraction separable_interaction_l1(const Ensemble& ens,
                                              const ProxParams& p) {
  p.validate();
  const auto n = ens.size();
  const auto d = ens.dim();
  if (n == 0) throw std::invalid_argument("separable_interaction_l1: empty ensemble");

  SeparableInteraction out;
  out.slice.reserve(static_cast<std::size_t>(d));
  Eigen::VectorXd row(n);
  for (Eigen::Index l = 0; l < d; ++l) {
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j)
        row[j] = exponent_scalar(ens.x(i, l), ens.x(j, l), p);
      m.row(i) = softmax_stable(row).transpose();
    }
    out.slice.push_back(std::move(m));
  }
  return out;
}

double silverman_bandwidth(const Ensemble& ens) {
  const auto n = ens.size();
  const auto d = ens.dim();
  if (n < 2)
    throw std::invalid_argument("silverman_bandwidth: need at least 2 particles");
  double mean_sd = 0.0;
  for (Eigen::Index l = 0; l < d; ++l) {
    const double mu = ens.x.col(l).mean();
    const double var =
        (ens.x.col(l).array() - mu).square().sum() / static_cast<double>(n - 1);
    mean_sd += std::sqrt(var);
  }
  mean_sd /= static_cast<double>(d);
  return mean_sd * std::pow(static_cast<double>(n),
                            -1.0 / (static_cast<double>(d) + 4.0));
}

}  // namespace brwp
