#include <brwp/tv_sampler.hpp>

#include <cmath>
#include <sstream>

#include <brwp/errors.hpp>
#include <brwp/kernels.hpp>
#include <brwp/rng.hpp>

namespace brwp {

DiscreteGradient::DiscreteGradient(int rows, int cols)
    : rows_(rows), cols_(cols) {
  if (rows < 2 || cols < 2)
    throw config_error("DiscreteGradient: image must be at least 2x2");
}

Eigen::VectorXd DiscreteGradient::apply(const Eigen::VectorXd& u) const {
  if (u.size() != d())
    throw std::invalid_argument("DiscreteGradient::apply: wrong size");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * d());
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) {
      const Eigen::Index idx = static_cast<Eigen::Index>(r) * cols_ + c;
      if (c + 1 < cols_) g(idx) = u(idx + 1) - u(idx);
      if (r + 1 < rows_) g(d() + idx) = u(idx + cols_) - u(idx);
    }
  return g;
}

Eigen::VectorXd DiscreteGradient::apply_t(const Eigen::VectorXd& g) const {
  if (g.size() != 2 * d())
    throw std::invalid_argument("DiscreteGradient::apply_t: wrong size");
  Eigen::VectorXd u = Eigen::VectorXd::Zero(d());
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) {
      const Eigen::Index idx = static_cast<Eigen::Index>(r) * cols_ + c;
      if (c + 1 < cols_) {
        u(idx) -= g(idx);
        u(idx + 1) += g(idx);
      }
      if (r + 1 < rows_) {
        u(idx) -= g(d() + idx);
        u(idx + cols_) += g(d() + idx);
      }
    }
  return u;
}

double coupling_opnorm_sq(const DiscreteGradient& grad, int iters,
                          std::uint64_t seed) {
  Eigen::VectorXd v(grad.d());
  for (Eigen::Index k = 0; k < v.size(); ++k)
    v(k) = rng::normal(seed, rng::Stream::power_iteration,
                       static_cast<std::uint64_t>(k));
  v.normalize();
  double lam = 1.0;
  for (int it = 0; it < iters; ++it) {
    const Eigen::VectorXd w = v + grad.apply_t(grad.apply(v));
    lam = v.dot(w);
    const double n = w.norm();
    if (!(n > 0.0)) break;
    v = w / n;
  }
  return lam;
}

double default_dual_step(const DiscreteGradient& grad, double gamma,
                         std::uint64_t seed) {
  if (gamma == 0.0) return 0.0;
  const double lam = coupling_opnorm_sq(grad, 20, seed);
  return 1.0 / (gamma * gamma * 1.05 * lam);
}

void TvParams::validate() const {
  if (gamma < 0.0) throw config_error("TvParams: gamma must be >= 0");
  if (lambda < 0.0) throw config_error("TvParams: lambda must be >= 0");
  if (!(beta > 0.0)) throw config_error("TvParams: beta must be > 0");
}

namespace {

void check_tv_shapes(const TvState& s, const TvOps& ops) {
  const Eigen::Index d = ops.grad.d();
  if (s.u.cols() != d)
    throw config_error("tv_pd_step: u has wrong number of columns");
  if (s.p.cols() != 2 * d || s.y.cols() != 2 * d)
    throw config_error("tv_pd_step: p and y must have 2d columns");
  if (s.p.rows() != s.u.rows() || s.y.rows() != s.u.rows())
    throw config_error("tv_pd_step: particle counts disagree");
  if (ops.data.F.cols() != d)
    throw config_error("tv_pd_step: F has wrong number of columns");
  if (ops.data.phi.size() != ops.data.F.rows())
    throw config_error("tv_pd_step: phi length disagrees with F");
}

void check_finite_tv(const Eigen::MatrixXd& x, const char* what,
                     int iteration) {
  if (x.allFinite()) return;
  std::ostringstream msg;
  msg << "tv_pd_step: non-finite " << what << " at iteration " << iteration;
  throw numeric_error(msg.str());
}

}  // namespace

TvState tv_pd_step(const TvState& s, const TvOps& ops, const SamplerConfig& c,
                   const SmoothGradFn& extra_grad) {
  c.validate();
  s.params.validate();
  check_tv_shapes(s, ops);

  const double h = c.h;
  const TvParams& prm = s.params;
  const Eigen::Index n = s.size();
  const Eigen::Index d = ops.grad.d();

  // Gradient descent on the dual coupling gamma <y, p - D u>.
  Eigen::MatrixXd uh = s.u;
  Eigen::MatrixXd ph = s.p - h * prm.gamma * s.y;
  for (Eigen::Index i = 0; i < n; ++i) {
    uh.row(i) +=
        h * prm.gamma * ops.grad.apply_t(s.y.row(i).transpose()).transpose();
    if (extra_grad)
      uh.row(i) -= h * extra_grad(s.u.row(i).transpose()).transpose();
  }
  check_finite_tv(uh, "u half-step", s.iteration);
  check_finite_tv(ph, "p half-step", s.iteration);

  // Proximal-averaged update of the image block with the quadratic data fit.
  const L2DataFitProx proxer(ops.data, h);
  const GValueFn g_value = [&ops](const Eigen::VectorXd& v) {
    return (ops.data.phi - ops.data.F * v).squaredNorm();
  };
  const GProxFn g_prox = [&proxer](const Eigen::VectorXd& v, double) {
    return proxer(v);
  };
  const Ensemble half_u{uh, s.iteration};
  const ProxParams pp_u{0.0, h, prm.beta};
  const Eigen::MatrixXd mu =
      interaction_general_prox(half_u, g_value, g_prox, pp_u);
  Eigen::MatrixXd prox_u(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    prox_u.row(i) = proxer(uh.row(i).transpose()).transpose();

  TvState out;
  out.params = s.params;
  out.iteration = s.iteration + 1;
  out.u = uh + 0.5 * (prox_u - mu * uh);

  // Soft-thresholded averaged update of the gradient-field block.
  const Ensemble half_p{ph, s.iteration};
  const ProxParams pp_p{prm.lambda, h, prm.beta};
  const Eigen::MatrixXd mp = interaction_l1_delta(half_p, pp_p);
  const double tau_l1 = prm.lambda * h;
  const Eigen::MatrixXd prox_p =
      ph.unaryExpr([tau_l1](double v) { return shrink(v, tau_l1); });
  out.p = ph + 0.5 * (prox_p - mp * ph);

  check_finite_tv(out.u, "u update", s.iteration);
  check_finite_tv(out.p, "p update", s.iteration);

  // Projected dual ascent from the extrapolated primal residual.
  const double tau =
      prm.tau >= 0.0 ? prm.tau : default_dual_step(ops.grad, prm.gamma, c.seed);
  out.y.resize(n, 2 * d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd du =
        ops.grad.apply((2.0 * out.u.row(i) - s.u.row(i)).transpose());
    const Eigen::VectorXd res =
        (2.0 * out.p.row(i) - s.p.row(i)).transpose() - du;
    out.y.row(i) =
        project_linf_ball(s.y.row(i).transpose() + tau * prm.gamma * res)
            .transpose();
  }
  check_finite_tv(out.y, "dual update", s.iteration);
  return out;
}

TvState tv_run(TvState s, const TvOps& ops, const SamplerConfig& c,
               const TvHook& hook, const SmoothGradFn& extra_grad) {
  c.validate();
  if (hook) hook(s);
  for (int k = 0; k < c.n_iters; ++k) {
    s = tv_pd_step(s, ops, c, extra_grad);
    if (hook) hook(s);
  }
  return s;
}

}  // namespace brwp
