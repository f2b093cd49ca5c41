#include <brwp/samplers.hpp>

#include <cmath>
#include <sstream>
#include <utility>

#include <brwp/errors.hpp>
#include <brwp/rng.hpp>

namespace brwp {

namespace {

Eigen::MatrixXd drift_half_step(const Ensemble& e, const TargetSpec& t,
                                double h) {
  Eigen::MatrixXd xh = e.x;
  if (t.f_grad) {
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      const Eigen::VectorXd g = t.f_grad(e.x.row(i).transpose());
      if (g.size() != e.dim())
        throw config_error("brwp_step: f_grad returned wrong dimension");
      xh.row(i) -= h * g.transpose();
    }
  }
  return xh;
}

void check_finite(const Eigen::MatrixXd& x, const char* op, int iteration) {
  if (x.allFinite()) return;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (!x.row(i).allFinite()) {
      std::ostringstream msg;
      msg << op << ": non-finite particle " << i << " at iteration "
          << iteration;
      throw numeric_error(msg.str());
    }
  }
}

Eigen::MatrixXd shrink_rows(const Eigen::MatrixXd& x, double tau) {
  return x.unaryExpr([tau](double v) { return shrink(v, tau); });
}

const L1Nonsmooth& require_l1(const TargetSpec& t, const char* variant) {
  if (const auto* l1 = std::get_if<L1Nonsmooth>(&t.nonsmooth)) {
    if (l1->l1_weight < 0.0)
      throw config_error("brwp_step: l1_weight must be >= 0");
    return *l1;
  }
  throw config_error(std::string("brwp_step: the ") + variant +
                     " kernel requires the l1 nonsmooth term");
}

}  // namespace

void SamplerConfig::validate() const {
  if (!(h > 0.0)) throw config_error("SamplerConfig: h must be > 0");
  if (n_particles < 1)
    throw config_error("SamplerConfig: n_particles must be >= 1");
  if (n_iters < 0) throw config_error("SamplerConfig: n_iters must be >= 0");
  if (kde_sigma < 0.0)
    throw config_error("SamplerConfig: kde_sigma must be >= 0");
}

Ensemble init_ensemble(int n, int d, std::uint64_t seed, double spread,
                       const Eigen::VectorXd& center) {
  if (n < 1 || d < 1)
    throw std::invalid_argument("init_ensemble: n and d must be >= 1");
  if (spread < 0.0)
    throw std::invalid_argument("init_ensemble: spread must be >= 0");
  if (center.size() != 0 && center.size() != d)
    throw std::invalid_argument("init_ensemble: center has wrong dimension");

  Ensemble e;
  e.x.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index l = 0; l < d; ++l) {
      const std::uint64_t ctr =
          static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(d) +
          static_cast<std::uint64_t>(l);
      const double c = center.size() ? center(l) : 0.0;
      e.x(i, l) = c + spread * rng::normal(seed, rng::Stream::init_ensemble,
                                           ctr);
    }
  return e;
}

Ensemble brwp_step(const Ensemble& e, const TargetSpec& t,
                   const SamplerConfig& c) {
  c.validate();
  if (!(t.beta > 0.0)) throw config_error("brwp_step: beta must be > 0");
  if (e.size() < 1 || e.dim() < 1)
    throw config_error("brwp_step: empty ensemble");

  Ensemble half{drift_half_step(e, t, c.h), e.iteration};
  check_finite(half.x, "brwp_step", e.iteration);

  Ensemble out;
  out.iteration = e.iteration + 1;

  switch (c.kernel_variant) {
    case KernelVariant::delta: {
      const auto& l1 = require_l1(t, "delta");
      const ProxParams pp{l1.l1_weight, c.h, t.beta};
      const Eigen::MatrixXd m = interaction_l1_delta(half, pp);
      const Eigen::MatrixXd prox = shrink_rows(half.x, l1.l1_weight * c.h);
      out.x = half.x + 0.5 * (prox - m * half.x);
      break;
    }
    case KernelVariant::separable: {
      const auto& l1 = require_l1(t, "separable");
      const ProxParams pp{l1.l1_weight, c.h, t.beta};
      const SeparableInteraction s = separable_interaction_l1(half, pp);
      const Eigen::MatrixXd prox = shrink_rows(half.x, l1.l1_weight * c.h);
      out.x.resize(half.x.rows(), half.x.cols());
      for (Eigen::Index l = 0; l < half.dim(); ++l)
        out.x.col(l) =
            half.x.col(l) +
            0.5 * (prox.col(l) -
                   s.slice[static_cast<std::size_t>(l)] * half.x.col(l));
      break;
    }
    case KernelVariant::gaussian: {
      const auto& l1 = require_l1(t, "gaussian");
      const ProxParams pp{l1.l1_weight, c.h, t.beta};
      GaussianKernelParams kp;
      kp.sigma = c.kde_sigma > 0.0 ? c.kde_sigma : silverman_bandwidth(half);
      out.x.resize(half.x.rows(), half.x.cols());
      for (Eigen::Index i = 0; i < half.size(); ++i) {
        const Eigen::VectorXd q = half.x.row(i).transpose();
        const Eigen::VectorXd score = gaussian_kde_score(half, q, pp, kp);
        out.x.row(i) = (shrink(q, l1.l1_weight * c.h) -
                        (c.h / t.beta) * score)
                           .transpose();
      }
      break;
    }
    case KernelVariant::general: {
      const auto* g = std::get_if<GeneralNonsmooth>(&t.nonsmooth);
      if (!g || !g->g_value || !g->g_prox)
        throw config_error(
            "brwp_step: the general kernel requires g_value and g_prox "
            "callbacks");
      const ProxParams pp{0.0, c.h, t.beta};
      const Eigen::MatrixXd m =
          interaction_general_prox(half, g->g_value, g->g_prox, pp);
      Eigen::MatrixXd prox(half.x.rows(), half.x.cols());
      for (Eigen::Index i = 0; i < half.size(); ++i)
        prox.row(i) = g->g_prox(half.x.row(i).transpose(), c.h).transpose();
      out.x = half.x + 0.5 * (prox - m * half.x);
      break;
    }
  }

  check_finite(out.x, "brwp_step", e.iteration);
  return out;
}

Ensemble brwp_run(Ensemble e, const TargetSpec& t, const SamplerConfig& c,
                  const IterationHook& hook) {
  c.validate();
  if (hook) hook(e);
  for (int k = 0; k < c.n_iters; ++k) {
    e = brwp_step(e, t, c);
    if (hook) hook(e);
  }
  return e;
}

NoiseFn myula_default_noise(std::uint64_t seed, Eigen::Index n,
                            Eigen::Index d) {
  return [seed, n, d](int iteration, Eigen::Index i, Eigen::Index l) {
    const std::uint64_t ctr =
        (static_cast<std::uint64_t>(iteration) * static_cast<std::uint64_t>(n) +
         static_cast<std::uint64_t>(i)) *
            static_cast<std::uint64_t>(d) +
        static_cast<std::uint64_t>(l);
    return rng::normal(seed, rng::Stream::myula_noise, ctr);
  };
}

Ensemble myula_step(const Ensemble& e, const TargetSpec& t,
                    const SamplerConfig& c, const NoiseFn& noise) {
  c.validate();
  if (!(t.beta > 0.0)) throw config_error("myula_step: beta must be > 0");
  const NoiseFn& draw =
      noise ? noise : myula_default_noise(c.seed, e.size(), e.dim());
  const double sd = std::sqrt(2.0 * c.h / t.beta);

  Ensemble out;
  out.iteration = e.iteration + 1;
  out.x.resize(e.x.rows(), e.x.cols());
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const Eigen::VectorXd x = e.x.row(i).transpose();
    Eigen::VectorXd next = x;
    if (t.f_grad) next -= c.h * t.f_grad(x);
    // Moreau gradient of g at parameter 2h scaled by h: (x - prox)/2.
    Eigen::VectorXd prox2h;
    if (const auto* l1 = std::get_if<L1Nonsmooth>(&t.nonsmooth)) {
      prox2h = shrink(x, 2.0 * c.h * l1->l1_weight);
    } else {
      const auto& g = std::get<GeneralNonsmooth>(t.nonsmooth);
      if (!g.g_prox)
        throw config_error("myula_step: missing g_prox callback");
      prox2h = g.g_prox(x, 2.0 * c.h);
    }
    next -= 0.5 * (x - prox2h);
    for (Eigen::Index l = 0; l < e.dim(); ++l)
      next(l) += sd * draw(e.iteration, i, l);
    out.x.row(i) = next.transpose();
  }
  check_finite(out.x, "myula_step", e.iteration);
  return out;
}

Ensemble myula_run(Ensemble e, const TargetSpec& t, const SamplerConfig& c,
                   const IterationHook& hook) {
  c.validate();
  if (hook) hook(e);
  for (int k = 0; k < c.n_iters; ++k) {
    e = myula_step(e, t, c);
    if (hook) hook(e);
  }
  return e;
}

}  // namespace brwp
