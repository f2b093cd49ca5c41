#include <brwp/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <brwp/errors.hpp>

namespace brwp {

namespace {

struct AdaptContext {
  const std::function<double(double)>& f;
  double noise_floor = 4e-15;
  bool depth_exhausted = false;
};

double simpson(double a, double fa, double m, double fm, double b, double fb) {
  (void)m;
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(AdaptContext& ctx, double a, double fa, double m, double fm,
             double b, double fb, double whole, double eps, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = ctx.f(lm);
  const double frm = ctx.f(rm);
  const double left = simpson(a, fa, lm, flm, m, fm);
  const double right = simpson(m, fm, rm, frm, b, fb);
  const double delta = left + right - whole;
  // Second clause: delta below the evaluation noise of the halves carries no
  // information, so refining further cannot improve the estimate.
  if (std::abs(delta) <= 15.0 * eps ||
      std::abs(delta) <= ctx.noise_floor * (std::abs(left) +
                                            std::abs(right) +
                                            std::abs(whole)))
    return left + right + delta / 15.0;
  if (depth <= 0) {
    ctx.depth_exhausted = true;
    return left + right + delta / 15.0;
  }
  return adapt(ctx, a, fa, lm, flm, m, fm, left, 0.5 * eps, depth - 1) +
         adapt(ctx, m, fm, rm, frm, b, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, std::vector<double> breakpoints,
                          double rel_tol, double abs_tol, double min_panel,
                          double noise_floor) {
  if (a == b) return 0.0;
  if (a > b) throw std::invalid_argument("integrate_adaptive: a > b");
  if (min_panel <= 0.0) min_panel = (b - a) / 64.0;

  std::vector<double> edges;
  edges.push_back(a);
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double t : breakpoints)
    if (t > a && t < b && t != edges.back()) edges.push_back(t);
  edges.push_back(b);

  // Uniform pre-partition of each breakpoint-delimited segment into panels no
  // wider than min_panel. Features at least min_panel wide are therefore
  // visible both to the tolerance scale below and to the initial Richardson
  // comparison in adapt; neither can be fooled by probe points that all miss
  // a narrow bump.
  struct Panel {
    double lo, mid, hi;
    double flo, fmid, fhi;
    double coarse;
  };
  std::vector<Panel> panels;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double lo = edges[s], hi = edges[s + 1];
    const auto n = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil((hi - lo) / min_panel)));
    double left_edge = lo;
    double f_left = f(left_edge);
    for (std::int64_t k = 0; k < n; ++k) {
      const double right_edge =
          (k + 1 == n) ? hi : lo + (hi - lo) * static_cast<double>(k + 1) /
                                       static_cast<double>(n);
      const double mid = 0.5 * (left_edge + right_edge);
      const double f_mid = f(mid);
      const double f_right = f(right_edge);
      panels.push_back({left_edge, mid, right_edge, f_left, f_mid, f_right,
                        simpson(left_edge, f_left, mid, f_mid, right_edge,
                                f_right)});
      left_edge = right_edge;
      f_left = f_right;
    }
  }

  double scale = 0.0;
  for (const Panel& p : panels) scale += std::abs(p.coarse);
  const double eps_total = std::max(abs_tol, rel_tol * scale);
  const double total_len = b - a;

  AdaptContext ctx{f, noise_floor};
  double result = 0.0;
  for (const Panel& p : panels) {
    const double eps = eps_total * (p.hi - p.lo) / total_len;
    result += adapt(ctx, p.lo, p.flo, p.mid, p.fmid, p.hi, p.fhi, p.coarse,
                    std::max(eps, 1e-300), 48);
  }
  if (ctx.depth_exhausted) {
    std::ostringstream msg;
    msg << "integrate_adaptive: recursion depth exhausted before reaching "
           "tolerance "
        << rel_tol;
    throw numeric_error(msg.str());
  }
  return result;
}

namespace {

// Shared body of the L1 score oracles. Integrates the shrink-substituted
// kernel (normalizer replaced by its value at the proximal point, the same
// construction every kernel variant uses):
//   w(q, y) = exp(-(beta/(4h)) (q-y)^2
//             + (beta/2) ((y - S(y))^2 / (2h) + lambda |S(y)|)),
// then score = -(beta/2) (q - S(q))/h + Num/Den with
//   Den = Int w rho dy, Num = Int -(beta/(2h)) (q-y) w rho dy.
double l1_score_oracle(const std::function<double(double)>& rho, double query,
                       const ProxParams& p, const ScoreOracleOptions& opt,
                       const std::vector<double>& extra_breakpoints) {
  p.validate();
  const double half = 10.0 * std::sqrt(p.h / p.beta) + opt.pad;
  const double tau = p.lambda * p.h;
  const auto w = [&](double y) {
    const double s = shrink(y, tau);
    const double lg = -(p.beta / (4.0 * p.h)) * (query - y) * (query - y) +
                      (p.beta / 2.0) * ((y - s) * (y - s) / (2.0 * p.h) +
                                        p.lambda * std::abs(s));
    return std::exp(lg) * rho(y);
  };
  std::vector<double> bps = {query, 0.0, -tau, tau};
  bps.insert(bps.end(), extra_breakpoints.begin(), extra_breakpoints.end());
  // The Gaussian factor in w has standard deviation sqrt(2h/beta); panels
  // must resolve that scale before the error estimate is trusted.
  const double panel = std::sqrt(p.h / p.beta);

  const double den = integrate_adaptive(w, query - half, query + half, bps,
                                        opt.rel_tol, 1e-300, panel);
  const auto num_f = [&](double y) {
    return -(p.beta / (2.0 * p.h)) * (query - y) * w(y);
  };
  const double num = integrate_adaptive(num_f, query - half, query + half, bps,
                                        opt.rel_tol, 1e-300, panel);
  if (!(den > 0.0) || !std::isfinite(num)) {
    std::ostringstream msg;
    msg << "quadrature_score_oracle: degenerate integrals, den=" << den;
    throw numeric_error(msg.str());
  }
  const double prior = -(p.beta / 2.0) * (query - shrink(query, tau)) / p.h;
  return prior + num / den;
}

}  // namespace

double quadrature_score_oracle(const std::function<double(double)>& rho,
                               double query, const ProxParams& p,
                               const ScoreOracleOptions& opt) {
  if (!rho) throw std::invalid_argument("quadrature_score_oracle: missing rho");
  return l1_score_oracle(rho, query, p, opt, {});
}

double quadrature_score_oracle(const Ensemble& ens,
                               const GaussianKernelParams& kp, double query,
                               const ProxParams& p,
                               const ScoreOracleOptions& opt) {
  if (ens.dim() != 1)
    throw std::invalid_argument("quadrature_score_oracle: ensemble must be 1-D");
  if (!(kp.sigma > 0.0))
    throw std::invalid_argument("quadrature_score_oracle: sigma must be > 0");
  const double norm =
      1.0 / (static_cast<double>(ens.size()) * kp.sigma *
             std::sqrt(2.0 * std::numbers::pi));
  const double inv_two_s2 = 1.0 / (2.0 * kp.sigma * kp.sigma);
  const auto rho = [&](double y) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < ens.size(); ++j) {
      const double d = y - ens.x(j, 0);
      acc += std::exp(-d * d * inv_two_s2);
    }
    return norm * acc;
  };
  std::vector<double> bps(ens.x.data(), ens.x.data() + ens.size());
  return l1_score_oracle(rho, query, p, opt, bps);
}

double quadrature_score_oracle_g(const std::function<double(double)>& rho,
                                 double query, double h, double beta,
                                 const std::function<double(double)>& g_value,
                                 double g_grad_query,
                                 const std::vector<double>& g_kinks,
                                 const ScoreOracleOptions& opt) {
  if (!rho || !g_value)
    throw std::invalid_argument("quadrature_score_oracle_g: missing callback");
  if (!(h > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("quadrature_score_oracle_g: h, beta must be > 0");
  const double half = 10.0 * std::sqrt(h / beta) + opt.pad;
  const double panel = std::sqrt(h / beta);
  // The normalizer below is itself an adaptive quadrature, so the outer
  // integrands carry its tolerance as evaluation noise. Run the inner
  // integral three digits tighter and hand exactly that noise level to the
  // outer calls, otherwise their refinement chases inner jitter forever.
  const double inner_rel = std::max(1e-14, 1e-3 * opt.rel_tol);
  const double outer_noise = 10.0 * inner_rel;

  const auto normalizer = [&](double y) {
    const auto inner = [&](double z) {
      return std::exp(-(beta / 2.0) *
                      (g_value(z) + (z - y) * (z - y) / (2.0 * h)));
    };
    std::vector<double> bps = g_kinks;
    bps.push_back(y);
    return integrate_adaptive(inner, y - half, y + half, bps, inner_rel,
                              1e-300, panel);
  };
  const auto w = [&](double y) {
    const double lg = -(beta / (4.0 * h)) * (query - y) * (query - y);
    return std::exp(lg) / normalizer(y) * rho(y);
  };

  std::vector<double> bps = g_kinks;
  bps.push_back(query);
  const double den = integrate_adaptive(w, query - half, query + half, bps,
                                        opt.rel_tol, 1e-300, panel,
                                        outer_noise);
  const auto num_f = [&](double y) {
    return -(beta / (2.0 * h)) * (query - y) * w(y);
  };
  const double num = integrate_adaptive(num_f, query - half, query + half, bps,
                                        opt.rel_tol, 1e-300, panel,
                                        outer_noise);
  if (!(den > 0.0) || !std::isfinite(num))
    throw numeric_error("quadrature_score_oracle_g: degenerate integrals");
  return -(beta / 2.0) * g_grad_query + num / den;
}

}  // namespace brwp
