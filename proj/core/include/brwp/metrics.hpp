#pragma once

#include <Eigen/Core>

#include <brwp/problems.hpp>

namespace brwp {

// Uniform evaluation grid. The defaults cover the mixture experiment:
// centers in [-10, 10] plus five standard deviations of slack.
struct Grid1D {
  double lo = -30.0;
  double hi = 30.0;
  int n_points = 2001;
  void validate() const;
  double spacing() const { return (hi - lo) / (n_points - 1); }
  double point(int i) const { return lo + spacing() * i; }
  bool operator==(const Grid1D&) const = default;
};

// One-dimensional density sampled on a grid. `density` holds normalized
// values; `normalization` is the analytic constant divided out (the trapezoid
// constant for KDE curves); `mass` is the trapezoid integral of the stored
// curve, and narrow_grid flags mass below 0.999 (grid clips the density).
struct MarginalCurve {
  Grid1D grid;
  Eigen::VectorXd density;
  double normalization = 1.0;
  double mass = 1.0;
  bool narrow_grid = false;
};

// Exact marginal of the L1-tilted Gaussian mixture along coordinate `dim`.
// Each coordinate factor integrates in closed form through the two half-line
// pieces exp(-(y^2 - (y -+ lambda sigma^2)^2) / (2 sigma^2)) times Gaussian
// tail integrals; evaluation runs in the log domain.
MarginalCurve mixture_marginal_exact(const MixtureSpec& spec, int dim,
                                     const Grid1D& grid);

// Gaussian kernel density estimate sum_j exp(-(x - s_j)^2 / (2 H)) normalized
// on the grid by the trapezoid rule. H acts as the squared bandwidth.
MarginalCurve kde_on_grid(const Eigen::VectorXd& samples, double bandwidth_h,
                          const Grid1D& grid);

// Trapezoid approximation of KL(p || q) = int p log(p / q). Both curves are
// floored at 1e-300 and renormalized first; identical curves give exactly 0.
double kl_on_grid(const MarginalCurve& p, const MarginalCurve& q);

// One-dimensional Wasserstein-2 distance between empirical measures of equal
// size: the root mean square difference of the sorted samples.
double w2_1d(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Empirical (1-alpha)-quantile of potential values with the lower
// interpolation convention: the smallest sample value whose empirical CDF
// reaches 1 - alpha. Monotone non-increasing in alpha.
double hpd_threshold(const Eigen::VectorXd& potential_values, double alpha);

struct ErrorNorms {
  double l1_rel = 0.0;  // ||est - truth||_1 / d
  double rmse = 0.0;
  double psnr = 0.0;  // 20 log10(peak / rmse), +inf when rmse = 0
};

// peak < 0 picks the default max(truth) - min(truth).
ErrorNorms error_norms(const Eigen::VectorXd& est, const Eigen::VectorXd& truth,
                       double peak = -1.0);

}  // namespace brwp
