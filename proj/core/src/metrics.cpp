#include <brwp/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <brwp/errors.hpp>
#include <brwp/special.hpp>

namespace brwp {

namespace {

constexpr double kDensityFloor = 1e-300;
constexpr double kMassWarningLevel = 0.999;

double trapezoid(const Grid1D& grid, const Eigen::VectorXd& values) {
  const double interior = values.sum() - 0.5 * (values(0) +
                                                values(values.size() - 1));
  return grid.spacing() * interior;
}

// log int exp(-(x - y)^2 / (2 sigma^2) - lambda |x|) dx via the two
// half-lines x >= 0 and x < 0; each completes the square and leaves a
// Gaussian tail integral evaluated in the log domain.
double log_tilted_factor(double y, double sigma, double lambda) {
  const double s = std::numbers::sqrt2 * sigma;
  if (lambda == 0.0) return std::log(s) + 0.5 * std::log(std::numbers::pi);
  const double half_l2s2 = 0.5 * lambda * lambda * sigma * sigma;
  const double inf = std::numeric_limits<double>::infinity();
  const double plus = std::log(s) + (-lambda * y + half_l2s2) +
                      log_erf_interval(-(y - lambda * sigma * sigma) / s, inf);
  const double minus = std::log(s) + (lambda * y + half_l2s2) +
                       log_erf_interval(-inf,
                                        -(y + lambda * sigma * sigma) / s);
  Eigen::Vector2d both(plus, minus);
  return logsumexp(both);
}

void finalize_mass(MarginalCurve& curve) {
  curve.mass = trapezoid(curve.grid, curve.density);
  curve.narrow_grid = curve.mass < kMassWarningLevel;
}

}  // namespace

void Grid1D::validate() const {
  if (!(lo < hi)) throw config_error("Grid1D: lo must be below hi");
  if (n_points < 2) throw config_error("Grid1D: need at least two points");
}

MarginalCurve mixture_marginal_exact(const MixtureSpec& spec, int dim,
                                     const Grid1D& grid) {
  spec.validate();
  grid.validate();
  const Eigen::Index d = spec.centers.cols();
  if (dim < 0 || dim >= d)
    throw config_error("mixture_marginal_exact: dim out of range");

  const Eigen::Index m = spec.centers.rows();
  const double inv_two_sigma_sq = 1.0 / (2.0 * spec.sigma * spec.sigma);

  // log_total(n) = sum_j log I(y_nj); the marginal along `dim` swaps that
  // coordinate's closed-form factor for the pointwise integrand.
  Eigen::VectorXd log_rest(m);
  Eigen::VectorXd log_total(m);
  for (Eigen::Index n = 0; n < m; ++n) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < d; ++j)
      if (j != dim)
        acc += log_tilted_factor(spec.centers(n, j), spec.sigma, spec.lambda);
    log_rest(n) = acc;
    log_total(n) =
        acc + log_tilted_factor(spec.centers(n, dim), spec.sigma, spec.lambda);
  }
  const double log_z = logsumexp(log_total);

  MarginalCurve curve;
  curve.grid = grid;
  curve.normalization = std::exp(log_z);
  curve.density.resize(grid.n_points);
  Eigen::VectorXd terms(m);
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = grid.point(i);
    for (Eigen::Index n = 0; n < m; ++n) {
      const double dx = x - spec.centers(n, dim);
      terms(n) = log_rest(n) - dx * dx * inv_two_sigma_sq -
                 spec.lambda * std::abs(x);
    }
    curve.density(i) = std::exp(logsumexp(terms) - log_z);
  }
  finalize_mass(curve);
  return curve;
}

MarginalCurve kde_on_grid(const Eigen::VectorXd& samples, double bandwidth_h,
                          const Grid1D& grid) {
  grid.validate();
  if (samples.size() < 1)
    throw config_error("kde_on_grid: need at least one sample");
  if (!(bandwidth_h > 0.0))
    throw config_error("kde_on_grid: bandwidth must be > 0");

  MarginalCurve curve;
  curve.grid = grid;
  curve.density.resize(grid.n_points);
  const double inv_two_h = 1.0 / (2.0 * bandwidth_h);
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = grid.point(i);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < samples.size(); ++j) {
      const double dx = x - samples(j);
      acc += std::exp(-dx * dx * inv_two_h);
    }
    curve.density(i) = acc;
  }
  const double total = trapezoid(grid, curve.density);
  if (!(total > 0.0))
    throw numeric_error("kde_on_grid: estimate vanishes on the grid");
  curve.density /= total;
  curve.normalization = total;
  finalize_mass(curve);
  return curve;
}

double kl_on_grid(const MarginalCurve& p, const MarginalCurve& q) {
  if (!(p.grid == q.grid))
    throw config_error("kl_on_grid: curves live on different grids");
  if (p.density.size() != p.grid.n_points ||
      q.density.size() != q.grid.n_points)
    throw config_error("kl_on_grid: curve does not match its grid");

  const Eigen::VectorXd pf = p.density.cwiseMax(kDensityFloor);
  const Eigen::VectorXd qf = q.density.cwiseMax(kDensityFloor);
  const double zp = trapezoid(p.grid, pf);
  const double zq = trapezoid(q.grid, qf);

  double acc = 0.0;
  for (Eigen::Index i = 0; i < pf.size(); ++i) {
    const double pi = pf(i) / zp;
    const double qi = qf(i) / zq;
    const double term = pi * std::log(pi / qi);
    const bool boundary = (i == 0 || i == pf.size() - 1);
    acc += (boundary ? 0.5 : 1.0) * term;
  }
  return std::max(0.0, p.grid.spacing() * acc);
}

double w2_1d(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size())
    throw config_error("w2_1d: sequences must have equal length");
  if (a.size() == 0) throw config_error("w2_1d: sequences are empty");
  std::vector<double> sa(a.data(), a.data() + a.size());
  std::vector<double> sb(b.data(), b.data() + b.size());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double diff = sa[i] - sb[i];
    acc += diff * diff;
  }
  return std::sqrt(acc / static_cast<double>(sa.size()));
}

double hpd_threshold(const Eigen::VectorXd& potential_values, double alpha) {
  if (potential_values.size() == 0)
    throw config_error("hpd_threshold: empty sample");
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw config_error("hpd_threshold: alpha must lie in (0, 1)");
  std::vector<double> v(potential_values.data(),
                        potential_values.data() + potential_values.size());
  std::sort(v.begin(), v.end());
  const auto n = static_cast<double>(v.size());
  const auto rank = static_cast<std::ptrdiff_t>(std::ceil((1.0 - alpha) * n));
  const std::ptrdiff_t idx = std::max<std::ptrdiff_t>(0, rank - 1);
  return v[static_cast<std::size_t>(idx)];
}

ErrorNorms error_norms(const Eigen::VectorXd& est,
                       const Eigen::VectorXd& truth, double peak) {
  if (est.size() != truth.size())
    throw config_error("error_norms: vectors must have equal length");
  if (est.size() == 0) throw config_error("error_norms: vectors are empty");
  const Eigen::VectorXd diff = est - truth;
  const auto d = static_cast<double>(est.size());
  ErrorNorms out;
  out.l1_rel = diff.lpNorm<1>() / d;
  out.rmse = std::sqrt(diff.squaredNorm() / d);
  const double range =
      peak >= 0.0 ? peak : truth.maxCoeff() - truth.minCoeff();
  out.psnr = out.rmse == 0.0 ? std::numeric_limits<double>::infinity()
                             : 20.0 * std::log10(range / out.rmse);
  return out;
}

}  // namespace brwp
