#include <brwp/kernels.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include <brwp/special.hpp>

namespace brwp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

// A real number carried as sign * exp(lg); sign 0 encodes exact zero.
struct SignedLog {
  double lg = kNegInf;
  double sign = 0.0;
};

SignedLog signed_sum(const std::vector<SignedLog>& terms) {
  double m = kNegInf;
  for (const auto& t : terms)
    if (t.sign != 0.0 && t.lg > m) m = t.lg;
  if (m == kNegInf) return {};
  double acc = 0.0;
  for (const auto& t : terms)
    if (t.sign != 0.0) acc += t.sign * std::exp(t.lg - m);
  if (acc == 0.0) return {};
  return {m + std::log(std::abs(acc)), acc > 0.0 ? 1.0 : -1.0};
}

// Per-dimension factors of the Gaussian-KDE smoothed density at scalar query
// coordinate x against particle coordinate z:
//   T(x, z) = Int exp(-(beta/(4h)) [(1+c) y^2 - 2 y b(x,z,y-region)]
//              + region constant) dy,  S = dT/dx,
// where the integral splits at the shrink kinks +-lambda h into two erf
// tails and one erf window, each with the square completed analytically.
// Everything is kept in log space; the boundary exponents of S use the
// algebraically reduced forms, which are free of large-term cancellation.
struct DimFactors {
  double log_t = kNegInf;
  SignedLog s;
};

DimFactors ts_factors(double x, double z, double h, double beta,
                      double lambda, double c) {
  const double lh = lambda * h;
  const double xz = x + c * z;
  const double b_plus = xz + lh;
  const double b_minus = xz - lh;
  const double one_c = 1.0 + c;

  const double r1 = std::sqrt(beta * one_c / (4.0 * h));
  const double u1 = r1 * (lh - b_plus / one_c);
  const double u2 = r1 * (-lh - b_minus / one_c);
  const double e1 =
      -(beta / (4.0 * h)) * (lh * lh - b_plus * b_plus / one_c);
  const double e2 =
      -(beta / (4.0 * h)) * (lh * lh - b_minus * b_minus / one_c);
  const double log_k1 = 0.5 * std::log(4.0 * h / (beta * one_c));

  const double log_t1 = log_k1 + log_erf_interval(u1, kPosInf) + e1;
  const double log_t2 = log_k1 + log_erf_interval(kNegInf, u2) + e2;

  double log_t3 = kNegInf;
  double l3 = 0.0, r3edge = 0.0, e3 = 0.0;
  if (lambda > 0.0) {
    const double r3 = std::sqrt(c * beta / (4.0 * h));
    const double m3 = xz / c;
    l3 = r3 * (-lh - m3);
    r3edge = r3 * (lh - m3);
    e3 = (beta / (4.0 * h)) * xz * xz / c;
    log_t3 = 0.5 * std::log(4.0 * h / (c * beta)) +
             log_erf_interval(l3, r3edge) + e3;
  }

  Eigen::Vector3d parts(log_t1, log_t2, log_t3);
  DimFactors out;
  out.log_t = logsumexp(parts);

  // Reduced boundary exponents: bnd1 = -u1^2 + e1, bnd2 = -u2^2 + e2,
  // bnd3r = -r3edge^2 + e3, bnd3l = -l3^2 + e3.
  const double bnd1 = -(beta * lambda / 4.0) * ((2.0 + c) * lh - 2.0 * b_plus);
  const double bnd2 = -(beta * lambda / 4.0) * ((2.0 + c) * lh + 2.0 * b_minus);
  const double c1 = (beta / 2.0) * b_plus / (h * one_c);
  const double c2 = (beta / 2.0) * b_minus / (h * one_c);

  std::vector<SignedLog> s_terms;
  s_terms.reserve(7);
  const auto push_scaled = [&](double coeff, double lg) {
    if (coeff == 0.0 || lg == kNegInf) return;
    s_terms.push_back(
        {std::log(std::abs(coeff)) + lg, coeff > 0.0 ? 1.0 : -1.0});
  };
  push_scaled(c1, log_t1);
  s_terms.push_back({bnd1 - std::log1p(c), 1.0});
  push_scaled(c2, log_t2);
  s_terms.push_back({bnd2 - std::log1p(c), -1.0});
  if (lambda > 0.0) {
    const double c3 = (beta / 2.0) * xz / (h * c);
    const double bnd3r =
        -c * beta * lambda * lambda * h / 4.0 + (beta * lambda / 2.0) * xz;
    const double bnd3l =
        -c * beta * lambda * lambda * h / 4.0 - (beta * lambda / 2.0) * xz;
    push_scaled(c3, log_t3);
    s_terms.push_back({bnd3r - std::log(c), -1.0});
    s_terms.push_back({bnd3l - std::log(c), 1.0});
  }
  out.s = signed_sum(s_terms);
  return out;
}

}  // namespace

Eigen::VectorXd gaussian_kde_score(const Ensemble& ens,
                                   const Eigen::VectorXd& query,
                                   const ProxParams& p,
                                   const GaussianKernelParams& kp) {
  p.validate();
  if (!(kp.sigma > 0.0))
    throw std::invalid_argument("gaussian_kde_score: sigma must be > 0");
  const auto n = ens.size();
  const auto d = ens.dim();
  if (n == 0) throw std::invalid_argument("gaussian_kde_score: empty ensemble");
  if (query.size() != d)
    throw std::invalid_argument("gaussian_kde_score: query dimension mismatch");

  const double c = 2.0 * p.h / (kp.sigma * kp.sigma * p.beta);

  Eigen::MatrixXd log_t(n, d);
  std::vector<std::vector<SignedLog>> s(static_cast<std::size_t>(n),
                                        std::vector<SignedLog>(d));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index l = 0; l < d; ++l) {
      const DimFactors f =
          ts_factors(query[l], ens.x(j, l), p.h, p.beta, p.lambda, c);
      log_t(j, l) = f.log_t;
      s[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] = f.s;
    }

  const double inv_two_s2 = 1.0 / (2.0 * kp.sigma * kp.sigma);
  Eigen::VectorXd log_w(n);
  for (Eigen::Index j = 0; j < n; ++j)
    log_w[j] = -ens.x.row(j).squaredNorm() * inv_two_s2;

  Eigen::VectorXd den_terms(n);
  for (Eigen::Index j = 0; j < n; ++j)
    den_terms[j] = log_w[j] + log_t.row(j).sum();
  const double log_den = logsumexp(den_terms);

  Eigen::VectorXd score(d);
  std::vector<SignedLog> num_terms(static_cast<std::size_t>(n));
  for (Eigen::Index l = 0; l < d; ++l) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // Product of T over dimensions m != l, summed directly so that an
      // underflowed factor never corrupts the exclusion by subtraction.
      double log_t_excl = 0.0;
      for (Eigen::Index m = 0; m < d; ++m)
        if (m != l) log_t_excl += log_t(j, m);
      const SignedLog& sj = s[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
      num_terms[static_cast<std::size_t>(j)] = {log_w[j] + log_t_excl + sj.lg,
                                                sj.sign};
    }
    const SignedLog num = signed_sum(num_terms);
    const double ratio = num.sign * std::exp(num.lg - log_den);
    score[l] = -(p.beta / 2.0) * (query[l] - shrink(query[l], p.lambda * p.h)) / p.h -
               (p.beta / (2.0 * p.h)) * query[l] + ratio;
  }
  return score;
}

}  // namespace brwp
