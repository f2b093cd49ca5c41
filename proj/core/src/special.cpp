#include <brwp/special.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace brwp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogSqrtPiHalf = std::log(std::sqrt(M_PI) / 2.0);

// log(1 - e^x) for x < 0, precise both near 0 and for very negative x.
double log1mexp(double x) {
  if (x >= 0.0) throw std::invalid_argument("log1mexp requires x < 0");
  // Crossover at -log 2 keeps both branches well conditioned.
  return (x > -M_LN2) ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}
}  // namespace

double logsumexp(const Eigen::VectorXd& v) {
  if (v.size() == 0) return -kInf;
  const double m = v.maxCoeff();
  if (m == -kInf) return -kInf;
  if (m == kInf) return kInf;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::exp(v[i] - m);
  return m + std::log(s);
}

Eigen::VectorXd softmax_stable(const Eigen::VectorXd& v) {
  if (v.size() == 0) {
    throw std::invalid_argument("softmax_stable: empty input");
  }
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) {
    throw std::invalid_argument(
        "softmax_stable: maximum entry must be finite");
  }
  Eigen::VectorXd w(v.size());
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    w[i] = std::exp(v[i] - m);
    s += w[i];
  }
  return w / s;
}

double erf_interval(double a, double b) {
  const double scale = std::sqrt(M_PI) / 2.0;
  // Same-sign limits: route through erfc, which stays O(result) in the tail
  // where erf(b) - erf(a) would cancel catastrophically.
  if (a >= 0.0 && b >= 0.0) return scale * (std::erfc(a) - std::erfc(b));
  if (a <= 0.0 && b <= 0.0) return scale * (std::erfc(-b) - std::erfc(-a));
  return scale * (std::erf(b) - std::erf(a));
}

double log_erfc(double x) {
  if (x < 25.0) return std::log(std::erfc(x));
  // Asymptotic series erfc(x) ~ e^{-x^2}/(x sqrt(pi)) sum_k (-1)^k (2k-1)!!/(2x^2)^k.
  // At x = 25 ten terms leave a relative error below 1e-16.
  const double inv2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0, series = 1.0;
  for (int k = 1; k <= 10; ++k) {
    term *= -(2.0 * k - 1.0) * inv2x2;
    series += term;
  }
  return -x * x - std::log(x) - 0.5 * std::log(M_PI) + std::log(series);
}

double log_erf_interval(double a, double b) {
  if (!(a <= b)) {
    throw std::invalid_argument("log_erf_interval requires a <= b");
  }
  if (a == b) return -kInf;
  if (a >= 0.0) {
    // Both limits in the right tail (or b = +inf):
    //   log((sqrt(pi)/2)(erfc(a) - erfc(b))).
    const double la = log_erfc(a);
    if (b == kInf) return kLogSqrtPiHalf + la;
    const double lb = log_erfc(b);
    return kLogSqrtPiHalf + la + log1mexp(lb - la);
  }
  if (b <= 0.0) {
    // Mirror of the right-tail case.
    const double lb = log_erfc(-b);
    if (a == -kInf) return kLogSqrtPiHalf + lb;
    const double la = log_erfc(-a);
    return kLogSqrtPiHalf + lb + log1mexp(la - lb);
  }
  // Interval straddles zero: both erf terms add, no cancellation.
  return std::log(erf_interval(a, b));
}

}  // namespace brwp
