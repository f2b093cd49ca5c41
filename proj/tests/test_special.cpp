#include <gtest/gtest.h>

#include <brwp/special.hpp>

#include <cmath>
#include <limits>
#include <random>

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Reference quadrature for \int_a^b e^{-y^2} dy on a finite interval:
// composite Simpson in long double with enough panels that the error is far
// below the tolerances used in the assertions. Independent of erf/erfc.
long double simpson_exp_neg_sq(long double a, long double b, int panels) {
  auto f = [](long double t) { return std::exp(-t * t); };
  long double s = f(a) + f(b);
  long double half = (b - a) / (2.0L * panels);
  for (int i = 1; i < 2 * panels; ++i) {
    s += f(a + half * i) * ((i % 2) ? 4.0L : 2.0L);
  }
  return s * half / 3.0L;
}

// Reference for log(erfc(x)) at large x via the shifted integral
//   erfc(x) = (2/sqrt(pi)) e^{-x^2} \int_0^\infty e^{-2xs - s^2} ds,
// so the integral is O(1) and the large exponent is handled analytically.
long double log_erfc_reference(long double x) {
  auto f = [&](long double s) { return std::exp(-2.0L * x * s - s * s); };
  long double upper = 50.0L / (2.0L * x) + 2.0L;  // integrand < 1e-21 beyond
  int n = 400000;
  long double hstep = upper / (2 * n);
  long double acc = f(0.0L) + f(upper);
  for (int i = 1; i < 2 * n; ++i) {
    acc += f(hstep * i) * ((i % 2) ? 4.0L : 2.0L);
  }
  long double integral = acc * hstep / 3.0L;
  return std::log(2.0L / std::sqrt(M_PIl)) - x * x + std::log(integral);
}

TEST(LogSumExp, MatchesDirectSumForModerateInputs) {
  Eigen::VectorXd v(4);
  v << 0.3, -1.2, 2.0, 0.0;
  long double direct = 0.0L;
  for (int i = 0; i < v.size(); ++i) direct += std::exp((long double)v[i]);
  EXPECT_NEAR(brwp::logsumexp(v), (double)std::log(direct), 1e-15);
}

TEST(LogSumExp, StableForLargePositiveInputs) {
  Eigen::VectorXd v(2);
  v << 1000.0, 1000.0;
  EXPECT_NEAR(brwp::logsumexp(v), 1000.0 + std::log(2.0), 1e-12);
}

TEST(LogSumExp, StableForLargeNegativeInputs) {
  Eigen::VectorXd v(2);
  v << -1e9, 0.0;
  EXPECT_NEAR(brwp::logsumexp(v), 0.0, 1e-15);
}

TEST(LogSumExp, AllNegativeInfinityGivesNegativeInfinity) {
  Eigen::VectorXd v = Eigen::VectorXd::Constant(3, -kInf);
  EXPECT_EQ(brwp::logsumexp(v), -kInf);
}

TEST(LogSumExp, SingleEntryIsIdentity) {
  Eigen::VectorXd v(1);
  v << -3.75;
  EXPECT_EQ(brwp::logsumexp(v), -3.75);
}

TEST(SoftmaxStable, SumsToOneWithinTolerance) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-700.0, 700.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd v(17);
    for (int i = 0; i < v.size(); ++i) v[i] = u(gen);
    Eigen::VectorXd w = brwp::softmax_stable(v);
    EXPECT_NEAR(w.sum(), 1.0, 1e-12);
    EXPECT_GE(w.minCoeff(), 0.0);
  }
}

TEST(SoftmaxStable, ShiftInvariant) {
  Eigen::VectorXd v(3);
  v << 0.1, -0.4, 1.7;
  Eigen::VectorXd w0 = brwp::softmax_stable(v);
  Eigen::VectorXd w1 = brwp::softmax_stable((v.array() + 12345.0).matrix());
  // The shifted inputs themselves lose low bits, so the weights can move by
  // a few ulps of the shift magnitude.
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(w0[i], w1[i], 1e-12);
}

TEST(SoftmaxStable, EqualEntriesGiveUniformWeights) {
  Eigen::VectorXd v = Eigen::VectorXd::Constant(5, -3.0);
  Eigen::VectorXd w = brwp::softmax_stable(v);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(w[i], 0.2, 1e-15);
}

TEST(SoftmaxStable, MinusInfinityEntriesGetZeroWeight) {
  Eigen::VectorXd v(3);
  v << 0.0, -kInf, 1.0;
  Eigen::VectorXd w = brwp::softmax_stable(v);
  EXPECT_EQ(w[1], 0.0);
  EXPECT_NEAR(w.sum(), 1.0, 1e-12);
}

TEST(ErfInterval, MatchesSimpsonOnFiniteIntervals) {
  // (a, b) pairs exercising symmetric, shifted, and narrow intervals.
  const double cases[][2] = {{0.0, 1.0}, {-2.0, 3.0},   {1.5, 1.6},
                             {-4.0, -3.0}, {0.25, 4.75}, {-0.5, 0.5}};
  for (auto& c : cases) {
    long double want = simpson_exp_neg_sq(c[0], c[1], 20000);
    EXPECT_NEAR(brwp::erf_interval(c[0], c[1]), (double)want,
                1e-14 * std::abs((double)want) + 1e-16)
        << "a=" << c[0] << " b=" << c[1];
  }
}

TEST(ErfInterval, KnownValues) {
  const double sqrt_pi = std::sqrt(M_PI);
  EXPECT_NEAR(brwp::erf_interval(-kInf, kInf), sqrt_pi, 1e-15);
  EXPECT_NEAR(brwp::erf_interval(0.0, kInf), sqrt_pi / 2.0, 1e-15);
  EXPECT_NEAR(brwp::erf_interval(-kInf, 0.0), sqrt_pi / 2.0, 1e-15);
  // (sqrt(pi)/2) * erf(1), long-established reference value.
  EXPECT_NEAR(brwp::erf_interval(0.0, 1.0), 0.7468241328124271,
              0.7468241328124271 * 1e-14);
}

TEST(ErfInterval, AntisymmetricInLimits) {
  EXPECT_DOUBLE_EQ(brwp::erf_interval(1.0, 2.0), -brwp::erf_interval(2.0, 1.0));
}

TEST(ErfInterval, FarTailKeepsRelativePrecision) {
  // Both limits deep in the right tail: naive erf(b)-erf(a) cancels to zero;
  // the reference comes from the shifted-integrand identity
  //   \int_a^b e^{-y^2} dy = e^{-a^2} \int_0^{b-a} e^{-2as - s^2} ds.
  double a = 6.0, b = 6.5;
  auto f = [&](long double s) { return std::exp(-2.0L * (long double)a * s - s * s); };
  int n = 200000;
  long double up = b - a, hstep = up / (2 * n);
  long double acc = f(0.0L) + f(up);
  for (int i = 1; i < 2 * n; ++i) acc += f(hstep * i) * ((i % 2) ? 4.0L : 2.0L);
  long double want = std::exp((long double)(-a * a)) * (acc * hstep / 3.0L);
  EXPECT_NEAR(brwp::erf_interval(a, b) / (double)want, 1.0, 1e-12);
}

TEST(LogErfc, MatchesLogOfStdErfcInModerateRange) {
  for (double x : {-5.0, -1.0, 0.0, 0.5, 3.0, 10.0, 20.0}) {
    EXPECT_NEAR(brwp::log_erfc(x), std::log(std::erfc(x)),
                std::abs(std::log(std::erfc(x))) * 1e-13 + 1e-13)
        << "x=" << x;
  }
}

TEST(LogErfc, FarTailMatchesShiftedQuadrature) {
  for (double x : {26.0, 30.0, 50.0, 100.0, 1000.0}) {
    long double want = log_erfc_reference(x);
    EXPECT_NEAR(brwp::log_erfc(x) / (double)want, 1.0, 1e-13) << "x=" << x;
  }
}

TEST(LogErfInterval, AgreesWithPlainErfIntervalWhereBothWork) {
  const double cases[][2] = {{0.0, 1.0}, {-2.0, 3.0}, {1.5, 1.6}, {-4.0, -3.0}};
  for (auto& c : cases) {
    double plain = brwp::erf_interval(c[0], c[1]);
    EXPECT_NEAR(brwp::log_erf_interval(c[0], c[1]), std::log(plain),
                std::abs(std::log(plain)) * 1e-12 + 1e-12);
  }
}

TEST(LogErfInterval, FarTailAgreesWithShiftedQuadrature) {
  // log \int_a^b e^{-y^2} dy = -a^2 + log \int_0^{b-a} e^{-2as-s^2} ds.
  double a = 40.0, b = 41.0;
  auto f = [&](long double s) { return std::exp(-2.0L * (long double)a * s - s * s); };
  int n = 200000;
  long double up = b - a, hstep = up / (2 * n);
  long double acc = f(0.0L) + f(up);
  for (int i = 1; i < 2 * n; ++i) acc += f(hstep * i) * ((i % 2) ? 4.0L : 2.0L);
  long double want = -(long double)a * a + std::log(acc * hstep / 3.0L);
  EXPECT_NEAR(brwp::log_erf_interval(a, b) / (double)want, 1.0, 1e-13);
}

TEST(LogErfInterval, HalfLineSentinels) {
  EXPECT_NEAR(brwp::log_erf_interval(-kInf, kInf), std::log(std::sqrt(M_PI)),
              1e-15);
  EXPECT_NEAR(brwp::log_erf_interval(0.0, kInf), std::log(std::sqrt(M_PI) / 2),
              1e-15);
  // Deep one-sided tail: reduces to log((sqrt(pi)/2) erfc(a)).
  double a = 35.0;
  long double want = std::log(std::sqrt(M_PIl) / 2.0L) + log_erfc_reference(a);
  EXPECT_NEAR(brwp::log_erf_interval(a, kInf) / (double)want, 1.0, 1e-13);
}

TEST(LogErfInterval, EmptyIntervalIsMinusInfinity) {
  EXPECT_EQ(brwp::log_erf_interval(1.0, 1.0), -kInf);
}

}  // namespace
