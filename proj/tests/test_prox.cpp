#include <gtest/gtest.h>

#include <brwp/prox.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace {

// Brute-force value of the Moreau envelope of lambda*|.| at parameter h:
//   env(x) = min_y lambda*|y| + (x - y)^2 / (2h),
// minimized by scanning a fine grid around the only two candidate regions
// (y near 0 and y near x). Independent of the shrink operator.
double moreau_env_bruteforce(double x, double lambda, double h) {
  const auto objective = [=](double y) {
    return lambda * std::abs(y) + (x - y) * (x - y) / (2.0 * h);
  };
  double lo = std::min(0.0, x) - 1.0, hi = std::max(0.0, x) + 1.0;
  const int n = 4000001;
  // The grid misses the objective's kink at y = 0 by up to half a step, and
  // at the kink the objective grows linearly, so probe it explicitly.
  double best = std::min(objective(0.0), objective(x));
  double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) best = std::min(best, objective(lo + i * step));
  return best;
}

TEST(Shrink, HandValues) {
  EXPECT_DOUBLE_EQ(brwp::shrink(3.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(brwp::shrink(-3.0, 1.0), -2.0);
  EXPECT_DOUBLE_EQ(brwp::shrink(0.4, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(brwp::shrink(-0.4, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(brwp::shrink(0.5, 0.1), 0.4);
}

TEST(Shrink, ExactlyAtThresholdGivesZero) {
  EXPECT_EQ(brwp::shrink(1.0, 1.0), 0.0);
  EXPECT_EQ(brwp::shrink(-1.0, 1.0), 0.0);
}

TEST(Shrink, ZeroThresholdIsIdentity) {
  EXPECT_DOUBLE_EQ(brwp::shrink(0.7, 0.0), 0.7);
  EXPECT_DOUBLE_EQ(brwp::shrink(-0.7, 0.0), -0.7);
}

TEST(Shrink, VectorVariantActsComponentwise) {
  Eigen::VectorXd x(3);
  x << 2.0, -0.1, 0.3;
  Eigen::VectorXd s = brwp::shrink(x, 0.3);
  EXPECT_DOUBLE_EQ(s[0], 1.7);
  EXPECT_DOUBLE_EQ(s[1], 0.0);
  EXPECT_DOUBLE_EQ(s[2], 0.0);
}

TEST(ProxParams, RejectsInvalidValues) {
  EXPECT_NO_THROW((brwp::ProxParams{0.0, 0.1, 1.0}.validate()));
  EXPECT_THROW((brwp::ProxParams{-0.1, 0.1, 1.0}.validate()),
               std::invalid_argument);
  EXPECT_THROW((brwp::ProxParams{1.0, 0.0, 1.0}.validate()),
               std::invalid_argument);
  EXPECT_THROW((brwp::ProxParams{1.0, 0.1, -1.0}.validate()),
               std::invalid_argument);
}

TEST(MoreauGradL1, ConsistencyWithShrinkIsExact) {
  brwp::ProxParams p{0.8, 0.25, 1.0};
  Eigen::VectorXd x(5);
  x << -3.0, -0.1, 0.0, 0.15, 2.4;
  Eigen::VectorXd g = brwp::moreau_grad_l1(x, p);
  Eigen::VectorXd s = brwp::shrink(x, p.lambda * p.h);
  for (int i = 0; i < x.size(); ++i) {
    EXPECT_DOUBLE_EQ(p.h * g[i] + s[i], x[i]);
  }
}

TEST(MoreauGradL1, BoundedByLambda) {
  brwp::ProxParams p{1.3, 0.05, 1.0};
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  Eigen::VectorXd x(200);
  for (int i = 0; i < x.size(); ++i) x[i] = u(gen);
  Eigen::VectorXd g = brwp::moreau_grad_l1(x, p);
  EXPECT_LE(g.cwiseAbs().maxCoeff(), p.lambda * (1.0 + 1e-12));
}

TEST(MoreauGradL1, MatchesFiniteDifferenceOfEnvelope) {
  // Central difference of the brute-force envelope. Points are kept away
  // from |x| = lambda*h where the second derivative jumps.
  const double lambda = 0.9, h = 0.2;
  brwp::ProxParams p{lambda, h, 1.0};
  for (double x0 : {-1.5, -0.05, 0.08, 0.6}) {
    const double eps = 1e-5;
    double fd = (moreau_env_bruteforce(x0 + eps, lambda, h) -
                 moreau_env_bruteforce(x0 - eps, lambda, h)) /
                (2.0 * eps);
    Eigen::VectorXd x(1);
    x << x0;
    EXPECT_NEAR(brwp::moreau_grad_l1(x, p)[0], fd, 5e-5) << "x=" << x0;
  }
}

TEST(ProxL2DataFit, PinnedScalarExample) {
  // F = I in one dimension, phi = 0, v = 1, h = 1 maps to (1 + h)^{-1} v.
  brwp::LinearDataFit data;
  data.F = Eigen::MatrixXd::Identity(1, 1);
  data.phi = Eigen::VectorXd::Zero(1);
  Eigen::VectorXd v(1);
  v << 1.0;
  Eigen::VectorXd u = brwp::prox_l2_datafit(v, data, 1.0);
  EXPECT_NEAR(u[0], 0.5, 1e-14);
}

TEST(ProxL2DataFit, OptimalityResidualIsTiny) {
  // The output solves (I + h F^T F) u = v + h F^T phi, i.e. it is the
  // stationary point of (1/2)||phi - F u||^2 + ||u - v||^2/(2h).
  std::mt19937_64 gen(23);
  std::normal_distribution<double> nd(0.0, 1.0);
  const int m = 7, d = 5;
  brwp::LinearDataFit data;
  data.F = Eigen::MatrixXd::NullaryExpr(m, d, [&] { return nd(gen); });
  data.phi = Eigen::VectorXd::NullaryExpr(m, [&] { return nd(gen); });
  Eigen::VectorXd v = Eigen::VectorXd::NullaryExpr(d, [&] { return nd(gen); });
  const double h = 0.3;
  Eigen::VectorXd u = brwp::prox_l2_datafit(v, data, h);
  Eigen::VectorXd grad = (u - v) / h + data.F.transpose() * (data.F * u - data.phi);
  EXPECT_LE(grad.norm(), 1e-8);
}

TEST(ProxL2DataFit, MatchesFullPivotSolve) {
  std::mt19937_64 gen(37);
  std::normal_distribution<double> nd(0.0, 1.0);
  const int m = 4, d = 6;  // wide operator: fewer measurements than unknowns
  brwp::LinearDataFit data;
  data.F = Eigen::MatrixXd::NullaryExpr(m, d, [&] { return nd(gen); });
  data.phi = Eigen::VectorXd::NullaryExpr(m, [&] { return nd(gen); });
  Eigen::VectorXd v = Eigen::VectorXd::NullaryExpr(d, [&] { return nd(gen); });
  const double h = 0.7;
  Eigen::MatrixXd A =
      Eigen::MatrixXd::Identity(d, d) + h * data.F.transpose() * data.F;
  Eigen::VectorXd want =
      A.fullPivLu().solve(v + h * data.F.transpose() * data.phi);
  Eigen::VectorXd got = brwp::prox_l2_datafit(v, data, h);
  EXPECT_LE((got - want).norm(), 1e-11 * want.norm());
}

TEST(ProxL2DataFit, CachedFunctorMatchesOneShotAcrossCalls) {
  std::mt19937_64 gen(41);
  std::normal_distribution<double> nd(0.0, 1.0);
  const int m = 5, d = 5;
  brwp::LinearDataFit data;
  data.F = Eigen::MatrixXd::NullaryExpr(m, d, [&] { return nd(gen); });
  data.phi = Eigen::VectorXd::NullaryExpr(m, [&] { return nd(gen); });
  brwp::L2DataFitProx prox(data, 0.15);
  for (int trial = 0; trial < 4; ++trial) {
    Eigen::VectorXd v =
        Eigen::VectorXd::NullaryExpr(d, [&] { return nd(gen); });
    Eigen::VectorXd a = prox(v);
    Eigen::VectorXd b = brwp::prox_l2_datafit(v, data, 0.15);
    EXPECT_LE((a - b).norm(), 1e-14 * (1.0 + b.norm()));
  }
}

TEST(ProjectLinfBall, HandValues) {
  Eigen::VectorXd y(4);
  y << 2.0, -0.5, -3.0, 1.0;
  Eigen::VectorXd py = brwp::project_linf_ball(y);
  EXPECT_DOUBLE_EQ(py[0], 1.0);
  EXPECT_DOUBLE_EQ(py[1], -0.5);
  EXPECT_DOUBLE_EQ(py[2], -1.0);
  EXPECT_DOUBLE_EQ(py[3], 1.0);
}

TEST(ProjectLinfBall, IdempotentAndFeasible) {
  std::mt19937_64 gen(53);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  Eigen::VectorXd y(50);
  for (int i = 0; i < y.size(); ++i) y[i] = u(gen);
  Eigen::VectorXd p1 = brwp::project_linf_ball(y);
  Eigen::VectorXd p2 = brwp::project_linf_ball(p1);
  EXPECT_LE(p1.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_EQ((p1 - p2).cwiseAbs().maxCoeff(), 0.0);
}

}  // namespace
