#pragma once

#include <Eigen/Core>

namespace brwp {

// log(sum_i exp(v_i)) computed with the maximum shifted out so that inputs of
// any magnitude neither overflow nor underflow. Returns -inf for an empty
// vector or when every entry is -inf.
double logsumexp(const Eigen::VectorXd& v);

// w_i = exp(v_i - logsumexp(v)). The weights are nonnegative and sum to one
// up to roundoff. Entries equal to -inf receive exactly zero weight. Throws
// std::invalid_argument when the input is empty or every entry is -inf.
Eigen::VectorXd softmax_stable(const Eigen::VectorXd& v);

// \int_a^b e^{-y^2} dy = (sqrt(pi)/2)(erf(b) - erf(a)). Accepts +-inf limits.
// When both limits lie in the same tail the difference is formed through
// erfc so the result keeps relative precision instead of cancelling.
double erf_interval(double a, double b);

// log(erfc(x)) for any x, including the far right tail (x beyond ~26) where
// erfc itself underflows double precision; there an asymptotic expansion of
// the scaled complementary error function is used.
double log_erfc(double x);

// log of \int_a^b e^{-y^2} dy without underflow for intervals deep in either
// tail. Requires a <= b (returns -inf when a == b); limits may be +-inf.
double log_erf_interval(double a, double b);

}  // namespace brwp
