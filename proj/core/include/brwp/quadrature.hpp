#pragma once

#include <functional>
#include <vector>

#include <brwp/kernels.hpp>
#include <brwp/prox.hpp>

namespace brwp {

// Adaptive Simpson integration of f over [a, b]. The interval is first split
// at the interior breakpoints (integrand kinks, spikes), then each smooth
// piece is refined recursively until the local Richardson error estimate
// meets the tolerance. rel_tol applies to a coarse estimate of the total
// absolute mass; abs_tol is an absolute floor for integrals near zero.
// Subdivision is forced down to panels of width min_panel before the error
// estimate may accept, so features wider than min_panel cannot slip between
// probe points (0 picks (b-a)/64). Narrower features still need a
// breakpoint. noise_floor is the relative evaluation noise of f itself:
// refinement stops once the Richardson delta falls below that fraction of
// the local mass, since further subdivision would only chase noise. The
// default matches plain floating-point roundoff; integrands that contain an
// inner quadrature must pass their inner tolerance here.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, std::vector<double> breakpoints = {},
                          double rel_tol = 1e-10, double abs_tol = 1e-300,
                          double min_panel = 0.0, double noise_floor = 4e-15);

struct ScoreOracleOptions {
  double rel_tol = 1e-9;   // per-integral Simpson tolerance
  double pad = 10.0;       // extra half-width added beyond 10 sqrt(h/beta)
};

// Reference score of the kernel-smoothed density by nested 1-D quadrature,
// for an L1 nonsmooth term. rho is the unnormalized sampling density. The
// smoothed density is
//   K rho (x) = exp(-(beta/2) g_h(x)) Int exp(-(beta/(4h)) (x-y)^2) / D(y) rho(y) dy,
//   D(y)      = Int exp(-(beta/2) (lambda |z| + (z-y)^2/(2h))) dz,
// and the score splits into the prior gradient taken through the shrink at
// the query plus a ratio of two outer integrals. Slow but independent of the
// closed-form factorization; used as the test oracle.
double quadrature_score_oracle(const std::function<double(double)>& rho,
                               double query, const ProxParams& p,
                               const ScoreOracleOptions& opt = {});

// Same oracle with rho given by the Gaussian KDE of a 1-D ensemble.
double quadrature_score_oracle(const Ensemble& ens,
                               const GaussianKernelParams& kp, double query,
                               const ProxParams& p,
                               const ScoreOracleOptions& opt = {});

// General smooth-or-kinked g variant: g_value defines the inner integrand,
// g_grad_query supplies the prior gradient at the query point, and g_kinks
// lists integration breakpoints of g (empty for smooth g).
double quadrature_score_oracle_g(const std::function<double(double)>& rho,
                                 double query, double h, double beta,
                                 const std::function<double(double)>& g_value,
                                 double g_grad_query,
                                 const std::vector<double>& g_kinks = {},
                                 const ScoreOracleOptions& opt = {});

}  // namespace brwp
