#pragma once

#include <cstdint>
#include <functional>
#include <variant>

#include <Eigen/Core>

#include <brwp/kernels.hpp>
#include <brwp/prox.hpp>

namespace brwp {

// Nonsmooth part g of the target: either a weighted L1 norm or a general
// convex term given by value and proximal callbacks.
struct L1Nonsmooth {
  double l1_weight = 1.0;  // lambda in g(x) = lambda ||x||_1, >= 0
};
struct GeneralNonsmooth {
  GValueFn g_value;
  GProxFn g_prox;  // g_prox(x, h) = argmin_z g(z) + ||z - x||^2 / (2h)
};

// Target density rho*(x) = (1/Z) exp(-beta (f(x) + g(x))) described by the
// smooth part f (value and gradient callbacks; empty means f = 0) and the
// nonsmooth part g.
struct TargetSpec {
  std::function<double(const Eigen::VectorXd&)> f_value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f_grad;
  std::variant<L1Nonsmooth, GeneralNonsmooth> nonsmooth = L1Nonsmooth{};
  double beta = 1.0;
};

// Interaction matrix used in the second half-step. delta, gaussian and
// separable require the L1 nonsmooth term; general requires callbacks.
enum class KernelVariant { delta, gaussian, separable, general };

struct SamplerConfig {
  double h = 0.1;
  int n_particles = 100;
  int n_iters = 100;
  KernelVariant kernel_variant = KernelVariant::delta;
  std::uint64_t seed = 0;
  double kde_sigma = 0.0;  // gaussian variant bandwidth; 0 picks the
                           // Silverman rule from the current ensemble

  // Throws config_error when a field is out of range.
  void validate() const;
};

// I.i.d. Gaussian cloud with per-coordinate standard deviation `spread`
// centered at `center` (origin when empty), reproducible from the seed.
Ensemble init_ensemble(int n, int d, std::uint64_t seed, double spread = 1.0,
                       const Eigen::VectorXd& center = {});

// One deterministic interacting-particle step: the drift half-step
// x^{k+1/2} = x^k - h grad f(x^k) followed by the proximal averaging
// x^{k+1} = x^{k+1/2} + (1/2)(prox(x^{k+1/2}) - M x^{k+1/2}) where M is the
// kernel_variant interaction built from the half-step ensemble. The gaussian
// variant uses the equivalent score form
// x^{k+1} = prox(x^{k+1/2}) - h beta^{-1} score(x^{k+1/2}).
// Throws config_error on kernel/nonsmooth mismatch and numeric_error (with
// iteration and particle index) if any updated coordinate is non-finite.
Ensemble brwp_step(const Ensemble& e, const TargetSpec& t,
                   const SamplerConfig& c);

// Called once with the initial ensemble, then once after every step.
using IterationHook = std::function<void(const Ensemble&)>;

// Runs c.n_iters steps of brwp_step. Deterministic given the inputs.
Ensemble brwp_run(Ensemble e, const TargetSpec& t, const SamplerConfig& c,
                  const IterationHook& hook = {});

// Standard normal draw for (iteration, particle, coordinate); tests may
// substitute a deterministic stub.
using NoiseFn =
    std::function<double(int iteration, Eigen::Index particle,
                         Eigen::Index coord)>;

// Counter-based noise source used by myula_step when none is supplied; n and
// d flatten (iteration, particle, coord) into a draw counter.
NoiseFn myula_default_noise(std::uint64_t seed, Eigen::Index n,
                            Eigen::Index d);

// One Moreau-Yosida regularized Langevin step, run as independent chains:
// x' = x - h grad f(x) - (x - prox_g(x, 2h))/2 + sqrt(2h/beta) xi.
Ensemble myula_step(const Ensemble& e, const TargetSpec& t,
                    const SamplerConfig& c, const NoiseFn& noise = {});

Ensemble myula_run(Ensemble e, const TargetSpec& t, const SamplerConfig& c,
                   const IterationHook& hook = {});

}  // namespace brwp
