#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace brwp {

// One oracle comparison: error checks pass when measured <= limit, slope
// checks (larger_is_better) when measured >= limit.
struct ValidationCheck {
  std::string name;
  double measured = 0.0;
  double limit = 0.0;
  bool larger_is_better = false;
  bool pass = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_pass() const;
};

// Cross-checks the kernel implementations against independent oracles:
//   gaussian_score_vs_quadrature  closed-form KDE score vs nested quadrature
//   separable_vs_enumeration      per-dimension means vs full N^d enumeration
//   general_prox_reduction        general-prox kernel with g = lambda ||.||_1
//                                 vs the specialized L1 kernel
//   interaction_row_sums          row-stochasticity of every variant
//   smooth_score_order            empirical order in h of the kernel score
//                                 against the exact Ornstein-Uhlenbeck flow
//   l1_score_order                empirical order in h of the KDE score
//                                 against the initial score for lambda = 1
// The seed drives every random draw through the shared counter scheme.
ValidationReport validate_kernels(std::uint64_t seed);

// Schema: header `name,pass,measured,limit`, pass written as 0/1.
void write_validation_csv(std::ostream& os, const ValidationReport& report);

}  // namespace brwp
