#ifndef JCINFO_VALIDATION_HPP
#define JCINFO_VALIDATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "jcinfo/phase_space.hpp"

namespace jcinfo {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      ///< worst observed statistic
  double threshold = 0.0;  ///< limit the statistic is compared against
};

struct ValidationOptions {
  std::vector<double> alphas{1.0, 2.0, 3.0};
  GridOptions grid;
  std::uint64_t seed = 20240611;
  int gradient_probes = 100;
};

/// Invariant suite over the model, phase-space and measure layers. Needs no
/// external files. Each alpha contributes one result per check, and a final
/// grid-refinement check runs at the largest alpha.
std::vector<CheckResult> run_validation_suite(const ValidationOptions& opts);

/// Relative disagreement of the analytic gradient with central differences
/// of step h at beta: |g_an - g_fd| / max(|g_an|, Q).
double gradient_fd_error(Complex beta, const JointStateBranches& s, double h = 1e-5);

}  // namespace jcinfo

#endif  // JCINFO_VALIDATION_HPP
