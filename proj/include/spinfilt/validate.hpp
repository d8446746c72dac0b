#ifndef SPINFILT_VALIDATE_HPP_
#define SPINFILT_VALIDATE_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace spinfilt {

struct ValidateOptions {
  // Perturb the weak closed-form prefactor by 1e-6 relative (fault injection).
  bool mutate = false;
};

struct SuiteResult {
  std::string name;
  int checks = 0;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

/// spin-core, pulse-seq, filters, propagator, sensing
const std::vector<std::string>& suite_names();

/// Runs one invariant suite. Throws InvalidInput for an unknown name.
SuiteResult run_suite(std::string_view name, const ValidateOptions& options = {});

}  // namespace spinfilt

#endif  // SPINFILT_VALIDATE_HPP_
