#pragma once

#include <string>
#include <vector>

#include "lossycap/numerics.hpp"

namespace lossycap {

struct CheckResult {
  std::string name;
  bool passed;
  /// Observed quantity and the gate it was held to. For multi-point checks the
  /// value is the worst observed deviation and expected is 0.
  double value;
  double expected;
  double tolerance;
  std::string detail;
  double seconds;
};

struct VerifyOptions {
  ToleranceConfig tol;
  /// Each gate is max(stated tolerance, tolerance_floor).
  double tolerance_floor = 0.0;
  /// Name of a check whose observed value is perturbed; exercises the failure path.
  std::string inject_fault;
};

/// Names of the checks in the order run_verification executes them.
std::vector<std::string> verification_check_names();

/// Runs the built-in anchor checks. Never throws for a numerical failure inside
/// a check; the check is reported as failed with the message in detail.
std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

}  // namespace lossycap
