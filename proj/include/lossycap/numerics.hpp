#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace lossycap {

// Error taxonomy shared by every module.

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A root or target could not be bracketed.
class BracketingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative method failed to converge. Carries the best estimate reached
/// and its error bound so callers can decide whether it is still usable.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double best_estimate, double error_bound)
      : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

struct ToleranceConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  int max_iterations = 200;
  /// Target relative error for integrals.
  double quad_target = 1e-10;

  /// Throws DomainError unless all tolerances are positive and max_iterations >= 1.
  void validate() const;
};

using ScalarFunction = std::function<double(double)>;

/// Entropy in bits of a thermal bosonic mode with mean photon number x:
/// (x+1)log2(x+1) - x log2(x), with g(0) = 0.
double g_entropy(double x);

/// dg/dx = log2(1 + 1/x); +inf at x = 0.
double g_entropy_derivative(double x);

/// log(1 + 1/y) for y > 0 without overflowing when y is tiny.
double log1p_inverse(double y);

/// Lambda(y) = integral over (0, inf) of g(y / (e^x - 1)) dx.
double lambda_integral(double y, const ToleranceConfig& tol = {});

/// Brent's method on [lo, hi]. Stops when |f(x)| <= abs_tol or the bracket is
/// narrower than rel_tol*|x| + abs_tol. Deterministic for identical inputs.
double find_root_bracketed(const ScalarFunction& f, double lo, double hi,
                           const ToleranceConfig& tol = {});

struct QuadratureOptions {
  /// Exponential decay rate of the integrand for semi-infinite ranges. The
  /// range is truncated at a + max(50/decay_rate, 100).
  double decay_rate = 1.0;
  /// Integrable (logarithmic or weaker) singularity at the lower endpoint.
  /// The first unit interval is mapped through x = a + e^{-t}.
  bool singular_at_lower = false;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  int subdivisions = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature. b may be +inf.
/// Converged when error <= max(quad_target*|value|, abs_tol); otherwise throws
/// NumericalFailure after max_iterations subdivisions.
QuadratureResult adaptive_quadrature(const ScalarFunction& f, double a, double b,
                                     const ToleranceConfig& tol = {},
                                     const QuadratureOptions& options = {});

/// Solves f(x) = target for monotone f by bisection. The bracket [lo, hi] is
/// expanded outward (width doubling) up to max_expansions times when the target
/// does not lie between f(lo) and f(hi); hitting the cap throws BracketingError.
double bisect_monotone(const ScalarFunction& f, double target, double lo, double hi,
                       const ToleranceConfig& tol = {}, int max_expansions = 60);

}  // namespace lossycap
