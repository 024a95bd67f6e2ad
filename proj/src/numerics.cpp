#include "lossycap/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace lossycap {

namespace {

constexpr double kSeriesThreshold = 1e-8;
constexpr double kLn2 = std::numbers::ln2;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5 and the centre.
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  bool mapped = false;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const ScalarFunction& f, double lo, double hi, int& evaluations) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double f_centre = f(centre);
  double kronrod = f_centre * kKronrodWeights[7];
  double gauss = f_centre * kGaussWeights[3];
  bool finite = std::isfinite(f_centre);
  for (int k = 0; k < 7; ++k) {
    const double dx = half * kKronrodNodes[k];
    const double f1 = f(centre - dx);
    const double f2 = f(centre + dx);
    finite = finite && std::isfinite(f1) && std::isfinite(f2);
    kronrod += kKronrodWeights[k] * (f1 + f2);
    if (k % 2 == 1) gauss += kGaussWeights[k / 2] * (f1 + f2);
  }
  evaluations += 15;
  if (!finite) {
    std::ostringstream msg;
    msg << "quadrature: non-finite integrand on [" << lo << ", " << hi << "]";
    throw NumericalFailure(msg.str(), std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::infinity());
  }
  kronrod *= half;
  gauss *= half;
  const double roundoff = 50.0 * kEps * std::abs(kronrod);
  return {lo, hi, kronrod, std::max(std::abs(kronrod - gauss), roundoff), false};
}

}  // namespace

void ToleranceConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(quad_target > 0.0)) {
    throw DomainError("tolerances must be strictly positive");
  }
  if (max_iterations < 1) throw DomainError("max_iterations must be at least 1");
}

double g_entropy(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    std::ostringstream msg;
    msg << "g_entropy: mean photon number must be finite and >= 0, got " << x;
    throw DomainError(msg.str());
  }
  if (x == 0.0) return 0.0;
  if (x < kSeriesThreshold) {
    return (x * (1.0 - std::log(x)) + 0.5 * x * x) / kLn2;
  }
  // (x+1)ln(x+1) - x ln x rewritten without the large-x cancellation.
  return (std::log1p(x) + x * std::log1p(1.0 / x)) / kLn2;
}

double log1p_inverse(double y) {
  return y < 1.0 ? std::log1p(y) - std::log(y) : std::log1p(1.0 / y);
}

double g_entropy_derivative(double x) {
  if (!std::isfinite(x) || x < 0.0) throw DomainError("g_entropy_derivative: x must be >= 0");
  if (x == 0.0) return std::numeric_limits<double>::infinity();
  return log1p_inverse(x) / kLn2;
}

double find_root_bracketed(const ScalarFunction& f, double lo, double hi,
                           const ToleranceConfig& tol) {
  tol.validate();
  double a = lo;
  double b = hi;
  double fa = f(a);
  double fb = f(b);
  if (std::isnan(fa) || std::isnan(fb)) throw DomainError("find_root_bracketed: NaN at bracket end");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    std::ostringstream msg;
    msg << "root not bracketed: f(" << a << ")=" << fa << ", f(" << b << ")=" << fb;
    throw BracketingError(msg.str());
  }

  double c = b;
  double fc = fb;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < tol.max_iterations; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * (tol.rel_tol * std::abs(b) + tol.abs_tol);
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || std::abs(fb) <= tol.abs_tol) return b;

    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation, or secant when only two points differ.
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
    fb = f(b);
    if (std::isnan(fb)) throw NumericalFailure("find_root_bracketed: NaN during iteration", b, std::abs(c - b));
  }
  throw NumericalFailure("find_root_bracketed: iteration cap exceeded", b, std::abs(c - b));
}

QuadratureResult adaptive_quadrature(const ScalarFunction& f, double a, double b,
                                     const ToleranceConfig& tol,
                                     const QuadratureOptions& options) {
  tol.validate();
  if (!std::isfinite(a) || std::isnan(b)) {
    throw DomainError("adaptive_quadrature: lower limit must be finite");
  }
  if (b < a) throw DomainError("adaptive_quadrature: upper limit below lower limit");
  if (std::isinf(b)) {
    if (!(options.decay_rate > 0.0)) throw DomainError("adaptive_quadrature: decay rate must be positive");
    b = a + std::max(50.0 / options.decay_rate, 100.0);
  }
  QuadratureResult result;
  if (a == b) return result;

  // Near a singular lower end, x = a + w e^{-t} on t in [0, 50]; the dropped
  // sliver [a, a + w e^{-50}] is below 1e-21 * w.
  const double w = options.singular_at_lower ? std::min(1.0, b - a) : 0.0;
  const ScalarFunction mapped = [&f, a, w](double t) {
    const double jac = w * std::exp(-t);
    return jac == 0.0 ? 0.0 : f(a + jac) * jac;
  };

  std::vector<Segment> heap;
  auto push = [&](bool is_mapped, double lo, double hi) {
    Segment s = gauss_kronrod(is_mapped ? mapped : f, lo, hi, result.evaluations);
    s.mapped = is_mapped;
    heap.push_back(s);
    std::push_heap(heap.begin(), heap.end());
  };
  if (options.singular_at_lower) {
    for (int k = 0; k < 5; ++k) push(true, 10.0 * k, 10.0 * (k + 1));
  }
  const double regular_from = a + w;
  if (regular_from < b) {
    constexpr int kInitialPanels = 4;
    const double width = (b - regular_from) / kInitialPanels;
    for (int k = 0; k < kInitialPanels; ++k) {
      const double lo = regular_from + k * width;
      push(false, lo, k + 1 == kInitialPanels ? b : lo + width);
    }
  }

  auto sum_heap = [&heap, &result]() {
    result.value = 0.0;
    result.error = 0.0;
    for (const auto& s : heap) {
      result.value += s.value;
      result.error += s.error;
    }
  };
  sum_heap();
  while (result.error > std::max(tol.quad_target * std::abs(result.value), tol.abs_tol)) {
    if (result.subdivisions >= tol.max_iterations) {
      std::ostringstream msg;
      msg << "adaptive_quadrature: no convergence after " << result.subdivisions
          << " subdivisions (estimate " << result.value << ", error " << result.error << ")";
      throw NumericalFailure(msg.str(), result.value, result.error);
    }
    std::pop_heap(heap.begin(), heap.end());
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    push(worst.mapped, worst.lo, mid);
    push(worst.mapped, mid, worst.hi);
    ++result.subdivisions;
    sum_heap();
  }
  return result;
}

double lambda_integral(double y, const ToleranceConfig& tol) {
  if (!std::isfinite(y) || y < 0.0) {
    std::ostringstream msg;
    msg << "lambda_integral: y must be finite and >= 0, got " << y;
    throw DomainError(msg.str());
  }
  if (y == 0.0) return 0.0;
  const auto integrand = [y](double x) { return g_entropy(y / std::expm1(x)); };
  QuadratureOptions options;
  options.decay_rate = 1.0;
  options.singular_at_lower = true;
  return adaptive_quadrature(integrand, 0.0, std::numeric_limits<double>::infinity(), tol, options)
      .value;
}

double bisect_monotone(const ScalarFunction& f, double target, double lo, double hi,
                       const ToleranceConfig& tol, int max_expansions) {
  tol.validate();
  if (!(lo < hi)) throw DomainError("bisect_monotone: require lo < hi");
  double f_lo = f(lo);
  double f_hi = f(hi);
  const bool increasing = f_hi >= f_lo;
  auto below = [&](double v) { return increasing ? v < target : v > target; };

  int expansions = 0;
  while (below(f_hi) || !below(f_lo)) {
    if (f_lo == target) return lo;
    if (f_hi == target) return hi;
    if (expansions++ >= max_expansions) {
      std::ostringstream msg;
      msg << "bisect_monotone: target " << target << " not bracketed after " << max_expansions
          << " expansions (f in [" << std::min(f_lo, f_hi) << ", " << std::max(f_lo, f_hi) << "])";
      throw BracketingError(msg.str());
    }
    const double width = hi - lo;
    if (below(f_hi)) {
      lo = hi;
      f_lo = f_hi;
      hi += 2.0 * width;
      f_hi = f(hi);
    } else {
      hi = lo;
      f_hi = f_lo;
      lo -= 2.0 * width;
      f_lo = f(lo);
    }
    if (!std::isfinite(f_lo) || !std::isfinite(f_hi)) {
      throw BracketingError("bisect_monotone: function left its finite range while expanding");
    }
  }

  const double goal = tol.rel_tol * std::abs(target) + tol.abs_tol;
  for (int iter = 0; iter < tol.max_iterations; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) return mid;
    const double f_mid = f(mid);
    if (std::abs(f_mid - target) <= goal) return mid;
    if (below(f_mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw NumericalFailure("bisect_monotone: iteration cap exceeded", lo + 0.5 * (hi - lo), hi - lo);
}

}  // namespace lossycap
