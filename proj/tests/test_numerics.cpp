#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "lossycap/numerics.hpp"
#include "oracle_values.hpp"

using namespace lossycap;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
}  // namespace

TEST_CASE("ToleranceConfig validation") {
  ToleranceConfig tol;
  CHECK_NOTHROW(tol.validate());
  CHECK(tol.rel_tol == 1e-12);
  CHECK(tol.abs_tol == 1e-14);
  CHECK(tol.max_iterations == 200);
  CHECK(tol.quad_target == 1e-10);

  ToleranceConfig bad = tol;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = tol;
  bad.abs_tol = -1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = tol;
  bad.quad_target = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = tol;
  bad.max_iterations = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("g_entropy examples") {
  CHECK(g_entropy(0.0) == 0.0);
  CHECK(g_entropy(1.0) == Approx(2.0).epsilon(1e-15));
  CHECK(g_entropy(3.0) == Approx(oracle::kG3).epsilon(1e-15));
  CHECK(g_entropy(10.0) == Approx(oracle::kG10).epsilon(1e-15));
  CHECK(g_entropy(0.5) == Approx(oracle::kGHalf).epsilon(1e-15));
}

TEST_CASE("g_entropy rejects invalid input") {
  CHECK_THROWS_AS(g_entropy(-1e-12), DomainError);
  CHECK_THROWS_AS(g_entropy(std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(g_entropy(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("g_entropy small-x branch is continuous with the direct formula") {
  // Just above the series threshold the stable formula is still accurate, so
  // both sides of 1e-8 must agree to relative rounding.
  const double below = g_entropy(0.999999e-8);
  const double above = g_entropy(1.000001e-8);
  CHECK(below < above);
  CHECK(above / below == Approx(1.0).epsilon(1e-5));
  // Leading behaviour x(1 - ln x)/ln 2.
  const double x = 1e-12;
  CHECK(g_entropy(x) == Approx(x * (1.0 - std::log(x)) / kLn2).epsilon(1e-10));
  CHECK(g_entropy(1e-300) > 0.0);
}

TEST_CASE("g_entropy is increasing, concave and above log2(1+x)") {
  std::vector<double> xs;
  for (int i = 0; i <= 200; ++i) xs.push_back(std::pow(10.0, -10.0 + 16.0 * i / 200.0));
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double a = xs[i - 1];
    const double b = xs[i];
    CHECK(g_entropy(a) < g_entropy(b));
    const double mid = 0.5 * (a + b);
    CHECK(g_entropy(mid) >= 0.5 * (g_entropy(a) + g_entropy(b)) - 1e-12 * g_entropy(b));
  }
  for (double x : xs) CHECK(g_entropy(x) >= std::log2(1.0 + x));
  CHECK(g_entropy(0.0) >= 0.0);
}

TEST_CASE("g_entropy_derivative and log1p_inverse") {
  CHECK(g_entropy_derivative(1.0) == Approx(1.0));
  CHECK(std::isinf(g_entropy_derivative(0.0)));
  CHECK(log1p_inverse(1.0) == Approx(std::log(2.0)));
  CHECK(log1p_inverse(1e-300) == Approx(std::log1p(1e300)).epsilon(1e-15));
  const double h = 1e-6;
  const double x = 2.5;
  CHECK(g_entropy_derivative(x) == Approx((g_entropy(x + h) - g_entropy(x - h)) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("lambda_integral examples") {
  CHECK(lambda_integral(0.0) == 0.0);
  const double l1 = lambda_integral(1.0);
  CHECK(l1 == Approx(kPi * kPi / (3.0 * kLn2)).epsilon(1e-10));
  CHECK(l1 == Approx(oracle::kLambda1).epsilon(1e-10));
  const double l4 = lambda_integral(4.0);
  CHECK(l4 == Approx(oracle::kLambda4).epsilon(1e-10));
  CHECK(lambda_integral(0.25) == Approx(oracle::kLambdaQuarter).epsilon(1e-10));
  CHECK(l4 > l1);
  CHECK(l1 > 0.0);
  CHECK_THROWS_AS(lambda_integral(-1.0), DomainError);
}

TEST_CASE("lambda_integral is strictly increasing") {
  double previous = 0.0;
  for (int i = 0; i <= 30; ++i) {
    const double y = std::pow(10.0, -4.0 + 7.0 * i / 30.0);
    const double value = lambda_integral(y);
    CHECK(value > previous);
    previous = value;
  }
}

TEST_CASE("lambda_integral reports non-convergence") {
  ToleranceConfig tight;
  tight.quad_target = 1e-15;
  tight.abs_tol = 1e-300;
  tight.max_iterations = 2;
  try {
    (void)lambda_integral(1.0, tight);
    FAIL("expected NumericalFailure");
  } catch (const NumericalFailure& e) {
    CHECK(e.best_estimate() == Approx(oracle::kLambda1).epsilon(1e-3));
    CHECK(e.error_bound() > 0.0);
  }
}

TEST_CASE("find_root_bracketed examples") {
  CHECK(find_root_bracketed([](double x) { return x - 1.0; }, 0.0, 2.0) == Approx(1.0).epsilon(1e-14));
  CHECK(find_root_bracketed([](double x) { return std::exp(x) - 2.0; }, 0.0, 2.0) ==
        Approx(kLn2).epsilon(1e-12));
  // Lagrange condition at eta = 1/2, omega/Omega = ln 2, has the root N = 1.
  const auto lagrange = [](double n) {
    const double eta = 0.5;
    return std::log1p(1.0 / n) + eta * std::log1p(1.0 / (eta * n)) - (1 - eta) * std::log1p(1.0 / ((1 - eta) * n)) -
           kLn2;
  };
  CHECK(find_root_bracketed(lagrange, 1e-6, 1e6) == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("find_root_bracketed errors") {
  CHECK_THROWS_AS(find_root_bracketed([](double x) { return x * x + 1.0; }, -1.0, 1.0), BracketingError);
  ToleranceConfig capped;
  capped.max_iterations = 3;
  capped.abs_tol = 1e-300;
  capped.rel_tol = 1e-300;
  CHECK_THROWS_AS(find_root_bracketed([](double x) { return std::cbrt(x - 0.3); }, -1.0, 2.0, capped),
                  NumericalFailure);
}

TEST_CASE("root finders are deterministic") {
  const auto f = [](double x) { return std::tanh(x - 0.123456789) + 0.01 * x; };
  const double a = find_root_bracketed(f, -3.0, 5.0);
  const double b = find_root_bracketed(f, -3.0, 5.0);
  CHECK(a == b);
  const auto h = [](double x) { return x * x * x; };
  CHECK(bisect_monotone(h, 7.0, 0.0, 1.0) == bisect_monotone(h, 7.0, 0.0, 1.0));
}

TEST_CASE("adaptive_quadrature examples and error estimates") {
  const auto exp_result = adaptive_quadrature([](double x) { return std::exp(-x); }, 0.0,
                                              std::numeric_limits<double>::infinity());
  CHECK(exp_result.value == Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(exp_result.value - 1.0) <= exp_result.error + 1e-14);

  const auto bose = adaptive_quadrature(
      [](double x) { return x == 0.0 ? 1.0 : x / std::expm1(x); }, 0.0, std::numeric_limits<double>::infinity());
  CHECK(bose.value == Approx(kPi * kPi / 6.0).epsilon(1e-12));
  CHECK(std::abs(bose.value - kPi * kPi / 6.0) <= bose.error + 1e-14);

  const auto zero = adaptive_quadrature([](double) { return 0.0; }, 0.0, 1.0);
  CHECK(zero.value == 0.0);
  CHECK(zero.error <= 1e-14);
}

TEST_CASE("adaptive_quadrature handles a logarithmic endpoint") {
  QuadratureOptions options;
  options.singular_at_lower = true;
  const auto r = adaptive_quadrature([](double x) { return -std::log(x); }, 0.0, 1.0, {}, options);
  CHECK(r.value == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("adaptive_quadrature rejects non-finite integrands") {
  CHECK_THROWS_AS(adaptive_quadrature([](double) { return std::numeric_limits<double>::quiet_NaN(); }, 0.0, 1.0),
                  NumericalFailure);
}

TEST_CASE("bisect_monotone examples") {
  CHECK(bisect_monotone([](double x) { return x * x; }, 4.0, 0.0, 10.0) == Approx(2.0).epsilon(1e-12));

  // Energy of the thermal allocation on modes {ln 2, 2 ln 2}: Omega = 1 gives N = {1, 1/3}.
  const auto energy = [](double omega_scale) {
    double e = 0.0;
    for (double w : {kLn2, 2.0 * kLn2}) e += w / std::expm1(w / omega_scale);
    return e;
  };
  CHECK(bisect_monotone(energy, 5.0 / 3.0 * kLn2, 0.1, 0.5) == Approx(1.0).epsilon(1e-10));

  // Bracket expansion finds targets outside the initial interval.
  CHECK(bisect_monotone([](double x) { return x; }, 50.0, 0.0, 1.0) == Approx(50.0).epsilon(1e-12));
}

TEST_CASE("bisect_monotone expansion cap") {
  CHECK_THROWS_AS(bisect_monotone([](double x) { return std::atan(x); }, 2.0, 0.0, 1.0), BracketingError);
  CHECK_THROWS_AS(bisect_monotone([](double x) { return x; }, 1e300, 0.0, 1.0, {}, 5), BracketingError);
}
