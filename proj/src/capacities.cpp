#include "lossycap/capacities.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace lossycap {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kPi = std::numbers::pi;

// Solves a small dense system by Gaussian elimination with partial pivoting.
template <std::size_t N>
std::array<double, N> solve_dense(std::array<std::array<double, N>, N> a, std::array<double, N> b) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < N; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    if (a[col][col] == 0.0) throw NumericalFailure("singular extrapolation system", 0.0, 0.0);
    for (std::size_t row = col + 1; row < N; ++row) {
      const double factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k < N; ++k) a[row][k] -= factor * a[col][k];
      b[row] -= factor * b[col];
    }
  }
  std::array<double, N> x{};
  for (std::size_t i = N; i-- > 0;) {
    double sum = b[i];
    for (std::size_t k = i + 1; k < N; ++k) sum -= a[i][k] * x[k];
    x[i] = sum / a[i][i];
  }
  return x;
}

}  // namespace

double capacity_ratio(const ContinuumIntegrals& integrals) {
  if (!(integrals.f > 0.0)) throw NumericalFailure("capacity_ratio: f must be positive", integrals.f, 0.0);
  return kLn2 / kPi * std::sqrt(3.0 / (2.0 * integrals.f)) * integrals.rate_integral;
}

double c_of_eta(Efficiency eta, const ToleranceConfig& tol) {
  if (eta.value() == 0.0) return 0.0;
  if (eta.value() == 1.0) return 2.0;
  return c_of_eta_numeric(eta, tol);
}

double c_of_eta_numeric(Efficiency eta, const ToleranceConfig& tol) {
  if (!(eta.value() > 0.0 && eta.value() < 1.0)) {
    throw DomainError("c_of_eta_numeric: the Lagrange condition needs 0 < eta < 1");
  }
  return capacity_ratio(continuum_capacity(RateFunction(RateKind::EntanglementAssisted, eta), tol));
}

double c_of_eta_extrapolated_to_one(double h, const ToleranceConfig& tol) {
  if (!(h > 0.0 && 8.0 * h < 1.0)) throw DomainError("extrapolation step must satisfy 0 < 8h < 1");
  constexpr std::array<double, 4> kMultiples = {1.0, 2.0, 4.0, 8.0};
  std::array<std::array<double, 4>, 4> design{};
  std::array<double, 4> values{};
  for (std::size_t i = 0; i < kMultiples.size(); ++i) {
    const double step = kMultiples[i] * h;
    const double log_step = std::log(step);
    design[i] = {1.0, step * log_step * log_step, step * log_step, step};
    values[i] = c_of_eta_numeric(Efficiency(1.0 - step), tol);
  }
  return solve_dense(design, values)[0];
}

double c_of_eta_linearized(Efficiency eta) { return 1.5 * (eta.value() - 0.5) + 1.0; }

double lower_bound_zeta(Efficiency eta, double zeta, const ToleranceConfig& tol) {
  if (!std::isfinite(zeta) || !(zeta > 0.0)) {
    std::ostringstream msg;
    msg << "lower_bound_zeta: zeta must be positive and finite, got " << zeta;
    throw DomainError(msg.str());
  }
  const double e = eta.value();
  const double z2 = zeta * zeta;
  const double numerator = lambda_integral(z2, tol) + lambda_integral(e * z2, tol) -
                           lambda_integral((1.0 - e) * z2, tol);
  return numerator / (zeta * lambda_integral(1.0, tol));
}

double omega0_from_rate(double noiseless_rate) {
  if (!(noiseless_rate > 0.0) || !std::isfinite(noiseless_rate)) throw DomainError("R_C must be positive and finite");
  return 6.0 * kLn2 * noiseless_rate / kPi;
}

double classical_lower_bound(Efficiency eta) { return std::sqrt(eta.value()); }

double classical_lower_bound_numeric(Efficiency eta, const ToleranceConfig& tol) {
  if (eta.value() == 0.0) return 0.0;
  return capacity_ratio(continuum_capacity(RateFunction(RateKind::HolevoCoherent, eta), tol));
}

double quantum_lower_bound(Efficiency eta, const ToleranceConfig& tol) {
  if (eta.value() <= 0.5) return 0.0;
  return capacity_ratio(continuum_capacity(RateFunction(RateKind::CoherentInfo, eta), tol));
}

double noiseless_rate(const PowerBudget& budget, double hbar) {
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  return std::sqrt(kPi * budget.power() / (3.0 * hbar)) / kLn2;
}

CapacityReport capacity_report(Efficiency eta, const PowerBudget& budget, const ToleranceConfig& tol,
                               const ReportOptions& options) {
  tol.validate();
  const double e = eta.value();
  CapacityReport report{};
  report.eta = e;
  report.tolerances = tol;
  report.hbar = options.hbar;

  const RateFunction ea(RateKind::EntanglementAssisted, eta);
  const ContinuumIntegrals integrals = continuum_capacity(ea, tol);
  report.f_eta = integrals.f;
  report.c_of_eta = e > 0.0 && e < 1.0 ? capacity_ratio(integrals) : c_of_eta(eta, tol);
  report.linearized = c_of_eta_linearized(eta);
  report.classical_lower_ratio = classical_lower_bound(eta);
  report.quantum_lower_ratio = quantum_lower_bound(eta, tol);

  report.bounds_zeta.push_back({1.0, lower_bound_zeta(eta, 1.0, tol)});
  if (e > 0.0) {
    const double zeta = 1.0 / std::sqrt(e);
    report.bounds_zeta.push_back({zeta, lower_bound_zeta(eta, zeta, tol)});
  }
  for (double zeta : options.zeta_scan) report.bounds_zeta.push_back({zeta, lower_bound_zeta(eta, zeta, tol)});

  report.power = budget.power();
  report.transmission_time = budget.transmission_time();
  report.total_energy = budget.total_energy();
  report.noiseless_rate = noiseless_rate(budget, options.hbar);
  report.assisted_rate = report.noiseless_rate * report.c_of_eta;
  report.capacity_bits = report.transmission_time * report.assisted_rate;
  report.quantum_qubits = 0.5 * report.capacity_bits;
  report.classical_lower_bits = report.transmission_time * report.noiseless_rate * report.classical_lower_ratio;
  report.quantum_lower_qubits = report.transmission_time * report.noiseless_rate * report.quantum_lower_ratio;
  report.multiplier = omega_from_power(budget, integrals.f, options.hbar);
  report.omega0 = omega0_from_rate(report.noiseless_rate);
  return report;
}

std::vector<ConvergencePoint> discrete_convergence(Efficiency eta, double power,
                                                   const std::vector<std::size_t>& mode_counts,
                                                   double x_max, const ToleranceConfig& tol) {
  if (!(x_max > 0.0)) throw DomainError("discrete_convergence: x_max must be positive");
  const RateFunction rate(RateKind::EntanglementAssisted, eta);
  const ContinuumIntegrals integrals = continuum_capacity(rate, tol);
  // Omega and R_C depend only on the power, not on how it is split into E and T.
  const PowerBudget reference = PowerBudget::from_power(power, 1.0);
  const double multiplier = omega_from_power(reference, integrals.f);
  const double continuum = noiseless_rate(reference) * c_of_eta(eta, tol);

  std::vector<ConvergencePoint> out;
  out.reserve(mode_counts.size());
  for (std::size_t modes : mode_counts) {
    if (modes == 0) throw DomainError("discrete_convergence: mode count must be positive");
    const double spacing = x_max * multiplier / static_cast<double>(modes);
    const PowerBudget budget(power * 2.0 * kPi / spacing, spacing);
    const auto allocation = discrete_allocation(ModeGrid::uniform(spacing, spacing, modes), budget, rate, tol);
    out.push_back({modes, spacing, allocation.total_rate_bits / budget.transmission_time(), continuum});
  }
  return out;
}

}  // namespace lossycap
