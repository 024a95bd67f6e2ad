#pragma once

#include <vector>

#include "lossycap/allocator.hpp"
#include "lossycap/numerics.hpp"
#include "lossycap/single_mode.hpp"

namespace lossycap {

/// Wideband capacity in units of the noiseless unassisted rate R_C:
/// (ln 2 / pi) sqrt(3 / (2 f)) * integral of value(F(x)).
double capacity_ratio(const ContinuumIntegrals& integrals);

/// Entanglement-assisted wideband capacity C(eta) in units of T R_C.
/// Exact at the endpoints: C(0) = 0, C(1) = 2.
double c_of_eta(Efficiency eta, const ToleranceConfig& tol = {});

/// C(eta) through the Lagrange condition even at eta = 1, for checking the
/// analytic endpoint. Requires 0 < eta < 1.
double c_of_eta_numeric(Efficiency eta, const ToleranceConfig& tol = {});

/// Estimates C(1) from interior points eta = 1 - k h, k = 1, 2, 4, 8, by fitting
/// C0 + a h ln^2 h + b h ln h + c h (the endpoint is non-analytic in 1 - eta).
double c_of_eta_extrapolated_to_one(double h = 1e-4, const ToleranceConfig& tol = {});

/// First-order expansion about eta = 1/2: 3/2 (eta - 1/2) + 1.
double c_of_eta_linearized(Efficiency eta);

/// Lower bound on C(eta) from the Planck-shaped allocation
/// N = zeta^2 / (e^{zeta omega / Omega0} - 1):
/// [Lambda(zeta^2) + Lambda(eta zeta^2) - Lambda((1-eta) zeta^2)] / (zeta Lambda(1)).
double lower_bound_zeta(Efficiency eta, double zeta, const ToleranceConfig& tol = {});

/// Frequency scale Omega0 = 6 ln2 R_C / pi of the zeta-family allocation.
double omega0_from_rate(double noiseless_rate);

/// Unassisted classical capacity lower bound from coherent-state encoding,
/// sqrt(eta) in units of T R_C.
double classical_lower_bound(Efficiency eta);

/// The same bound obtained by numerically water-filling the Holevo rate g(eta N).
double classical_lower_bound_numeric(Efficiency eta, const ToleranceConfig& tol = {});

/// Coherent-information lower bound Q_s on the quantum capacity, units of T R_C.
/// Zero for eta <= 1/2.
double quantum_lower_bound(Efficiency eta, const ToleranceConfig& tol = {});

/// R_C = (1/ln 2) sqrt(pi P / (3 hbar)), bits per unit time.
double noiseless_rate(const PowerBudget& budget, double hbar = 1.0);

struct ZetaBound {
  double zeta;
  double value;
};

struct CapacityReport {
  double eta;

  // Dimensionless, units of T R_C.
  double c_of_eta;
  double linearized;
  double classical_lower_ratio;
  double quantum_lower_ratio;
  std::vector<ZetaBound> bounds_zeta;
  double f_eta;

  // Absolute, for the given budget.
  double power;
  double transmission_time;
  double total_energy;
  double hbar;
  double noiseless_rate;   // R_C, bits per unit time
  double assisted_rate;    // R_E = R_C C(eta)
  double capacity_bits;    // C_E = T R_E
  double quantum_qubits;   // Q_E = C_E / 2
  double classical_lower_bits;
  double quantum_lower_qubits;
  double multiplier;       // Omega
  double omega0;

  ToleranceConfig tolerances;
};

struct ReportOptions {
  double hbar = 1.0;
  /// Extra zeta values beyond the default pair zeta = 1 and zeta = 1/sqrt(eta).
  std::vector<double> zeta_scan;
};

CapacityReport capacity_report(Efficiency eta, const PowerBudget& budget, const ToleranceConfig& tol = {},
                               const ReportOptions& options = {});

struct ConvergencePoint {
  std::size_t modes;
  double delta_omega;
  double discrete_rate;    // total bits of the discrete allocation per unit time
  double continuum_rate;   // R_C C(eta)
};

/// Discrete water-filling on omega_i = i delta_omega, i = 1..M, with the grid
/// reaching x_max * Omega (Omega from the continuum solution at this power),
/// compared with the continuum rate for each requested mode count M.
std::vector<ConvergencePoint> discrete_convergence(Efficiency eta, double power,
                                                   const std::vector<std::size_t>& mode_counts,
                                                   double x_max, const ToleranceConfig& tol = {});

}  // namespace lossycap
