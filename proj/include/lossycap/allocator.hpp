#pragma once

#include <string_view>
#include <vector>

#include "lossycap/numerics.hpp"
#include "lossycap/single_mode.hpp"

namespace lossycap {

enum class RateKind { EntanglementAssisted, HolevoCoherent, CoherentInfo };

std::string_view to_string(RateKind kind);
/// Accepts "ea", "holevo", "coherent" and the full enumerator names.
RateKind parse_rate_kind(std::string_view text);

/// Per-mode rate N -> value(N, eta) in bits, bound to one efficiency.
///
/// Construction rejects efficiencies outside the kind's validity domain
/// (CoherentInfo needs eta > 1/2) and checks on a log grid that the marginal
/// rate is strictly decreasing, i.e. that water-filling has a unique optimum.
class RateFunction {
 public:
  RateFunction(RateKind kind, Efficiency eta);

  RateKind kind() const noexcept { return kind_; }
  double eta() const noexcept { return eta_; }

  /// Rate of one mode with mean photon number n, bits.
  double value(double n) const;
  /// d value / dN in nats per photon; the water-filling condition is
  /// marginal_nats(N) = omega / Omega.
  double marginal_nats(double n) const;
  /// d value / dN in bits per photon.
  double marginal(double n) const;

  /// True for entanglement-assisted transmission at eta = 0: the rate is
  /// identically zero and every feasible allocation is optimal.
  bool degenerate() const noexcept { return degenerate_; }
  /// Exponential decay rate of the optimal occupancy in x = omega/Omega.
  double tail_decay_rate() const;

 private:
  RateKind kind_;
  double eta_;
  bool degenerate_ = false;
};

/// Solves marginal_nats(N) = x for N = F(x, eta) by Brent's method in ln N.
/// Entanglement-assisted transmission at eta = 1 uses the exact limit
/// N = 1/(e^{x/2} - 1); at eta = 0 the thermal shape 1/(e^x - 1) stands in.
/// Roots below 1e-300 are returned as 0.
double occupancy_from_multiplier(double x, const RateFunction& rate, const ToleranceConfig& tol = {});

/// Ordered positive mode frequencies (hbar = 1).
class ModeGrid {
 public:
  explicit ModeGrid(std::vector<double> frequencies);
  /// first, first + spacing, ..., first + (count-1) spacing.
  static ModeGrid uniform(double first, double spacing, std::size_t count);

  const std::vector<double>& frequencies() const noexcept { return frequencies_; }
  std::size_t size() const noexcept { return frequencies_.size(); }

 private:
  std::vector<double> frequencies_;
};

/// Total energy E over transmission time T = 2 pi / delta_omega, so the input
/// power is P = E delta_omega / (2 pi).
class PowerBudget {
 public:
  PowerBudget(double total_energy, double delta_omega);
  static PowerBudget from_power(double power, double transmission_time);

  double total_energy() const noexcept { return total_energy_; }
  double delta_omega() const noexcept { return delta_omega_; }
  double transmission_time() const;
  double power() const;

 private:
  double total_energy_;
  double delta_omega_;
};

struct ModeOccupancy {
  double omega;
  double photons;
  double rate_bits;
};

struct SpectralAllocation {
  double multiplier;  // Omega
  std::vector<ModeOccupancy> modes;
  double total_rate_bits;
  /// |sum omega_i N_i - E| / E
  double energy_residual;
  /// max_i |marginal(N_i) Omega ln 2 - omega_i| / omega_i over occupied modes;
  /// zero for a degenerate rate.
  double stationarity_residual;
};

/// Water-filling over a discrete grid: bisects ln Omega until
/// sum omega_i F(omega_i / Omega) = E, then evaluates the per-mode rates.
SpectralAllocation discrete_allocation(const ModeGrid& grid, const PowerBudget& budget,
                                       const RateFunction& rate, const ToleranceConfig& tol = {});

/// f(eta) = integral over (0, inf) of x F(x, eta) dx.
double f_eta(const RateFunction& rate, const ToleranceConfig& tol = {});

/// Omega = sqrt(2 pi P / (f hbar)).
double omega_from_power(const PowerBudget& budget, double f_value, double hbar = 1.0);

struct ContinuumIntegrals {
  double f;           // integral of x F(x, eta)
  double rate_integral;  // integral of value(F(x, eta))
};

/// The two integrals behind the wideband capacity of one rate kind.
ContinuumIntegrals continuum_capacity(const RateFunction& rate, const ToleranceConfig& tol = {});

}  // namespace lossycap
