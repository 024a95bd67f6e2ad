#pragma once

#include <cstddef>

namespace lossycap {

/// Quantum efficiency of a pure-loss channel, 0 <= eta <= 1.
class Efficiency {
 public:
  explicit Efficiency(double eta);

  double value() const noexcept { return eta_; }
  /// The efficiency 1 - eta of the complementary (environment) channel.
  Efficiency complement() const { return Efficiency(1.0 - eta_); }

 private:
  double eta_;
};

/// Single-mode Gaussian input with hbar = 1. The correlation matrix is
/// (1/2)[[n0 e^r, c], [c, n0 e^-r]] with n0 = (2N + 1 - m) / cosh r, and m is
/// the squared displacement <q>^2 + <p>^2.
class GaussianModeState {
 public:
  /// Validates N >= 0, m >= 0 and the uncertainty bound n0 >= sqrt(c^2 + 1).
  GaussianModeState(double mean_photons, double squeezing = 0.0, double correlation = 0.0,
                    double displacement_sq = 0.0);

  static GaussianModeState thermal(double mean_photons) { return GaussianModeState(mean_photons); }

  double mean_photons() const noexcept { return mean_photons_; }
  double squeezing() const noexcept { return squeezing_; }
  double correlation() const noexcept { return correlation_; }
  double displacement_sq() const noexcept { return displacement_sq_; }
  double n0() const noexcept { return n0_; }

 private:
  double mean_photons_;
  double squeezing_;
  double correlation_;
  double displacement_sq_;
  double n0_;
};

/// Largest squared displacement compatible with (N, r, c); negative when the
/// pair (r, c) is infeasible at this photon number.
double max_displacement_sq(double mean_photons, double squeezing, double correlation);

/// Eigenvalues of alpha / hbar.
struct SymplecticSpectrum {
  double plus;
  double minus;
};

SymplecticSpectrum symplectic_spectrum(const GaussianModeState& state);

/// gamma(s) = sqrt[(s l+ + (1-s)/2)(s l- + (1-s)/2)] - 1/2, the thermal-equivalent
/// photon number of the state after loss with efficiency s. Clamped at 0.
double gamma_factor(const SymplecticSpectrum& spectrum, double s);

/// Quantum mutual information g(gamma(1)) + g(gamma(eta)) - g(gamma(1 - eta)), bits.
double mutual_information(const GaussianModeState& state, Efficiency eta);

/// g(N) + g(eta N) - g((1 - eta) N): the mutual information of the thermal input,
/// which is the maximum over all inputs with mean photon number N.
double ce_single_mode(double mean_photons, Efficiency eta);

/// g(eta N) - g((1 - eta) N). Negative for eta < 1/2.
double coherent_information(double mean_photons, Efficiency eta);

/// g(eta N): Holevo information of a Gaussian-modulated coherent-state ensemble.
double holevo_chi_coherent(double mean_photons, Efficiency eta);

// Brute-force check that the thermal state maximizes mutual information.

struct OracleGrid {
  int r_points = 50;
  int c_points = 50;
  int m_points = 50;
  double r_max = 3.0;
  /// Upper end of the c axis; <= 0 selects sqrt((2N+1)^2 - 1), the largest
  /// correlation any state with this N can carry.
  double c_max = 0.0;
};

struct OracleResult {
  double max_value;
  GaussianModeState argmax;
  int r_index;
  int c_index;
  int m_index;
  std::size_t feasible_points;
  /// Largest change of I across one grid step away from the origin node.
  double resolution_bound;
};

/// Exhaustive scan over r in [0, r_max], c in [0, c_max] and, for each (r, c),
/// m in [0, max_displacement_sq]. Iteration order is r, c, m; ties keep the first.
OracleResult oracle_max_mutual_information(double mean_photons, Efficiency eta,
                                           const OracleGrid& grid = {});

}  // namespace lossycap
