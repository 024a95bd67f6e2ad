#include "lossycap/single_mode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "lossycap/numerics.hpp"

namespace lossycap {

namespace {

// Relative slack on the uncertainty bound so grid states built exactly on the
// boundary are not rejected by rounding.
constexpr double kFeasibilitySlack = 1e-12;

}  // namespace

Efficiency::Efficiency(double eta) : eta_(eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    std::ostringstream msg;
    msg << "efficiency must lie in [0, 1], got " << eta;
    throw DomainError(msg.str());
  }
}

GaussianModeState::GaussianModeState(double mean_photons, double squeezing, double correlation,
                                     double displacement_sq)
    : mean_photons_(mean_photons),
      squeezing_(squeezing),
      correlation_(correlation),
      displacement_sq_(displacement_sq),
      n0_(0.0) {
  if (!std::isfinite(mean_photons) || mean_photons < 0.0) {
    throw DomainError("mean photon number N must be finite and >= 0");
  }
  if (!std::isfinite(squeezing) || !std::isfinite(correlation)) {
    throw DomainError("squeezing r and correlation c must be finite");
  }
  if (!std::isfinite(displacement_sq) || displacement_sq < 0.0) {
    throw DomainError("squared displacement m must be finite and >= 0");
  }
  n0_ = (2.0 * mean_photons + 1.0 - displacement_sq) / std::cosh(squeezing);
  const double bound = std::sqrt(correlation * correlation + 1.0);
  if (n0_ < bound * (1.0 - kFeasibilitySlack)) {
    std::ostringstream msg;
    msg << "uncertainty bound violated: n0 = (2N+1-m)/cosh(r) = " << n0_
        << " < sqrt(c^2+1) = " << bound;
    throw DomainError(msg.str());
  }
}

double max_displacement_sq(double mean_photons, double squeezing, double correlation) {
  return 2.0 * mean_photons + 1.0 - std::cosh(squeezing) * std::sqrt(correlation * correlation + 1.0);
}

SymplecticSpectrum symplectic_spectrum(const GaussianModeState& state) {
  const double n0 = state.n0();
  const double r = state.squeezing();
  const double c = state.correlation();
  const double plus = 0.5 * (n0 * std::cosh(r) + std::hypot(n0 * std::sinh(r), c));
  // l+ l- = (n0^2 - c^2)/4; dividing avoids the cancellation in l+ - sqrt(...).
  const double product = std::max(0.25 * (n0 - c) * (n0 + c), 0.25);
  // Rounding can push l- a few ulps above l+ when the pair is degenerate.
  return {plus, std::min(product / plus, plus)};
}

double gamma_factor(const SymplecticSpectrum& spectrum, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("gamma_factor: s must lie in [0, 1]");
  if (!(spectrum.plus >= spectrum.minus && spectrum.minus > 0.0)) {
    throw DomainError("gamma_factor: require l+ >= l- > 0");
  }
  const double noise = 0.5 * (1.0 - s);
  const double det = (s * spectrum.plus + noise) * (s * spectrum.minus + noise);
  return std::max(std::sqrt(det) - 0.5, 0.0);
}

double mutual_information(const GaussianModeState& state, Efficiency eta) {
  const auto spectrum = symplectic_spectrum(state);
  const double e = eta.value();
  return g_entropy(gamma_factor(spectrum, 1.0)) + g_entropy(gamma_factor(spectrum, e)) -
         g_entropy(gamma_factor(spectrum, 1.0 - e));
}

double ce_single_mode(double mean_photons, Efficiency eta) {
  const double e = eta.value();
  return g_entropy(mean_photons) + g_entropy(e * mean_photons) -
         g_entropy((1.0 - e) * mean_photons);
}

double coherent_information(double mean_photons, Efficiency eta) {
  const double e = eta.value();
  return g_entropy(e * mean_photons) - g_entropy((1.0 - e) * mean_photons);
}

double holevo_chi_coherent(double mean_photons, Efficiency eta) {
  return g_entropy(eta.value() * mean_photons);
}

OracleResult oracle_max_mutual_information(double mean_photons, Efficiency eta,
                                           const OracleGrid& grid) {
  if (!(mean_photons > 0.0) || !std::isfinite(mean_photons)) {
    throw DomainError("oracle: N must be positive");
  }
  if (grid.r_points < 2 || grid.c_points < 2 || grid.m_points < 2 || !(grid.r_max >= 0.0)) {
    throw DomainError("oracle: each axis needs at least two points and r_max >= 0");
  }
  const double two_n_plus_one = 2.0 * mean_photons + 1.0;
  const double c_max = grid.c_max > 0.0 ? grid.c_max
                                        : std::sqrt((two_n_plus_one - 1.0) * (two_n_plus_one + 1.0));
  const double dr = grid.r_max / (grid.r_points - 1);
  const double dc = c_max / (grid.c_points - 1);

  std::optional<OracleResult> best;
  std::size_t feasible = 0;
  for (int i = 0; i < grid.r_points; ++i) {
    const double r = i * dr;
    for (int j = 0; j < grid.c_points; ++j) {
      const double c = j * dc;
      const double m_max = max_displacement_sq(mean_photons, r, c);
      if (m_max < 0.0) continue;
      const double dm = m_max / (grid.m_points - 1);
      for (int k = 0; k < grid.m_points; ++k) {
        const double m = k + 1 == grid.m_points ? m_max : k * dm;
        const GaussianModeState state(mean_photons, r, c, m);
        const double value = mutual_information(state, eta);
        ++feasible;
        if (!best || value > best->max_value) {
          best = OracleResult{value, state, i, j, k, 0, 0.0};
        }
      }
    }
  }
  if (!best) throw DomainError("oracle: feasible grid is empty");
  best->feasible_points = feasible;

  const double at_origin = mutual_information(GaussianModeState::thermal(mean_photons), eta);
  double bound = 0.0;
  const auto step_change = [&](double r, double c, double m) {
    if (max_displacement_sq(mean_photons, r, c) < m) return;
    bound = std::max(bound, std::abs(at_origin - mutual_information(GaussianModeState(mean_photons, r, c, m), eta)));
  };
  step_change(dr, 0.0, 0.0);
  step_change(0.0, dc, 0.0);
  step_change(0.0, 0.0, max_displacement_sq(mean_photons, 0.0, 0.0) / (grid.m_points - 1));
  best->resolution_bound = bound;
  return *best;
}

}  // namespace lossycap
