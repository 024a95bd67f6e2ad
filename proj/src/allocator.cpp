#include "lossycap/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace lossycap {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// ln(1e-300): occupancies below this are treated as empty modes.
const double kLogMinOccupancy = std::log(1e-300);
constexpr double kLogMaxOccupancy = 700.0;

// c * log(1 + 1/(c n)), zero when the coefficient vanishes.
double weighted_log_term(double c, double n) { return c == 0.0 ? 0.0 : c * log1p_inverse(c * n); }

void check_marginal_decreasing(const RateFunction& rate) {
  constexpr int kPoints = 121;
  const double log_lo = std::log(1e-6);
  const double log_hi = std::log(1e4);
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kPoints; ++k) {
    const double n = std::exp(log_lo + (log_hi - log_lo) * k / (kPoints - 1));
    const double m = rate.marginal_nats(n);
    if (!(m < previous)) {
      std::ostringstream msg;
      msg << "rate " << to_string(rate.kind()) << " at eta=" << rate.eta()
          << " has a marginal that is not strictly decreasing near N=" << n;
      throw NumericalFailure(msg.str(), m, previous);
    }
    previous = m;
  }
}

template <class Error>
[[noreturn]] void rethrow_for_mode(const Error& error, std::size_t index, double omega) {
  std::ostringstream msg;
  msg << error.what() << " (mode " << index << ", omega=" << omega << ")";
  if constexpr (std::is_same_v<Error, NumericalFailure>) {
    throw NumericalFailure(msg.str(), error.best_estimate(), error.error_bound());
  } else {
    throw Error(msg.str());
  }
}

}  // namespace

std::string_view to_string(RateKind kind) {
  switch (kind) {
    case RateKind::EntanglementAssisted:
      return "EntanglementAssisted";
    case RateKind::HolevoCoherent:
      return "HolevoCoherent";
    case RateKind::CoherentInfo:
      return "CoherentInfo";
  }
  return "unknown";
}

RateKind parse_rate_kind(std::string_view text) {
  if (text == "ea" || text == "EntanglementAssisted") return RateKind::EntanglementAssisted;
  if (text == "holevo" || text == "HolevoCoherent") return RateKind::HolevoCoherent;
  if (text == "coherent" || text == "CoherentInfo") return RateKind::CoherentInfo;
  throw DomainError("unknown rate kind '" + std::string(text) + "' (expected ea, holevo or coherent)");
}

RateFunction::RateFunction(RateKind kind, Efficiency eta) : kind_(kind), eta_(eta.value()) {
  switch (kind_) {
    case RateKind::EntanglementAssisted:
    case RateKind::HolevoCoherent:
      degenerate_ = eta_ == 0.0;
      break;
    case RateKind::CoherentInfo:
      if (!(eta_ > 0.5)) throw DomainError("coherent-information bound is zero for eta ≤ 1/2");
      break;
  }
  if (!degenerate_) check_marginal_decreasing(*this);
}

double RateFunction::value(double n) const {
  const Efficiency eta(eta_);
  switch (kind_) {
    case RateKind::EntanglementAssisted:
      return ce_single_mode(n, eta);
    case RateKind::HolevoCoherent:
      return holevo_chi_coherent(n, eta);
    case RateKind::CoherentInfo:
      return coherent_information(n, eta);
  }
  return 0.0;
}

double RateFunction::marginal_nats(double n) const {
  if (!(n > 0.0)) {
    if (n == 0.0) return std::numeric_limits<double>::infinity();
    throw DomainError("marginal rate needs N >= 0");
  }
  switch (kind_) {
    case RateKind::EntanglementAssisted:
      return log1p_inverse(n) + weighted_log_term(eta_, n) - weighted_log_term(1.0 - eta_, n);
    case RateKind::HolevoCoherent:
      return weighted_log_term(eta_, n);
    case RateKind::CoherentInfo:
      return weighted_log_term(eta_, n) - weighted_log_term(1.0 - eta_, n);
  }
  return 0.0;
}

double RateFunction::marginal(double n) const { return marginal_nats(n) / kLn2; }

double RateFunction::tail_decay_rate() const {
  if (degenerate_) return 1.0;
  switch (kind_) {
    case RateKind::EntanglementAssisted:
      return 1.0 / (2.0 * eta_);
    case RateKind::HolevoCoherent:
      return 1.0 / eta_;
    case RateKind::CoherentInfo:
      return 1.0 / (2.0 * eta_ - 1.0);
  }
  return 1.0;
}

double occupancy_from_multiplier(double x, const RateFunction& rate, const ToleranceConfig& tol) {
  if (!std::isfinite(x) || !(x > 0.0)) {
    std::ostringstream msg;
    msg << "occupancy_from_multiplier: omega/Omega must be positive and finite, got " << x;
    throw DomainError(msg.str());
  }
  if (rate.degenerate()) return 1.0 / std::expm1(x);
  if (rate.kind() == RateKind::EntanglementAssisted && rate.eta() == 1.0) {
    return 1.0 / std::expm1(0.5 * x);
  }

  // Stationarity in log space: ln LHS - ln RHS of the Lagrange condition,
  // scaled by x so the residual is relative at both ends of the spectrum.
  const auto residual = [&rate, x](double log_n) { return rate.marginal_nats(std::exp(log_n)) / x - 1.0; };
  if (residual(kLogMinOccupancy) <= 0.0) return 0.0;
  double hi = 40.0;
  while (residual(hi) > 0.0) {
    hi *= 2.0;
    if (hi > kLogMaxOccupancy) {
      std::ostringstream msg;
      msg << "occupancy_from_multiplier: no root below N=e^" << kLogMaxOccupancy << " for x=" << x;
      throw NumericalFailure(msg.str(), std::exp(kLogMaxOccupancy), std::numeric_limits<double>::infinity());
    }
  }
  const double log_n = find_root_bracketed(residual, kLogMinOccupancy, hi, tol);
  return std::exp(log_n);
}

ModeGrid::ModeGrid(std::vector<double> frequencies) : frequencies_(std::move(frequencies)) {
  if (frequencies_.empty()) throw DomainError("mode grid is empty");
  for (std::size_t i = 0; i < frequencies_.size(); ++i) {
    if (!std::isfinite(frequencies_[i]) || !(frequencies_[i] > 0.0)) {
      throw DomainError("mode frequencies must be positive and finite");
    }
    if (i > 0 && !(frequencies_[i] > frequencies_[i - 1])) {
      throw DomainError("mode frequencies must be strictly increasing");
    }
  }
}

ModeGrid ModeGrid::uniform(double first, double spacing, std::size_t count) {
  std::vector<double> omegas(count);
  for (std::size_t i = 0; i < count; ++i) omegas[i] = first + static_cast<double>(i) * spacing;
  return ModeGrid(std::move(omegas));
}

PowerBudget::PowerBudget(double total_energy, double delta_omega)
    : total_energy_(total_energy), delta_omega_(delta_omega) {
  if (!std::isfinite(total_energy) || !(total_energy > 0.0)) throw DomainError("total energy must be positive");
  if (!std::isfinite(delta_omega) || !(delta_omega > 0.0)) throw DomainError("mode spacing must be positive");
}

PowerBudget PowerBudget::from_power(double power, double transmission_time) {
  if (!std::isfinite(power) || !(power > 0.0)) throw DomainError("power must be positive");
  if (!std::isfinite(transmission_time) || !(transmission_time > 0.0)) {
    throw DomainError("transmission time must be positive");
  }
  return PowerBudget(power * transmission_time, kTwoPi / transmission_time);
}

double PowerBudget::transmission_time() const { return kTwoPi / delta_omega_; }

double PowerBudget::power() const { return total_energy_ * delta_omega_ / kTwoPi; }

SpectralAllocation discrete_allocation(const ModeGrid& grid, const PowerBudget& budget,
                                       const RateFunction& rate, const ToleranceConfig& tol) {
  const auto& omegas = grid.frequencies();
  const auto occupancy = [&](std::size_t i, double multiplier) {
    try {
      return occupancy_from_multiplier(omegas[i] / multiplier, rate, tol);
    } catch (const NumericalFailure& e) {
      rethrow_for_mode(e, i, omegas[i]);
    } catch (const BracketingError& e) {
      rethrow_for_mode(e, i, omegas[i]);
    }
  };
  const auto energy = [&](double log_multiplier) {
    const double multiplier = std::exp(log_multiplier);
    double total = 0.0;
    for (std::size_t i = 0; i < omegas.size(); ++i) total += omegas[i] * occupancy(i, multiplier);
    return total;
  };

  const double target = budget.total_energy();
  const double log_multiplier =
      bisect_monotone(energy, target, std::log(omegas.front()) - 1.0, std::log(omegas.back()) + 1.0, tol);

  SpectralAllocation out;
  out.multiplier = std::exp(log_multiplier);
  out.modes.reserve(omegas.size());
  out.total_rate_bits = 0.0;
  out.stationarity_residual = 0.0;
  double achieved = 0.0;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    const double n = occupancy(i, out.multiplier);
    const double bits = rate.value(n);
    out.modes.push_back({omegas[i], n, bits});
    out.total_rate_bits += bits;
    achieved += omegas[i] * n;
    if (!rate.degenerate() && n > 0.0) {
      const double mismatch = std::abs(rate.marginal_nats(n) * out.multiplier - omegas[i]) / omegas[i];
      out.stationarity_residual = std::max(out.stationarity_residual, mismatch);
    }
  }
  out.energy_residual = std::abs(achieved - target) / target;
  return out;
}

double f_eta(const RateFunction& rate, const ToleranceConfig& tol) {
  return continuum_capacity(rate, tol).f;
}

double omega_from_power(const PowerBudget& budget, double f_value, double hbar) {
  if (!(f_value > 0.0) || !std::isfinite(f_value)) throw DomainError("omega_from_power: f must be positive");
  if (!(hbar > 0.0)) throw DomainError("omega_from_power: hbar must be positive");
  return std::sqrt(kTwoPi * budget.power() / (f_value * hbar));
}

ContinuumIntegrals continuum_capacity(const RateFunction& rate, const ToleranceConfig& tol) {
  QuadratureOptions options;
  options.decay_rate = rate.tail_decay_rate();
  options.singular_at_lower = true;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  const auto energy_density = [&](double x) { return x * occupancy_from_multiplier(x, rate, tol); };
  ContinuumIntegrals out;
  out.f = adaptive_quadrature(energy_density, 0.0, kInf, tol, options).value;
  if (rate.degenerate()) {
    out.rate_integral = 0.0;
  } else {
    const auto rate_density = [&](double x) { return rate.value(occupancy_from_multiplier(x, rate, tol)); };
    out.rate_integral = adaptive_quadrature(rate_density, 0.0, kInf, tol, options).value;
  }
  return out;
}

}  // namespace lossycap
