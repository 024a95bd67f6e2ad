#include "lossycap/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "lossycap/allocator.hpp"
#include "lossycap/capacities.hpp"
#include "lossycap/output.hpp"
#include "lossycap/single_mode.hpp"
#include "lossycap/verification.hpp"

#ifndef LOSSYCAP_VERSION
#define LOSSYCAP_VERSION "0.0.0"
#endif

namespace lossycap::cli {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

/// Bad user input that is not a numerical domain problem (missing budget, unreadable file...).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;

  std::optional<double> tol;
  std::string out = "-";
  std::string format;
  bool quiet = false;
  double hbar = 1.0;
  bool no_timestamp = false;

  std::optional<double> eta;
  double eta_min = 0.0;
  double eta_max = 1.0;
  std::optional<int> steps;
  std::vector<double> zetas;

  std::optional<double> power;
  std::optional<double> time;
  std::optional<double> energy;
  std::optional<double> delta_omega;

  std::string rate = "ea";
  std::string modes_file;
  std::optional<double> spacing;
  std::optional<double> first;
  std::optional<std::size_t> count;

  std::optional<double> photons;
  double squeezing = 0.0;
  double correlation = 0.0;
  double displacement_sq = 0.0;

  double figure_photons = 10.0;
  int figure_points = 101;

  std::string inject_fault;
};

ToleranceConfig numerics_tolerance(const RunConfig& config) {
  ToleranceConfig tol;
  if (config.tol && config.command != "verify") tol.quad_target = *config.tol;
  tol.validate();
  return tol;
}

std::string tolerance_line(const ToleranceConfig& tol) {
  std::ostringstream line;
  line << "tolerances: rel_tol=" << output::format_number(tol.rel_tol)
       << " abs_tol=" << output::format_number(tol.abs_tol) << " max_iterations=" << tol.max_iterations
       << " quad_target=" << output::format_number(tol.quad_target);
  return line.str();
}

// key=value pairs of everything that shapes the output, in a fixed order.
std::vector<std::pair<std::string, std::string>> parameters(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> p;
  auto num = [&p](const std::string& key, const std::optional<double>& v) {
    if (v) p.emplace_back(key, output::format_number(*v));
  };
  num("eta", c.eta);
  if (c.command == "ce-curve") {
    num("eta_min", c.eta_min);
    num("eta_max", c.eta_max);
    p.emplace_back("steps", c.steps ? std::to_string(*c.steps) : std::string("default"));
  }
  num("power", c.power);
  num("time", c.time);
  num("energy", c.energy);
  num("delta_omega", c.delta_omega);
  if (c.command == "allocate") {
    p.emplace_back("rate", c.rate);
    if (!c.modes_file.empty()) p.emplace_back("modes_file", c.modes_file);
    num("spacing", c.spacing);
    num("first", c.first);
    if (c.count) p.emplace_back("count", std::to_string(*c.count));
  }
  if (c.command == "single-mode") {
    num("N", c.photons);
    num("r", c.squeezing);
    num("c", c.correlation);
    num("m", c.displacement_sq);
  }
  if (c.command == "figures") {
    num("N", c.figure_photons);
    p.emplace_back("points", std::to_string(c.figure_points));
  }
  if (!c.zetas.empty()) {
    std::string list;
    for (double z : c.zetas) list += (list.empty() ? "" : ";") + output::format_number(z);
    p.emplace_back("zeta", list);
  }
  if (c.command == "verify") num("tolerance_floor", c.tol);
  if (c.hbar != 1.0) num("hbar", c.hbar);
  return p;
}

std::vector<std::string> header_comments(const RunConfig& config, const ToleranceConfig& tol) {
  std::string params;
  for (const auto& [k, v] : parameters(config)) params += (params.empty() ? "" : " ") + k + "=" + v;
  return {"lossycap " LOSSYCAP_VERSION " " + config.command, "parameters: " + (params.empty() ? "none" : params),
          tolerance_line(tol), "units: hbar=" + output::format_number(config.hbar) +
                                   "; capacities per unit T*R_C unless labelled bits/qubits"};
}

ordered_json provenance(const RunConfig& config, const ToleranceConfig& tol) {
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : parameters(config)) params[k] = v;
  return {{"command", config.command},
          {"version", LOSSYCAP_VERSION},
          {"parameters", params},
          {"tolerances",
           {{"rel_tol", tol.rel_tol},
            {"abs_tol", tol.abs_tol},
            {"max_iterations", tol.max_iterations},
            {"quad_target", tol.quad_target}}},
          {"hbar", config.hbar}};
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Writes through `emit` to stdout or to a file path.
void emit_to(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& emit) {
  if (path.empty() || path == "-") {
    emit(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot open output file '" + path + "' for writing");
  emit(file);
  if (!file) throw UsageError("failed writing output file '" + path + "'");
}

void write_table_json(std::ostream& out, const output::Table& table, const ordered_json& meta) {
  ordered_json doc = {{"provenance", meta}, {"columns", table.columns}};
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < table.columns.size() && i < row.size(); ++i) obj[table.columns[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  if (!table.footer.empty()) doc["notes"] = table.footer;
  out << doc.dump(2) << '\n';
}

void emit_table(const RunConfig& config, const ToleranceConfig& tol, const output::Table& table,
                const output::PlotSpec& plot, std::ostream& out) {
  const std::string format = config.format.empty() ? "csv" : config.format;
  emit_to(config.out, out, [&](std::ostream& os) {
    if (format == "csv") {
      output::write_csv(os, table);
    } else if (format == "json") {
      write_table_json(os, table, provenance(config, tol));
    } else if (format == "svg") {
      output::PlotSpec spec = plot;
      if (!config.no_timestamp) spec.timestamp = utc_timestamp();
      output::write_svg(os, table, spec);
    } else {
      throw UsageError("format '" + format + "' is not supported by " + config.command);
    }
  });
}

/// Evaluates fn(i) for i in [0, n) on a small thread pool; results keep index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
  std::vector<T> results(n);
  std::atomic<std::size_t> next{0};
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) results[i] = fn(i);
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

struct RowResult {
  std::vector<double> values;
  std::string error;
};

RowResult guarded_row(const std::function<std::vector<double>()>& compute) {
  try {
    return {compute(), ""};
  } catch (const std::exception& e) {
    return {{}, e.what()};
  }
}

void check_eta(double eta, const char* name) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0, 1], got " + output::format_number(eta));
  }
}

// 0, k/200 for k = 1..199, 1: the design grid, with eta = 1/2 represented exactly.
std::vector<double> default_eta_grid() {
  std::vector<double> etas{0.0};
  for (int k = 1; k <= 199; ++k) etas.push_back(k / 200.0);
  etas.push_back(1.0);
  return etas;
}

std::vector<double> eta_grid(const RunConfig& config) {
  check_eta(config.eta_min, "--eta-min");
  check_eta(config.eta_max, "--eta-max");
  if (config.eta_min > config.eta_max) throw DomainError("--eta-min must not exceed --eta-max");
  if (!config.steps && config.eta_min == 0.0 && config.eta_max == 1.0) return default_eta_grid();
  const int steps = config.steps.value_or(201);
  if (steps < 1) throw DomainError("--steps must be at least 1");
  std::vector<double> etas;
  for (int k = 0; k < steps; ++k) {
    if (steps == 1) {
      etas.push_back(config.eta_min);
    } else if (k + 1 == steps) {
      etas.push_back(config.eta_max);
    } else {
      etas.push_back(config.eta_min + (config.eta_max - config.eta_min) * k / (steps - 1));
    }
  }
  return etas;
}

std::string zeta_column(double zeta) { return "bound_zeta_" + output::format_number(zeta); }

// Rows of the capacity curve; failed rows are reported and dropped.
int curve_rows(const std::vector<double>& etas, const std::function<std::vector<double>(double)>& row,
               output::Table& table, std::ostream& err, bool quiet) {
  const auto results = parallel_map<RowResult>(etas.size(), [&](std::size_t i) {
    return guarded_row([&] { return row(etas[i]); });
  });
  int status = kSuccess;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].error.empty()) {
      table.rows.push_back(results[i].values);
      continue;
    }
    status = kNumericalFailure;
    const std::string note = "row eta=" + output::format_number(etas[i]) + " skipped: " + results[i].error;
    table.footer.push_back(note);
    if (!quiet) err << "lossycap: " << note << '\n';
  }
  return status;
}

int cmd_ce_curve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const ToleranceConfig tol = numerics_tolerance(config);
  for (double z : config.zetas) {
    if (!(z > 0.0)) throw DomainError("--zeta values must be positive");
  }
  const auto etas = eta_grid(config);
  output::Table table;
  table.comments = header_comments(config, tol);
  table.columns = {"eta", "C", "C_linear", "bound_zeta_1", "bound_zeta_inv_sqrt_eta"};
  for (double z : config.zetas) table.columns.push_back(zeta_column(z));

  const int status = curve_rows(
      etas,
      [&](double e) {
        const Efficiency eta(e);
        std::vector<double> row{e, c_of_eta(eta, tol), c_of_eta_linearized(eta), lower_bound_zeta(eta, 1.0, tol),
                                e > 0.0 ? lower_bound_zeta(eta, 1.0 / std::sqrt(e), tol) : 0.0};
        for (double z : config.zetas) row.push_back(lower_bound_zeta(eta, z, tol));
        return row;
      },
      table, err, config.quiet);
  emit_table(config, tol, table, {"Entanglement-assisted capacity C(eta)", "eta", "C / (T R_C)", 0, ""}, out);
  return status;
}

PowerBudget budget_from(const RunConfig& config) {
  const bool by_power = config.power || config.time;
  const bool by_energy = config.energy || config.delta_omega;
  if (by_power && by_energy) throw UsageError("give either --power/--time or --energy/--delta-omega, not both");
  if (by_power) {
    if (!config.power || !config.time) throw UsageError("--power and --time must be given together");
    return PowerBudget::from_power(*config.power, *config.time);
  }
  if (by_energy) {
    if (!config.energy || !config.delta_omega) throw UsageError("--energy and --delta-omega must be given together");
    return PowerBudget(*config.energy, *config.delta_omega);
  }
  throw UsageError("a budget is required: --power P --time T, or --energy E --delta-omega dw");
}

int cmd_capacity(const RunConfig& config, std::ostream& out) {
  const ToleranceConfig tol = numerics_tolerance(config);
  check_eta(*config.eta, "--eta");
  const PowerBudget budget = budget_from(config);
  ReportOptions options;
  options.hbar = config.hbar;
  options.zeta_scan = config.zetas;
  const auto r = capacity_report(Efficiency(*config.eta), budget, tol, options);

  ordered_json zetas = ordered_json::array();
  for (const auto& b : r.bounds_zeta) zetas.push_back({{"zeta", b.zeta}, {"value", b.value}});
  ordered_json doc = {
      {"provenance", provenance(config, tol)},
      {"eta", r.eta},
      {"c_of_eta", r.c_of_eta},
      {"linearized", r.linearized},
      {"C_E", r.capacity_bits},
      {"Q_E", r.quantum_qubits},
      {"R_E", r.assisted_rate},
      {"R_C", r.noiseless_rate},
      {"classical_lower", r.classical_lower_bits},
      {"quantum_lower", r.quantum_lower_qubits},
      {"bounds_zeta", zetas},
      {"dimensionless",
       {{"c_of_eta", r.c_of_eta},
        {"Q_E", 0.5 * r.c_of_eta},
        {"classical_lower", r.classical_lower_ratio},
        {"quantum_lower", r.quantum_lower_ratio},
        {"f_eta", r.f_eta}}},
      {"budget",
       {{"power", r.power},
        {"transmission_time", r.transmission_time},
        {"total_energy", r.total_energy},
        {"Omega", r.multiplier},
        {"Omega0", r.omega0}}},
      {"units",
       {{"C_E", "bits"},
        {"Q_E", "qubits"},
        {"R_E", "bits per unit time"},
        {"R_C", "bits per unit time"},
        {"classical_lower", "bits"},
        {"quantum_lower", "qubits"},
        {"dimensionless", "units of T*R_C"}}},
  };
  const std::string format = config.format.empty() ? "json" : config.format;
  emit_to(config.out, out, [&](std::ostream& os) {
    if (format == "json") {
      os << doc.dump(2) << '\n';
    } else if (format == "csv") {
      output::Table table;
      table.comments = header_comments(config, tol);
      table.columns = {"eta", "c_of_eta", "C_E", "Q_E", "R_E", "R_C", "classical_lower", "quantum_lower", "linearized"};
      table.rows.push_back({r.eta, r.c_of_eta, r.capacity_bits, r.quantum_qubits, r.assisted_rate, r.noiseless_rate,
                            r.classical_lower_bits, r.quantum_lower_qubits, r.linearized});
      output::write_csv(os, table);
    } else {
      throw UsageError("capacity supports --format json or csv");
    }
  });
  return kSuccess;
}

std::vector<double> read_mode_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read mode file '" + path + "'");
  std::vector<double> omegas;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    fields.imbue(std::locale::classic());
    double value;
    if (!(fields >> value)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw UsageError(path + ":" + std::to_string(number) + ": expected one frequency per line");
    }
    std::string trailing;
    if (fields >> trailing) throw UsageError(path + ":" + std::to_string(number) + ": expected one frequency per line");
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw UsageError(path + ":" + std::to_string(number) + ": frequencies must be positive");
    }
    omegas.push_back(value);
  }
  if (omegas.empty()) throw UsageError("mode file '" + path + "' has no frequencies");
  return omegas;
}

int cmd_allocate(const RunConfig& config, std::ostream& out) {
  const ToleranceConfig tol = numerics_tolerance(config);
  check_eta(*config.eta, "--eta");
  const RateFunction rate(parse_rate_kind(config.rate), Efficiency(*config.eta));

  std::optional<ModeGrid> grid;
  if (!config.modes_file.empty()) {
    if (config.spacing || config.count) throw UsageError("--modes-file cannot be combined with --spacing/--count");
    grid.emplace(read_mode_file(config.modes_file));
  } else {
    if (!config.spacing || !config.count) throw UsageError("give --modes-file, or --spacing with --count");
    if (!(*config.spacing > 0.0)) throw DomainError("--spacing must be positive");
    if (*config.count == 0) throw DomainError("--count must be positive");
    grid.emplace(ModeGrid::uniform(config.first.value_or(*config.spacing), *config.spacing, *config.count));
  }
  if (!config.energy) throw UsageError("--energy is required");
  double spacing = config.delta_omega.value_or(config.spacing.value_or(0.0));
  if (spacing == 0.0) {
    const auto& f = grid->frequencies();
    spacing = f.size() > 1 ? f[1] - f[0] : f[0];
  }
  const PowerBudget budget(*config.energy, spacing);
  const auto allocation = discrete_allocation(*grid, budget, rate, tol);

  output::Table table;
  table.comments = header_comments(config, tol);
  table.columns = {"omega", "N", "rate_contribution_bits"};
  for (const auto& mode : allocation.modes) table.rows.push_back({mode.omega, mode.photons, mode.rate_bits});
  table.footer.push_back("Omega=" + output::format_number(allocation.multiplier) +
                         " total_rate_bits=" + output::format_number(allocation.total_rate_bits) +
                         " energy_residual=" + output::format_number(allocation.energy_residual) +
                         " stationarity_residual=" + output::format_number(allocation.stationarity_residual));

  const std::string format = config.format.empty() ? "csv" : config.format;
  if (format == "json") {
    ordered_json modes = ordered_json::array();
    for (const auto& mode : allocation.modes) {
      modes.push_back({{"omega", mode.omega}, {"N", mode.photons}, {"rate_contribution_bits", mode.rate_bits}});
    }
    ordered_json doc = {{"provenance", provenance(config, tol)},
                        {"rate", to_string(rate.kind())},
                        {"Omega", allocation.multiplier},
                        {"total_rate_bits", allocation.total_rate_bits},
                        {"energy_residual", allocation.energy_residual},
                        {"stationarity_residual", allocation.stationarity_residual},
                        {"modes", modes}};
    emit_to(config.out, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
    return kSuccess;
  }
  emit_table(config, tol, table, {"Spectral allocation", "omega", "N", 0, ""}, out);
  return kSuccess;
}

int cmd_single_mode(const RunConfig& config, std::ostream& out) {
  check_eta(*config.eta, "--eta");
  const Efficiency eta(*config.eta);
  const double n = *config.photons;
  const GaussianModeState state(n, config.squeezing, config.correlation, config.displacement_sq);
  const auto spectrum = symplectic_spectrum(state);
  const std::vector<std::pair<std::string, double>> fields = {
      {"n0", state.n0()},
      {"lambda_plus", spectrum.plus},
      {"lambda_minus", spectrum.minus},
      {"mutual_information_bits", mutual_information(state, eta)},
      {"c_E_bits", ce_single_mode(n, eta)},
      {"coherent_information_bits", coherent_information(n, eta)},
      {"holevo_chi_bits", holevo_chi_coherent(n, eta)},
  };
  const std::string format = config.format.empty() ? "text" : config.format;
  const ToleranceConfig tol = numerics_tolerance(config);
  emit_to(config.out, out, [&](std::ostream& os) {
    if (format == "text") {
      for (const auto& line : header_comments(config, tol)) os << "# " << line << '\n';
      for (const auto& [k, v] : fields) os << k << " = " << output::format_number(v) << '\n';
    } else if (format == "json") {
      ordered_json doc = {{"provenance", provenance(config, tol)}};
      for (const auto& [k, v] : fields) doc[k] = v;
      os << doc.dump(2) << '\n';
    } else if (format == "csv") {
      output::Table table;
      table.comments = header_comments(config, tol);
      for (const auto& [k, v] : fields) table.columns.push_back(k);
      table.rows.emplace_back();
      for (const auto& [k, v] : fields) table.rows.back().push_back(v);
      output::write_csv(os, table);
    } else {
      throw UsageError("single-mode supports --format text, json or csv");
    }
  });
  return kSuccess;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  VerifyOptions options;
  options.tolerance_floor = config.tol.value_or(0.0);
  options.inject_fault = config.inject_fault;
  if (!options.inject_fault.empty()) {
    const auto names = verification_check_names();
    if (std::find(names.begin(), names.end(), options.inject_fault) == names.end()) {
      throw UsageError("unknown check '" + options.inject_fault + "' for --inject-fault");
    }
  }
  const auto results = run_verification(options);

  ordered_json checks = ordered_json::array();
  std::vector<std::string> failures;
  for (const auto& r : results) {
    if (!config.quiet) {
      char line[160];
      std::snprintf(line, sizeof line, "%s %-20s value=%-14.9g expected=%-10.6g tol=%-8.1e (%.2f s)",
                    r.passed ? "PASS" : "FAIL", r.name.c_str(), r.value, r.expected, r.tolerance, r.seconds);
      err << line << '\n';
    }
    if (!r.passed) failures.push_back(r.name);
    checks.push_back({{"name", r.name},
                      {"passed", r.passed},
                      {"value", r.value},
                      {"expected", r.expected},
                      {"tolerance", r.tolerance},
                      {"detail", r.detail}});
  }
  const ToleranceConfig tol = numerics_tolerance(config);
  ordered_json doc = {{"provenance", provenance(config, tol)},
                      {"passed", failures.empty()},
                      {"checks_run", results.size()},
                      {"checks_passed", results.size() - failures.size()},
                      {"failures", failures},
                      {"checks", checks}};
  emit_to(config.out, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
  if (failures.empty()) return kSuccess;
  std::string list;
  for (const auto& f : failures) list += (list.empty() ? "" : ", ") + f;
  err << "lossycap: verification failed: " << list << '\n';
  return kVerificationFailed;
}

int cmd_figures(const RunConfig& config, std::ostream& err) {
  const ToleranceConfig tol = numerics_tolerance(config);
  const fs::path dir = config.out == "-" ? fs::path("figures") : fs::path(config.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory '" + dir.string() + "': " + ec.message());
  if (!(config.figure_photons > 0.0)) throw DomainError("--N must be positive");
  if (config.figure_points < 2) throw DomainError("--points must be at least 2");

  const auto write = [&](const std::string& stem, const output::Table& table, const output::PlotSpec& plot) {
    emit_to((dir / (stem + ".csv")).string(), err, [&](std::ostream& os) { output::write_csv(os, table); });
    output::PlotSpec spec = plot;
    if (!config.no_timestamp) spec.timestamp = utc_timestamp();
    emit_to((dir / (stem + ".svg")).string(), err, [&](std::ostream& os) { output::write_svg(os, table, spec); });
    if (!config.quiet) err << "wrote " << (dir / stem).string() << ".{csv,svg}\n";
  };

  // fig1a, fig1b: wideband capacities and bounds against efficiency.
  const auto etas = default_eta_grid();
  output::Table fig1a;
  fig1a.comments = header_comments(config, tol);
  fig1a.columns = {"eta", "C", "C_linear", "bound_zeta_1", "bound_zeta_inv_sqrt_eta"};
  output::Table fig1b;
  fig1b.comments = fig1a.comments;
  fig1b.columns = {"eta", "C", "C_half", "sqrt_eta", "Q_s"};
  output::Table combined;
  const int status = curve_rows(
      etas,
      [&](double e) {
        const Efficiency eta(e);
        const double c = c_of_eta(eta, tol);
        return std::vector<double>{e,
                                   c,
                                   c_of_eta_linearized(eta),
                                   lower_bound_zeta(eta, 1.0, tol),
                                   e > 0.0 ? lower_bound_zeta(eta, 1.0 / std::sqrt(e), tol) : 0.0,
                                   0.5 * c,
                                   classical_lower_bound(eta),
                                   quantum_lower_bound(eta, tol)};
      },
      combined, err, config.quiet);
  for (const auto& row : combined.rows) {
    fig1a.rows.push_back({row[0], row[1], row[2], row[3], row[4]});
    fig1b.rows.push_back({row[0], row[1], row[5], row[6], row[7]});
  }
  fig1a.footer = combined.footer;
  fig1b.footer = combined.footer;
  write("fig1a", fig1a, {"Entanglement-assisted capacity and bounds", "eta", "C / (T R_C)", 0, ""});
  write("fig1b", fig1b, {"Classical and quantum capacity bounds", "eta", "capacity / (T R_C)", 0, ""});

  // fig2a..fig2c: single-mode mutual information along each input parameter.
  const double n = config.figure_photons;
  const std::vector<double> fig2_etas = {0.25, 0.5, 0.75};
  const auto sweep = [&](const std::string& axis, double upper, auto make_state) {
    output::Table table;
    table.comments = header_comments(config, tol);
    table.columns = {axis};
    for (double e : fig2_etas) table.columns.push_back("I_eta_" + output::format_number(e));
    for (int k = 0; k < config.figure_points; ++k) {
      const double x = k + 1 == config.figure_points ? upper : upper * k / (config.figure_points - 1);
      std::vector<double> row{x};
      const GaussianModeState state = make_state(x);
      for (double e : fig2_etas) row.push_back(mutual_information(state, Efficiency(e)));
      table.rows.push_back(std::move(row));
    }
    return table;
  };
  const double c_max = std::sqrt(4.0 * n * (n + 1.0));
  write("fig2a", sweep("r", 3.0, [n](double r) { return GaussianModeState(n, r, 0.0, 0.0); }),
        {"Mutual information vs squeezing (c = m = 0)", "r", "I (bits)", 0, ""});
  write("fig2b", sweep("c", c_max, [n](double c) { return GaussianModeState(n, 0.0, c, 0.0); }),
        {"Mutual information vs correlation (r = m = 0)", "c", "I (bits)", 0, ""});
  write("fig2c", sweep("m", 2.0 * n, [n](double m) { return GaussianModeState(n, 0.0, 0.0, m); }),
        {"Mutual information vs displacement (r = c = 0)", "m", "I (bits)", 0, ""});
  return status;
}

void add_budget_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--power", config.power, "Input power P (hbar = 1 units)");
  cmd->add_option("--time", config.time, "Transmission time T = 2 pi / delta_omega");
  cmd->add_option("--energy", config.energy, "Total energy E");
  cmd->add_option("--delta-omega", config.delta_omega, "Mode spacing delta_omega");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Capacities of the broadband lossy bosonic channel", "lossycap"};
  app.set_version_flag("--version", LOSSYCAP_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--tol", config.tol,
                 "Quadrature target (relative); for verify, a floor applied to every check tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", config.out, "Output file ('-' for stdout); output directory for figures");
  app.add_option("--format", config.format, "Output format")->check(CLI::IsMember({"csv", "json", "svg", "text"}));
  app.add_flag("--quiet", config.quiet, "Suppress progress and diagnostic lines on stderr");
  app.add_option("--hbar", config.hbar, "Value of hbar used when reporting absolute rates")->check(CLI::PositiveNumber);
  app.add_flag("--no-timestamp", config.no_timestamp, "Omit the generation timestamp from SVG output");

  auto* curve = app.add_subcommand("ce-curve", "C(eta) with its linearization and zeta lower bounds");
  curve->add_option("--eta-min", config.eta_min, "Lower end of the efficiency range");
  curve->add_option("--eta-max", config.eta_max, "Upper end of the efficiency range");
  curve->add_option("--steps", config.steps, "Number of uniformly spaced efficiencies");
  curve->add_option("--zeta", config.zetas, "Additional zeta values for lower-bound columns");

  auto* capacity = app.add_subcommand("capacity", "Full capacity report for one efficiency and budget");
  capacity->add_option("--eta", config.eta, "Quantum efficiency")->required();
  add_budget_options(capacity, config);
  capacity->add_option("--zeta", config.zetas, "Additional zeta values for the bound scan");

  auto* allocate = app.add_subcommand("allocate", "Discrete water-filling over a mode grid");
  allocate->add_option("--eta", config.eta, "Quantum efficiency")->required();
  allocate->add_option("--rate", config.rate, "Rate kind: ea, holevo or coherent")
      ->check(CLI::IsMember({"ea", "holevo", "coherent"}));
  allocate->add_option("--energy", config.energy, "Total energy E");
  allocate->add_option("--delta-omega", config.delta_omega, "Mode spacing used for T and P bookkeeping");
  allocate->add_option("--modes-file", config.modes_file, "Text file with one positive frequency per line");
  allocate->add_option("--spacing", config.spacing, "Uniform grid spacing");
  allocate->add_option("--first", config.first, "First frequency of the uniform grid (default: spacing)");
  allocate->add_option("--count", config.count, "Number of modes in the uniform grid");

  auto* single = app.add_subcommand("single-mode", "Single-mode information quantities for a Gaussian input");
  single->add_option("--N", config.photons, "Mean photon number")->required();
  single->add_option("--eta", config.eta, "Quantum efficiency")->required();
  single->add_option("--r", config.squeezing, "Squeezing parameter");
  single->add_option("--c", config.correlation, "Quadrature correlation");
  single->add_option("--m", config.displacement_sq, "Squared displacement");

  auto* verify = app.add_subcommand("verify", "Run the built-in anchor checks");
  verify->add_option("--inject-fault", config.inject_fault)->group("");

  auto* figures = app.add_subcommand("figures", "Write figure datasets (CSV) and plots (SVG)");
  figures->add_option("--N", config.figure_photons, "Mean photon number for the single-mode sweeps");
  figures->add_option("--points", config.figure_points, "Points per single-mode sweep");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInvalidArguments;
  }

  for (auto* sub : app.get_subcommands()) config.command = sub->get_name();
  try {
    if (config.command == "ce-curve") return cmd_ce_curve(config, out, err);
    if (config.command == "capacity") return cmd_capacity(config, out);
    if (config.command == "allocate") return cmd_allocate(config, out);
    if (config.command == "single-mode") return cmd_single_mode(config, out);
    if (config.command == "verify") return cmd_verify(config, out, err);
    if (config.command == "figures") return cmd_figures(config, err);
  } catch (const DomainError& e) {
    err << "lossycap: " << e.what() << '\n';
    return kInvalidArguments;
  } catch (const UsageError& e) {
    err << "lossycap: " << e.what() << '\n';
    return kInvalidArguments;
  } catch (const NumericalFailure& e) {
    err << "lossycap: numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const BracketingError& e) {
    err << "lossycap: numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "lossycap: " << e.what() << '\n';
    return kNumericalFailure;
  }
  err << "lossycap: unknown command\n";
  return kInvalidArguments;
}

}  // namespace lossycap::cli
