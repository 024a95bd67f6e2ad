#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "lossycap/cli.hpp"
#include "lossycap/numerics.hpp"

using doctest::Approx;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = lossycap::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct Csv {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    FAIL("missing column " << name);
    return 0;
  }
};

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      csv.comments.push_back(line.substr(2));
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (csv.columns.empty()) {
      csv.columns = fields;
    } else {
      std::vector<double> row;
      for (const auto& f : fields) row.push_back(std::stod(f));
      csv.rows.push_back(row);
    }
  }
  return csv;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lossycap_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Key = value pairs of the single-mode text output.
std::map<std::string, double> parse_text(const std::string& text) {
  std::map<std::string, double> values;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find(" = ");
    values[line.substr(0, eq)] = std::stod(line.substr(eq + 3));
  }
  return values;
}

}  // namespace

TEST_CASE("argument errors exit 2, help exits 0") {
  CHECK(run({}).code == lossycap::cli::kInvalidArguments);
  CHECK(run({"bogus"}).code == lossycap::cli::kInvalidArguments);
  CHECK(run({"capacity"}).code == lossycap::cli::kInvalidArguments);
  CHECK(run({"--format", "xml", "ce-curve"}).code == lossycap::cli::kInvalidArguments);
  CHECK(run({"--tol", "-1", "ce-curve"}).code == lossycap::cli::kInvalidArguments);
  CHECK(run({"ce-curve", "--eta-min", "1.5"}).code == lossycap::cli::kInvalidArguments);
  CHECK(run({"ce-curve", "--eta-min", "0.8", "--eta-max", "0.2"}).code == lossycap::cli::kInvalidArguments);
  const auto help = run({"--help"});
  CHECK(help.code == lossycap::cli::kSuccess);
  CHECK(help.out.find("ce-curve") != std::string::npos);
  CHECK(run({"--version"}).code == lossycap::cli::kSuccess);
}

TEST_CASE("unwritable output path exits 2") {
  const auto r = run({"--out", "/nonexistent-dir/x.csv", "ce-curve", "--steps", "2"});
  CHECK(r.code == lossycap::cli::kInvalidArguments);
  CHECK(r.err.find("cannot open output file") != std::string::npos);
}

TEST_CASE("ce-curve default grid") {
  const auto r = run({"ce-curve"});
  REQUIRE(r.code == 0);
  const auto csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 201);
  CHECK(csv.comments.at(0).find("ce-curve") != std::string::npos);
  CHECK(csv.comments.at(1).rfind("parameters:", 0) == 0);
  CHECK(csv.comments.at(2).find("quad_target=1e-10") != std::string::npos);
  const auto c = csv.column("C");
  CHECK(csv.rows[0][0] == 0.0);
  CHECK(csv.rows[0][c] == 0.0);
  CHECK(csv.rows[100][0] == 0.5);
  CHECK(csv.rows[100][c] == Approx(1.0).epsilon(1e-8));
  CHECK(csv.rows[200][0] == 1.0);
  CHECK(csv.rows[200][c] == 2.0);
  CHECK(csv.rows[1][0] == 0.005);
  CHECK(csv.rows[199][0] == 0.995);
  for (std::size_t i = 1; i < csv.rows.size(); ++i) CHECK(csv.rows[i][c] > csv.rows[i - 1][c]);
}

TEST_CASE("ce-curve anchor triple, zeta columns and determinism") {
  const auto r = run({"ce-curve", "--steps", "3", "--eta-min", "0", "--eta-max", "1", "--zeta", "2"});
  REQUIRE(r.code == 0);
  const auto csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 3);
  const auto c = csv.column("C");
  CHECK(csv.rows[0][c] == 0.0);
  CHECK(csv.rows[1][c] == Approx(1.0).epsilon(1e-8));
  CHECK(csv.rows[2][c] == 2.0);
  const auto z2 = csv.column("bound_zeta_2");
  for (const auto& row : csv.rows) CHECK(row[z2] <= row[c] + 1e-6);
  CHECK(run({"ce-curve", "--steps", "3", "--zeta", "2"}).out == r.out);

  const auto json_run = run({"--format", "json", "ce-curve", "--steps", "3"});
  REQUIRE(json_run.code == 0);
  const auto doc = json::parse(json_run.out);
  CHECK(doc["provenance"]["command"] == "ce-curve");
  CHECK(doc["rows"].size() == 3);
  CHECK(doc["rows"][2]["C"].get<double>() == 2.0);
}

TEST_CASE("ce-curve reports failed rows and exits 3") {
  // A quadrature target far below double precision cannot be met.
  const auto r = run({"--tol", "1e-300", "ce-curve", "--steps", "3"});
  CHECK(r.code == lossycap::cli::kNumericalFailure);
  const auto csv = parse_csv(r.out);
  CHECK(csv.rows.size() < 3);
  CHECK(r.err.find("skipped") != std::string::npos);
}

TEST_CASE("capacity command") {
  const auto half = run({"capacity", "--eta", "0.5", "--power", "2", "--time", "7"});
  REQUIRE(half.code == 0);
  const auto doc = json::parse(half.out);
  const double rc = doc["R_C"].get<double>();
  CHECK(rc == Approx(std::sqrt(std::numbers::pi * 2.0 / 3.0) / std::numbers::ln2).epsilon(1e-14));
  CHECK(doc["C_E"].get<double>() == Approx(7.0 * rc).epsilon(1e-9));
  CHECK(doc["Q_E"].get<double>() == Approx(3.5 * rc).epsilon(1e-9));
  CHECK(doc["quantum_lower"].get<double>() == 0.0);
  CHECK(doc["provenance"]["tolerances"]["quad_target"].get<double>() == 1e-10);
  CHECK(doc["bounds_zeta"].size() == 2);

  const auto zero = json::parse(run({"capacity", "--eta", "0", "--energy", "3", "--delta-omega", "0.5"}).out);
  for (const char* key : {"C_E", "Q_E", "R_E", "classical_lower", "quantum_lower", "c_of_eta"}) {
    CHECK(zero[key].get<double>() == 0.0);
  }

  const auto p1 = json::parse(run({"capacity", "--eta", "1", "--power", "1", "--time", "5"}).out);
  const auto p4 = json::parse(run({"capacity", "--eta", "1", "--power", "4", "--time", "5"}).out);
  CHECK(p4["C_E"].get<double>() / p1["C_E"].get<double>() == Approx(2.0).epsilon(1e-12));
}

TEST_CASE("capacity budget validation") {
  CHECK(run({"capacity", "--eta", "0.5"}).code == 2);
  CHECK(run({"capacity", "--eta", "0.5", "--power", "1"}).code == 2);
  CHECK(run({"capacity", "--eta", "0.5", "--power", "1", "--time", "1", "--energy", "2"}).code == 2);
  CHECK(run({"capacity", "--eta", "0.5", "--power", "-1", "--time", "1"}).code == 2);
  CHECK(run({"capacity", "--eta", "1.2", "--power", "1", "--time", "1"}).code == 2);
}

TEST_CASE("allocate from a mode file") {
  const auto dir = scratch_dir("allocate");
  const auto path = dir / "modes.txt";
  {
    std::ofstream f(path);
    f.precision(17);
    f << "# two modes\n" << std::numbers::ln2 << "\n\n" << 2 * std::numbers::ln2 << "  # second\n";
  }
  std::ostringstream energy;
  energy.precision(17);
  energy << 5.0 / 3.0 * std::numbers::ln2;
  const auto r = run({"allocate", "--eta", "0.5", "--modes-file", path.string(), "--energy", energy.str()});
  REQUIRE(r.code == 0);
  const auto csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 2);
  CHECK(csv.columns == std::vector<std::string>{"omega", "N", "rate_contribution_bits"});
  CHECK(csv.rows[0][1] == Approx(1.0).epsilon(1e-8));
  CHECK(csv.rows[1][1] == Approx(1.0 / 3.0).epsilon(1e-8));
  CHECK(csv.comments.back().find("Omega=1 ") != std::string::npos);

  std::ofstream(dir / "bad.txt") << "1.0\nabc\n";
  const auto bad = run({"allocate", "--eta", "0.5", "--modes-file", (dir / "bad.txt").string(), "--energy", "1"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("bad.txt:2") != std::string::npos);
  CHECK(run({"allocate", "--eta", "0.5", "--modes-file", (dir / "missing.txt").string(), "--energy", "1"}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("allocate edge cases") {
  const auto zero = run({"allocate", "--eta", "0", "--energy", "2", "--spacing", "0.1", "--count", "40"});
  REQUIRE(zero.code == 0);
  for (const auto& row : parse_csv(zero.out).rows) CHECK(row[2] == 0.0);

  const auto coherent =
      run({"allocate", "--rate", "coherent", "--eta", "0.4", "--energy", "1", "--spacing", "1", "--count", "3"});
  CHECK(coherent.code == 2);
  CHECK(coherent.err.find("coherent-information bound is zero for eta ≤ 1/2") != std::string::npos);

  CHECK(run({"allocate", "--eta", "0.5", "--energy", "1"}).code == 2);
  CHECK(run({"allocate", "--eta", "0.5", "--spacing", "1", "--count", "3"}).code == 2);

  const auto js = run({"--format", "json", "allocate", "--eta", "0.7", "--rate", "holevo", "--energy", "3",
                       "--spacing", "0.05", "--count", "200"});
  REQUIRE(js.code == 0);
  const auto doc = json::parse(js.out);
  CHECK(doc["energy_residual"].get<double>() <= 1e-8);
  CHECK(doc["stationarity_residual"].get<double>() <= 1e-8);
  CHECK(doc["modes"].size() == 200);
}

TEST_CASE("single-mode command") {
  const auto noiseless = run({"single-mode", "--N", "10", "--eta", "1"});
  REQUIRE(noiseless.code == 0);
  CHECK(noiseless.out.rfind("# lossycap", 0) == 0);
  const auto v = parse_text(noiseless.out);
  CHECK(v.at("mutual_information_bits") == Approx(2 * lossycap::g_entropy(10.0)).epsilon(1e-8));
  CHECK(std::abs(v.at("mutual_information_bits") - 9.66893371) < 1e-5);

  const auto r0 = parse_text(run({"single-mode", "--N", "10", "--eta", "0.5"}).out);
  const auto r1 = parse_text(run({"single-mode", "--N", "10", "--eta", "0.5", "--r", "1"}).out);
  CHECK(r1.at("mutual_information_bits") < r0.at("mutual_information_bits"));

  CHECK(parse_text(run({"single-mode", "--N", "1", "--eta", "0.5"}).out).at("c_E_bits") == Approx(2.0));

  const auto bad = run({"single-mode", "--N", "1", "--eta", "0.5", "--c", "5"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("uncertainty bound violated") != std::string::npos);

  const auto js = json::parse(run({"--format", "json", "single-mode", "--N", "3", "--eta", "0.3"}).out);
  CHECK(js["lambda_plus"].get<double>() == Approx(3.5));
}

TEST_CASE("verify command") {
  const auto ok = run({"verify"});
  CHECK(ok.code == 0);
  const auto doc = json::parse(ok.out);
  CHECK(doc["passed"] == true);
  CHECK(doc["checks_passed"].get<int>() >= 6);
  CHECK(ok.err.find("FAIL") == std::string::npos);

  CHECK(run({"--quiet", "--tol", "1e-2", "verify"}).code == 0);

  const auto fault = run({"verify", "--inject-fault", "f_half"});
  CHECK(fault.code == lossycap::cli::kVerificationFailed);
  CHECK(fault.err.find("verification failed: f_half") != std::string::npos);
  CHECK(json::parse(fault.out)["failures"] == json::array({"f_half"}));

  CHECK(run({"verify", "--inject-fault", "nonsense"}).code == 2);
}

TEST_CASE("figures command") {
  const auto dir = scratch_dir("figures");
  const auto r = run({"--out", dir.string(), "--no-timestamp", "--quiet", "figures"});
  REQUIRE(r.code == 0);
  for (const char* stem : {"fig1a", "fig1b", "fig2a", "fig2b", "fig2c"}) {
    const auto csv_text = read_file(dir / (std::string(stem) + ".csv"));
    CHECK(csv_text.rfind("# lossycap", 0) == 0);
    CHECK(read_file(dir / (std::string(stem) + ".svg")).find("<polyline") != std::string::npos);
  }

  const auto fig1a = parse_csv(read_file(dir / "fig1a.csv"));
  REQUIRE(fig1a.rows.size() == 201);
  CHECK(fig1a.rows.back()[fig1a.column("C_linear")] == 1.75);
  CHECK(fig1a.rows.back()[fig1a.column("C")] == 2.0);

  const auto fig1b = parse_csv(read_file(dir / "fig1b.csv"));
  CHECK(fig1b.rows[100][0] == 0.5);
  CHECK(fig1b.rows[100][fig1b.column("Q_s")] == 0.0);
  for (const auto& row : fig1b.rows) {
    CHECK(row[fig1b.column("Q_s")] <= row[fig1b.column("C_half")] + 1e-9);
    CHECK(row[fig1b.column("sqrt_eta")] <= row[fig1b.column("C")] + 1e-12);
  }

  for (const char* stem : {"fig2a", "fig2b", "fig2c"}) {
    const auto csv = parse_csv(read_file(dir / (std::string(stem) + ".csv")));
    REQUIRE(csv.rows.size() == 101);
    for (std::size_t col = 1; col < csv.columns.size(); ++col) {
      for (std::size_t i = 1; i < csv.rows.size(); ++i) CHECK(csv.rows[i][col] <= csv.rows[i - 1][col] + 1e-9);
    }
  }

  // Byte-identical reruns, SVG included when the timestamp is suppressed.
  const auto again = scratch_dir("figures_again");
  REQUIRE(run({"--out", again.string(), "--no-timestamp", "--quiet", "figures"}).code == 0);
  for (const char* name : {"fig1a.csv", "fig1b.svg", "fig2c.csv", "fig2a.svg"}) {
    CHECK(read_file(dir / name) == read_file(again / name));
  }
  fs::remove_all(dir);
  fs::remove_all(again);
}
