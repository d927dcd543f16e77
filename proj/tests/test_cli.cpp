// Copyright 2026 The mpsense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "mpsense/cli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

namespace mpsense::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "mpsense");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("mpsense_test_" + std::to_string(::getpid()) + "_" + name);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    rows.push_back(row);
  }
  return rows;
}

TEST(ParseRunConfig, Defaults) {
  const auto cfg = parse_run_config(Command::kReport, json::object());
  EXPECT_EQ(cfg.modes, 1);
  EXPECT_EQ(cfg.tau, 1.0);
  EXPECT_EQ(cfg.model, ModelKind::kEqualPhases);
  EXPECT_FALSE(cfg.format);
}

TEST(ParseRunConfig, UnknownKeyIsNamed) {
  try {
    parse_run_config(Command::kReport, json{{"squeeze", 1.0}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("squeeze"), std::string::npos);
  }
}

TEST(ParseRunConfig, TypeErrorIsNamed) {
  try {
    parse_run_config(Command::kReport, json{{"tau", "high"}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("tau:", 0), 0u);
  }
}

TEST(ParseRunConfig, EnumsAndModels) {
  const auto cfg = parse_run_config(
      Command::kSweep, json{{"model", "rf"}, {"sweep_axis", "tau"}, {"format", "json"}, {"rf_Omega", 1e5}});
  EXPECT_EQ(cfg.model, ModelKind::kRf);
  EXPECT_EQ(cfg.sweep_axis, SweepAxis::kTau);
  EXPECT_EQ(cfg.format, Format::kJson);
  EXPECT_EQ(cfg.rf.omega_rf, 1e5);
  EXPECT_THROW(parse_run_config(Command::kSweep, json{{"model", "sagnac"}}), ConfigError);
}

TEST(ParseRunConfig, EmptySweepRangeRejected) {
  EXPECT_THROW(parse_run_config(Command::kSweep, json{{"sweep_points", 0}}), ConfigError);
  EXPECT_THROW(parse_run_config(Command::kSweep, json{{"sweep_min", 2.0}, {"sweep_max", 1.0}}), ConfigError);
}

TEST(Overrides, ParseJsonThenString) {
  json doc{{"M", 2}};
  apply_overrides(doc, {"M=5", "model=rf", "lambdas=[1,2]", "optimize_eta=true"});
  EXPECT_EQ(doc["M"], 5);
  EXPECT_EQ(doc["model"], "rf");
  EXPECT_EQ(doc["lambdas"], json::array({1, 2}));
  EXPECT_EQ(doc["optimize_eta"], true);
  EXPECT_THROW(apply_overrides(doc, {"novalue"}), ConfigError);
}

TEST(Report, TwoPhaseExample) {
  const auto r = run({"report", "--set", "M=2", "--set", "r=0.881373587019543", "--set", "tau=1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["qfi"].get<double>(), 5.0, 1e-10);
}

TEST(Report, DarkProbeHasNoInformation) {
  const auto r = run({"report", "--set", "M=3", "--set", "tau=0.7", "--set", "phi_H=0.4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  for (const char* key : {"qfi", "cfi_d", "cfi_v", "cfi_mode1", "cfi_mode2", "cfi_mode3"}) {
    EXPECT_EQ(j[key].get<double>(), 0.0) << key;
  }
  EXPECT_TRUE(j["sigma_opt"].is_null());
}

TEST(Report, RfRoundTripMatchesLibrary) {
  const auto r = run({"report", "--set", "model=rf", "--set", "M=8", "--set", "N_per_mode=1.3810978455418157",
                      "--set", "optimize_eta=true", "--set", "tau=1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);

  RfArrayModel rf;
  rf.modes = 8;
  const auto model = rf_phase_model(rf);
  const double n = 8 * 1.3810978455418157;
  const auto best = optimize_energy_allocation(n, 1.0, model, 0.0, EnergyObjective::kCfiMode3);
  SensorConfig s;
  s.modes = 8;
  s.squeezing = best.squeezing;
  s.alpha = best.alpha;
  const auto rep = fisher_report(s, model);
  EXPECT_EQ(j["eta"].get<double>(), best.eta);
  EXPECT_EQ(j["qfi"].get<double>(), rep.qfi);
  EXPECT_EQ(j["cfi_mode3"].get<double>(), rep.cfi_mode3);
  EXPECT_EQ(j["mean_dtheta"].get<double>(), rep.prefactors.mean_dtheta);
  EXPECT_EQ(j["mean_dtheta_sq"].get<double>(), rep.prefactors.mean_dtheta_sq);
}

TEST(Report, InvalidValueExitsWithConfigError) {
  const auto r = run({"report", "--set", "tau=1.5"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("tau"), std::string::npos);
  EXPECT_EQ(run({"report", "--set", "alpha=1", "--set", "alpha_imag=0.5"}).code, kExitConfig);
  EXPECT_EQ(run({"report", "--set", "model=custom-table", "--set", "M=2", "--set", "theta_slopes=[1]"}).code,
            kExitConfig);
  EXPECT_EQ(run({"report", "--bogus"}).code, kExitConfig);
  EXPECT_EQ(run({"frobnicate"}).code, kExitConfig);
}

TEST(Report, ConfigFileAndPrecedence) {
  const auto path = temp_file("cfg.json");
  std::ofstream(path) << R"({"M": 2, "r": 0.5, "alpha": 1.0, "tau": 0.9, "format": "csv"})";
  const auto file_only = run({"report", "--config", path.string()});
  ASSERT_EQ(file_only.code, 0) << file_only.err;
  EXPECT_EQ(file_only.out.rfind("M,r,alpha", 0), 0u);
  const auto flagged = run({"report", "--config", path.string(), "--set", "M=3", "--format", "json"});
  ASSERT_EQ(flagged.code, 0) << flagged.err;
  EXPECT_EQ(json::parse(flagged.out)["M"], 3);
  EXPECT_EQ(json::parse(flagged.out)["r"], 0.5);
  fs::remove(path);
}

TEST(Report, MissingConfigFile) { EXPECT_EQ(run({"report", "--config", "/nonexistent/cfg.json"}).code, kExitConfig); }

TEST(Sweep, ColumnsAndOrder) {
  const auto r = run({"sweep", "--set", "sweep_axis=M", "--set", "sweep_values=[8,2,4]", "--set", "N_per_mode=1",
                      "--set", "optimize_eta=true"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], sweep_columns());
  EXPECT_EQ(rows[1][0], "2");
  EXPECT_EQ(rows[2][0], "4");
  EXPECT_EQ(rows[3][0], "8");
}

TEST(Sweep, EtaEndpointsMatchSingleReports) {
  const auto r = run({"sweep", "--set", "sweep_axis=eta", "--set", "sweep_min=0", "--set", "sweep_max=1", "--set",
                      "sweep_points=5", "--set", "N=3", "--set", "M=2", "--set", "tau=0.8", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = json::parse(r.out);
  ASSERT_EQ(rows.size(), 5u);
  const auto coherent = json::parse(run({"report", "--set", "M=2", "--set", "alpha=1.7320508075688772", "--set",
                                         "tau=0.8"}).out);
  const auto squeezed = json::parse(run({"report", "--set", "M=2", "--set", "r=1.3169578969248166", "--set",
                                         "tau=0.8"}).out);
  for (const char* key : {"qfi", "cfi_mode1", "cfi_mode3"}) {
    EXPECT_NEAR(rows.front()[key].get<double>(), coherent[key].get<double>(), 1e-12) << key;
    EXPECT_NEAR(rows.back()[key].get<double>(), squeezed[key].get<double>(), 1e-12) << key;
  }
}

TEST(Sweep, RfQuantumClassicalRatioIncreases) {
  const auto r = run({"sweep", "--set", "model=rf", "--set", "sweep_axis=M", "--set", "sweep_values=[4,8,16,32,64]",
                      "--set", "N_per_mode=1.3810978455418157", "--set", "optimize_eta=true", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  double prev = 0.0;
  for (const auto& row : json::parse(r.out)) {
    const double ratio = row["cfi_mode3"].get<double>() / row["cfi_classical"].get<double>();
    EXPECT_GT(ratio, prev);
    prev = ratio;
  }
}

TEST(Sweep, QfiNonincreasingWithLoss) {
  const auto r = run({"sweep", "--set", "sweep_axis=tau", "--set", "sweep_min=0", "--set", "sweep_max=1", "--set",
                      "sweep_points=101", "--set", "r=1.2", "--set", "M=3", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = json::parse(r.out);
  const double top = rows.back()["qfi"].get<double>();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double lo = rows[i - 1]["qfi"].get<double>();
    const double hi = rows[i]["qfi"].get<double>();
    EXPECT_LE(lo, hi + 1e-12);
    EXPECT_LT(hi - lo, 0.1 * top);
  }
  EXPECT_EQ(rows.front()["qfi"].get<double>(), 0.0);
}

TEST(Sweep, NonIntegerModeCountRejected) {
  EXPECT_EQ(run({"sweep", "--set", "sweep_axis=M", "--set", "sweep_values=[2.5]"}).code, kExitConfig);
}

TEST(Sweep, CsvRoundTripsExactly) {
  const auto csv = run({"sweep", "--set", "sweep_axis=phiH", "--set", "sweep_min=0.1", "--set", "sweep_max=1.4",
                        "--set", "sweep_points=7", "--set", "r=0.9", "--set", "alpha=1.1", "--set", "tau=0.75",
                        "--set", "M=3"});
  const auto js = run({"sweep", "--set", "sweep_axis=phiH", "--set", "sweep_min=0.1", "--set", "sweep_max=1.4",
                       "--set", "sweep_points=7", "--set", "r=0.9", "--set", "alpha=1.1", "--set", "tau=0.75",
                       "--set", "M=3", "--format", "json"});
  ASSERT_EQ(csv.code, 0);
  const auto rows = parse_csv(csv.out);
  const auto records = json::parse(js.out);
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t c = 0; c < rows[0].size(); ++c) {
      const auto& v = records[i][rows[0][c]];
      if (v.is_null()) {
        EXPECT_TRUE(rows[i + 1][c].empty());
      } else {
        EXPECT_EQ(std::strtod(rows[i + 1][c].c_str(), nullptr), v.get<double>()) << rows[0][c];
      }
    }
  }
}

TEST(Oracle, CentralCasePasses) {
  const auto r = run({"oracle", "--set", "r=0.3", "--set", "alpha=0.5", "--set", "tau=0.8"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_LT(j["relative_error"].get<double>(), 1e-4);
}

TEST(Oracle, ZeroInformationRejected) {
  const auto r = run({"oracle", "--set", "tau=0.5"});
  EXPECT_EQ(r.code, kExitNumerical);
  EXPECT_FALSE(r.err.empty());
}

TEST(Oracle, TruncationReported) {
  const auto r = run({"oracle", "--set", "r=1.5", "--set", "alpha=2", "--set", "cutoff=6"});
  EXPECT_EQ(r.code, kExitNumerical);
  EXPECT_NE(r.err.find("cutoff"), std::string::npos);
}

TEST(Oracle, NeedsSinglePhase) { EXPECT_EQ(run({"oracle", "--set", "M=2", "--set", "r=0.3"}).code, kExitConfig); }

TEST(MonteCarlo, ModeOnePasses) {
  const auto r = run({"montecarlo", "--set", "model=custom-table", "--set", "M=4", "--set", "theta_slopes=[1,2,3,4]",
                      "--set", "r=0.5", "--set", "alpha=2", "--set", "tau=0.8", "--set", "phi_H=1.5707963267948966"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_GE(j["empirical_mse"].get<double>(), 0.95 * j["crb"].get<double>());
}

TEST(MonteCarlo, ZeroInformationRejected) {
  EXPECT_EQ(run({"montecarlo", "--set", "M=2", "--set", "slope=0", "--set", "alpha=1"}).code, kExitNumerical);
}

TEST(Determinism, RepeatedRunsAreByteIdentical) {
  const auto a = temp_file("a.json");
  const auto b = temp_file("b.json");
  const std::vector<std::string> base = {"montecarlo", "--set", "M=2", "--set", "r=0.4", "--set", "alpha=1.5",
                                         "--set", "tau=0.9", "--set", "phi_H=1.2", "--set", "n_samples=3000",
                                         "--seed", "42"};
  auto with_out = [&](const fs::path& p) {
    auto v = base;
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  ASSERT_EQ(run(with_out(a)).code, 0);
  ASSERT_EQ(run(with_out(b)).code, 0);
  EXPECT_EQ(read_file(a), read_file(b));
  EXPECT_FALSE(read_file(a).empty());
  auto other = base;
  other.back() = "43";
  other.push_back("--out");
  other.push_back(b.string());
  ASSERT_EQ(run(other).code, 0);
  EXPECT_NE(read_file(a), read_file(b));
  fs::remove(a);
  fs::remove(b);
}

TEST(Binary, ExitCodesFromProcess) {
  const std::string cli = MPSENSE_CLI_PATH;
  EXPECT_EQ(WEXITSTATUS(std::system((cli + " report --set M=2 > /dev/null").c_str())), 0);
  EXPECT_EQ(WEXITSTATUS(std::system((cli + " report --set tau=2 2> /dev/null").c_str())), 2);
  EXPECT_EQ(WEXITSTATUS(std::system((cli + " oracle 2> /dev/null").c_str())), 3);
}

}  // namespace
}  // namespace mpsense::cli
