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

#ifndef MPSENSE_CLI_HPP
#define MPSENSE_CLI_HPP

// Command-line front end. A run is described by one flat JSON object; the
// keys are listed in README.md. Values given with --set override the file,
// and --out/--format/--seed override both.

#include "mpsense/applications.hpp"
#include "mpsense/oracle.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpsense::cli {

/// Output records keep their keys in insertion (column) order.
using Record = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Command { kReport, kSweep, kOracle, kMonteCarlo };
enum class ModelKind { kEqualPhases, kRf, kBeam, kGradiometry, kCustomTable };
enum class SweepAxis { kM, kTau, kEta, kN, kPhiH };
enum class Format { kCsv, kJson };

struct RunConfig {
  Command command = Command::kReport;

  // Sensor. Energy is either (r, alpha) or a photon budget N with a
  // squeezed fraction eta; N_per_mode sets N = N_per_mode * M.
  int modes = 1;
  double squeezing = 0.0;
  double alpha = 0.0;
  double alpha_imag = 0.0;
  std::optional<double> total_photons;
  std::optional<double> photons_per_mode;
  std::optional<double> eta;
  bool optimize_eta = false;
  EnergyObjective objective = EnergyObjective::kCfiMode3;
  double tau = 1.0;
  double phi_h = 0.0;
  double x0 = 0.0;
  std::optional<double> x;

  ModelKind model = ModelKind::kEqualPhases;
  double slope = 1.0;
  RfArrayModel rf;
  std::vector<double> lambdas;
  double lambda_scale = 1.0;
  double lambda_power = 0.5;
  GradiometryModel gradiometry;
  std::vector<double> theta_slopes;
  std::vector<double> theta_offsets;

  SweepAxis sweep_axis = SweepAxis::kM;
  double sweep_min = 1.0;
  double sweep_max = 1.0;
  int sweep_points = 1;
  std::vector<double> sweep_values;

  int cutoff = 30;
  std::optional<double> threshold;
  std::int64_t n_samples = 100000;
  int shots_per_trial = 100;
  int threads = 0;
  std::optional<double> x_true;

  std::optional<std::string> out;
  std::optional<Format> format;  ///< default: csv for sweep, json otherwise
  std::uint64_t seed = 1;
};

/// Builds a RunConfig from a flat JSON object. Unknown keys and ill-typed
/// values raise ConfigError naming the key.
RunConfig parse_run_config(Command command, const nlohmann::json& doc);

/// Applies "key=value" overrides; value is parsed as JSON, or taken as a
/// string if it is not valid JSON.
void apply_overrides(nlohmann::json& doc, const std::vector<std::string>& assignments);

/// Resolved single-point sensor.
struct ResolvedPoint {
  SensorConfig sensor;
  PhaseModel model;
  double total_photons;
  double eta;
};

PhaseModel build_phase_model(const RunConfig& cfg, int modes);
ResolvedPoint resolve_point(const RunConfig& cfg);

Record run_report(const RunConfig& cfg);
/// Array with one object per sweep point, in ascending axis order.
Record run_sweep(const RunConfig& cfg);
Record run_oracle(const RunConfig& cfg);
Record run_montecarlo(const RunConfig& cfg);

/// Column order of sweep tables.
const std::vector<std::string>& sweep_columns();

/// Serialises records (an object or an array of objects with identical keys)
/// as CSV with a header row; numbers use 17 significant digits.
std::string to_csv(const Record& records);

/// Full command-line entry point; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpsense::cli

#endif  // MPSENSE_CLI_HPP
