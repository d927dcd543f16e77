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

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace mpsense::cli {

namespace {

using nlohmann::json;
using Setter = std::function<void(RunConfig&, const json&)>;

template <typename T>
Setter set(T RunConfig::*field) {
  return [field](RunConfig& c, const json& v) { c.*field = v.get<T>(); };
}

template <typename T>
Setter set_optional(std::optional<T> RunConfig::*field) {
  return [field](RunConfig& c, const json& v) {
    if (v.is_null()) {
      c.*field = std::nullopt;
    } else {
      c.*field = v.get<T>();
    }
  };
}

template <typename E>
E parse_enum(const std::string& key, const std::string& value, const std::map<std::string, E>& names) {
  const auto it = names.find(value);
  if (it == names.end()) {
    std::string allowed;
    for (const auto& [name, _] : names) {
      allowed += (allowed.empty() ? "" : ", ") + name;
    }
    throw ConfigError(fmt::format("{}: unknown value '{}' (expected one of {})", key, value, allowed));
  }
  return it->second;
}

const std::map<std::string, ModelKind> kModelNames = {
    {"equal-phases", ModelKind::kEqualPhases}, {"equal", ModelKind::kEqualPhases},
    {"rf", ModelKind::kRf},                    {"beam", ModelKind::kBeam},
    {"gradiometry", ModelKind::kGradiometry},  {"custom-table", ModelKind::kCustomTable},
};

const std::map<std::string, SweepAxis> kAxisNames = {
    {"M", SweepAxis::kM}, {"tau", SweepAxis::kTau}, {"eta", SweepAxis::kEta},
    {"N", SweepAxis::kN}, {"phiH", SweepAxis::kPhiH},
};

const std::map<std::string, Format> kFormatNames = {{"csv", Format::kCsv}, {"json", Format::kJson}};

const std::map<std::string, EnergyObjective> kObjectiveNames = {
    {"qfi", EnergyObjective::kQfi},
    {"cfi_mode3", EnergyObjective::kCfiMode3},
};

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"M", set(&RunConfig::modes)},
      {"r", set(&RunConfig::squeezing)},
      {"alpha", set(&RunConfig::alpha)},
      {"alpha_imag", set(&RunConfig::alpha_imag)},
      {"N", set_optional(&RunConfig::total_photons)},
      {"N_per_mode", set_optional(&RunConfig::photons_per_mode)},
      {"eta", set_optional(&RunConfig::eta)},
      {"optimize_eta", set(&RunConfig::optimize_eta)},
      {"objective",
       [](RunConfig& c, const json& v) {
         c.objective = parse_enum("objective", v.get<std::string>(), kObjectiveNames);
       }},
      {"tau", set(&RunConfig::tau)},
      {"phi_H", set(&RunConfig::phi_h)},
      {"x0", set(&RunConfig::x0)},
      {"x", set_optional(&RunConfig::x)},
      {"model",
       [](RunConfig& c, const json& v) { c.model = parse_enum("model", v.get<std::string>(), kModelNames); }},
      {"slope", set(&RunConfig::slope)},
      {"rf_A", [](RunConfig& c, const json& v) { c.rf.efficiency = v.get<double>(); }},
      {"rf_Omega", [](RunConfig& c, const json& v) { c.rf.omega_rf = v.get<double>(); }},
      {"rf_b", [](RunConfig& c, const json& v) { c.rf.pitch = v.get<double>(); }},
      {"rf_t", [](RunConfig& c, const json& v) { c.rf.time = v.get<double>(); }},
      {"lambdas", set(&RunConfig::lambdas)},
      {"lambda_scale", set(&RunConfig::lambda_scale)},
      {"lambda_power", set(&RunConfig::lambda_power)},
      {"grad_rho", [](RunConfig& c, const json& v) { c.gradiometry.density = v.get<double>(); }},
      {"grad_cp", [](RunConfig& c, const json& v) { c.gradiometry.specific_heat = v.get<double>(); }},
      {"grad_y0", [](RunConfig& c, const json& v) { c.gradiometry.position = v.get<double>(); }},
      {"grad_W", [](RunConfig& c, const json& v) { c.gradiometry.bandwidth = v.get<double>(); }},
      {"grad_beta", [](RunConfig& c, const json& v) { c.gradiometry.phase_per_kelvin = v.get<double>(); }},
      {"grad_Q", [](RunConfig& c, const json& v) { c.gradiometry.pulse = v.get<double>(); }},
      {"theta_slopes", set(&RunConfig::theta_slopes)},
      {"theta_offsets", set(&RunConfig::theta_offsets)},
      {"sweep_axis",
       [](RunConfig& c, const json& v) {
         c.sweep_axis = parse_enum("sweep_axis", v.get<std::string>(), kAxisNames);
       }},
      {"sweep_min", set(&RunConfig::sweep_min)},
      {"sweep_max", set(&RunConfig::sweep_max)},
      {"sweep_points", set(&RunConfig::sweep_points)},
      {"sweep_values", set(&RunConfig::sweep_values)},
      {"cutoff", set(&RunConfig::cutoff)},
      {"threshold", set_optional(&RunConfig::threshold)},
      {"n_samples", set(&RunConfig::n_samples)},
      {"shots_per_trial", set(&RunConfig::shots_per_trial)},
      {"threads", set(&RunConfig::threads)},
      {"x_true", set_optional(&RunConfig::x_true)},
      {"out", set_optional(&RunConfig::out)},
      {"format",
       [](RunConfig& c, const json& v) { c.format = parse_enum("format", v.get<std::string>(), kFormatNames); }},
      {"seed", set(&RunConfig::seed)},
  };
  return table;
}

bool approx_integer(double v) { return std::abs(v - std::round(v)) < 1e-9; }

double photon_budget(const RunConfig& cfg, int modes) {
  if (cfg.photons_per_mode) {
    return *cfg.photons_per_mode * modes;
  }
  return *cfg.total_photons;
}

}  // namespace

RunConfig parse_run_config(Command command, const json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("config: top level must be a JSON object");
  }
  RunConfig cfg;
  cfg.command = command;
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError(fmt::format("{}: unknown configuration key", key));
    }
    try {
      it->second(cfg, value);
    } catch (const json::exception& e) {
      throw ConfigError(fmt::format("{}: {}", key, e.what()));
    }
  }
  if (cfg.sweep_points < 1) {
    throw ConfigError("sweep_points: must be at least 1");
  }
  if (cfg.sweep_min > cfg.sweep_max) {
    throw ConfigError("sweep_min: must not exceed sweep_max");
  }
  if (cfg.cutoff < 2) {
    throw ConfigError("cutoff: must be at least 2");
  }
  if (cfg.n_samples < 1) {
    throw ConfigError("n_samples: must be at least 1");
  }
  if (cfg.shots_per_trial < 1) {
    throw ConfigError("shots_per_trial: must be at least 1");
  }
  if (cfg.total_photons && cfg.photons_per_mode) {
    throw ConfigError("N_per_mode: cannot be combined with N");
  }
  return cfg;
}

void apply_overrides(json& doc, const std::vector<std::string>& assignments) {
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError(fmt::format("--set: expected key=value, got '{}'", a));
    }
    const std::string key = a.substr(0, eq);
    const std::string text = a.substr(eq + 1);
    json value = json::parse(text, nullptr, /*allow_exceptions=*/false);
    doc[key] = value.is_discarded() ? json(text) : value;
  }
}

PhaseModel build_phase_model(const RunConfig& cfg, int modes) {
  switch (cfg.model) {
    case ModelKind::kEqualPhases:
      return PhaseModel::equal_phases(modes, cfg.slope);
    case ModelKind::kRf: {
      RfArrayModel rf = cfg.rf;
      rf.modes = modes;
      return rf_phase_model(rf);
    }
    case ModelKind::kBeam: {
      BeamDisplacementModel beam{cfg.lambdas};
      if (beam.lambdas.empty()) {
        for (int m = 1; m <= modes; ++m) {
          beam.lambdas.push_back(cfg.lambda_scale * std::pow(static_cast<double>(m), cfg.lambda_power));
        }
      } else if (static_cast<int>(beam.lambdas.size()) != modes) {
        throw ConfigError(fmt::format("lambdas: has {} entries but M = {}", beam.lambdas.size(), modes));
      }
      return beam_displacement_phase_model(beam);
    }
    case ModelKind::kGradiometry: {
      GradiometryModel g = cfg.gradiometry;
      g.modes = modes;
      return gradiometry_phase_model(g);
    }
    case ModelKind::kCustomTable: {
      if (static_cast<int>(cfg.theta_slopes.size()) != modes) {
        throw ConfigError(
            fmt::format("theta_slopes: has {} entries but M = {}", cfg.theta_slopes.size(), modes));
      }
      Eigen::VectorXd slopes = Eigen::Map<const Eigen::VectorXd>(cfg.theta_slopes.data(), modes);
      Eigen::VectorXd offsets;
      if (!cfg.theta_offsets.empty()) {
        if (static_cast<int>(cfg.theta_offsets.size()) != modes) {
          throw ConfigError(
              fmt::format("theta_offsets: has {} entries but M = {}", cfg.theta_offsets.size(), modes));
        }
        offsets = Eigen::Map<const Eigen::VectorXd>(cfg.theta_offsets.data(), modes);
      }
      return PhaseModel::linear(std::move(slopes), std::move(offsets));
    }
  }
  throw std::logic_error("unknown model kind");
}

ResolvedPoint resolve_point(const RunConfig& cfg) {
  if (cfg.modes < 1) {
    throw ConfigError(fmt::format("M: must be at least 1 (got {})", cfg.modes));
  }
  PhaseModel model = build_phase_model(cfg, cfg.modes);
  SensorConfig sensor;
  sensor.modes = cfg.modes;
  sensor.tau = cfg.tau;
  sensor.phi_h = cfg.phi_h;
  sensor.x0 = cfg.x0;

  double eta = 0.0;
  if (cfg.total_photons || cfg.photons_per_mode) {
    const double n = photon_budget(cfg, cfg.modes);
    if (!(n > 0.0)) {
      throw ConfigError(fmt::format("N: photon budget must be positive (got {})", n));
    }
    if (cfg.alpha_imag != 0.0) {
      throw ConfigError("alpha_imag: not supported together with a photon budget");
    }
    if (!(cfg.tau >= 0.0 && cfg.tau <= 1.0)) {
      throw ConfigError(fmt::format("tau: must lie in [0, 1] (got {})", cfg.tau));
    }
    EnergyAllocation a{};
    if (cfg.optimize_eta) {
      a = optimize_energy_allocation(n, cfg.tau, model, cfg.x0, cfg.objective);
    } else {
      if (!cfg.eta) {
        throw ConfigError("eta: required when a photon budget is given without optimize_eta");
      }
      if (!(*cfg.eta >= 0.0 && *cfg.eta <= 1.0)) {
        throw ConfigError(fmt::format("eta: must lie in [0, 1] (got {})", *cfg.eta));
      }
      a = allocation_probe(n, *cfg.eta);
    }
    sensor.squeezing = a.squeezing;
    sensor.alpha = a.alpha;
    eta = a.eta;
  } else {
    sensor.squeezing = cfg.squeezing;
    sensor.alpha = {cfg.alpha, cfg.alpha_imag};
    const double n = sensor.total_photons();
    eta = n > 0.0 ? sensor.squeezed_photons() / n : 0.0;
  }
  sensor.validate();
  return {sensor, std::move(model), sensor.total_photons(), eta};
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

Record sensor_fields(const ResolvedPoint& p) {
  Record r;
  r["M"] = p.sensor.modes;
  r["r"] = p.sensor.squeezing;
  r["alpha"] = p.sensor.alpha.real();
  r["tau"] = p.sensor.tau;
  r["phi_H"] = p.sensor.phi_h;
  r["x0"] = p.sensor.x0;
  r["N"] = p.total_photons;
  r["eta"] = p.eta;
  return r;
}

}  // namespace

Record run_report(const RunConfig& cfg) {
  const ResolvedPoint p = resolve_point(cfg);
  const FisherReport rep = fisher_report(p.sensor, p.model);
  Record r = sensor_fields(p);
  r["qfi"] = rep.qfi;
  r["cfi_d"] = rep.cfi_d;
  r["cfi_v"] = rep.cfi_v;
  r["cfi_mode1"] = rep.cfi_mode1;
  r["cfi_mode2"] = rep.cfi_mode2;
  r["cfi_mode3"] = rep.cfi_mode3;
  r["sigma_opt"] = optional_number(rep.sigma_opt);
  r["mode2_phi_H"] = rep.mode2_phi_h;
  r["N1bar"] = rep.intermediates.thermal_photons;
  r["s_red"] = rep.intermediates.reduced_squeezing;
  r["h"] = rep.intermediates.h;
  r["mean_dtheta"] = rep.prefactors.mean_dtheta;
  r["mean_dtheta_sq"] = rep.prefactors.mean_dtheta_sq;
  return r;
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> columns = {
      "axis_value", "M",         "tau",       "N",         "eta_star",      "r",
      "alpha",      "qfi",       "cfi_mode1", "cfi_mode2", "cfi_mode3",     "sigma_opt",
      "qfi_classical", "cfi_classical", "cfi_phiH"};
  return columns;
}

namespace {

std::vector<double> sweep_axis_values(const RunConfig& cfg) {
  std::vector<double> values = cfg.sweep_values;
  if (values.empty()) {
    for (int i = 0; i < cfg.sweep_points; ++i) {
      const double t = cfg.sweep_points == 1 ? 0.0 : static_cast<double>(i) / (cfg.sweep_points - 1);
      values.push_back(cfg.sweep_min + t * (cfg.sweep_max - cfg.sweep_min));
    }
  }
  std::sort(values.begin(), values.end());
  if (cfg.sweep_axis == SweepAxis::kM) {
    for (double& v : values) {
      if (!approx_integer(v) || v < 1.0) {
        throw ConfigError(fmt::format("sweep_values: M axis needs positive integers (got {})", v));
      }
      v = std::round(v);
    }
  }
  return values;
}

RunConfig point_config(const RunConfig& base, double value) {
  RunConfig c = base;
  switch (base.sweep_axis) {
    case SweepAxis::kM:
      c.modes = static_cast<int>(value);
      break;
    case SweepAxis::kTau:
      c.tau = value;
      break;
    case SweepAxis::kEta:
      if (!base.total_photons && !base.photons_per_mode) {
        throw ConfigError("sweep_axis: eta sweeps need a photon budget N or N_per_mode");
      }
      c.eta = value;
      c.optimize_eta = false;
      break;
    case SweepAxis::kN:
      c.total_photons = value;
      c.photons_per_mode.reset();
      if (!c.optimize_eta && !c.eta) {
        throw ConfigError("sweep_axis: N sweeps need eta or optimize_eta");
      }
      break;
    case SweepAxis::kPhiH:
      c.phi_h = value;
      break;
  }
  return c;
}

Record sweep_row(const RunConfig& base, double value) {
  const RunConfig c = point_config(base, value);
  const ResolvedPoint p = resolve_point(c);
  const FisherReport rep = fisher_report(p.sensor, p.model);

  SensorConfig classical = p.sensor;
  classical.squeezing = 0.0;
  classical.alpha = std::sqrt(p.total_photons);

  Record r;
  r["axis_value"] = value;
  r["M"] = p.sensor.modes;
  r["tau"] = p.sensor.tau;
  r["N"] = p.total_photons;
  r["eta_star"] = p.eta;
  r["r"] = p.sensor.squeezing;
  r["alpha"] = p.sensor.alpha.real();
  r["qfi"] = rep.qfi;
  r["cfi_mode1"] = rep.cfi_mode1;
  r["cfi_mode2"] = rep.cfi_mode2;
  r["cfi_mode3"] = rep.cfi_mode3;
  r["sigma_opt"] = optional_number(rep.sigma_opt);
  r["qfi_classical"] = qfi(classical, p.model, classical.x0);
  r["cfi_classical"] = cfi_mode3(classical, p.model).value;
  r["cfi_phiH"] = rep.cfi_d + rep.cfi_v;
  return r;
}

}  // namespace

Record run_sweep(const RunConfig& cfg) {
  const std::vector<double> values = sweep_axis_values(cfg);
  std::vector<Record> rows(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  const auto n = static_cast<int>(values.size());
  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, std::max(1, n));
  auto worker = [&](int id) {
    for (int i = id; i < n; i += threads) {
      try {
        rows[i] = sweep_row(cfg, values[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int id = 1; id < threads; ++id) {
      pool.emplace_back(worker, id);
    }
    worker(0);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Record out = Record::array();
  for (auto& row : rows) {
    out.push_back(std::move(row));
  }
  return out;
}

Record run_oracle(const RunConfig& cfg) {
  const ResolvedPoint p = resolve_point(cfg);
  if (p.sensor.modes != 1) {
    throw ConfigError(fmt::format("M: the Fock-space oracle needs M = 1 (got {})", p.sensor.modes));
  }
  const double x = cfg.x.value_or(p.sensor.x0);
  const double closed = qfi(p.sensor, p.model, x);
  if (!(closed > 0.0)) {
    throw std::runtime_error("zero-information configuration: the closed-form QFI vanishes, relative error undefined");
  }
  const FockState state = fock_final_state(p.sensor, p.model, x, cfg.cutoff);
  const double oracle = sld_qfi(state, fock_state_derivative(state, p.model, x));
  const double rel = std::abs(oracle - closed) / closed;
  const double threshold = cfg.threshold.value_or(1e-3);
  Record r = sensor_fields(p);
  r["x"] = x;
  r["cutoff"] = cfg.cutoff;
  r["trace_deficit"] = state.trace_deficit;
  r["closed_form"] = closed;
  r["oracle_value"] = oracle;
  r["relative_error"] = rel;
  r["threshold"] = threshold;
  r["pass"] = rel < threshold;
  return r;
}

Record run_montecarlo(const RunConfig& cfg) {
  const ResolvedPoint p = resolve_point(cfg);
  const double x_true = cfg.x_true.value_or(p.sensor.x0);
  const double closed = x_true == p.sensor.x0 ? cfi_components(p.sensor, p.model).total()
                                              : cfi_analytic(p.sensor, p.model, x_true);
  if (!(closed > 0.0)) {
    throw EstimationError("zero-information configuration: homodyne statistics do not depend on x");
  }
  McOptions opts;
  opts.n_trials = cfg.n_samples;
  opts.shots_per_trial = cfg.shots_per_trial;
  opts.seed = cfg.seed;
  opts.threads = cfg.threads;
  const McEstimate est = mc_homodyne(p.sensor, p.model, x_true, opts);
  const double rel = std::abs(est.empirical_fisher - closed) / closed;
  const double threshold = cfg.threshold.value_or(0.03);
  const double crb = 1.0 / (closed * est.shots_per_trial);
  Record r = sensor_fields(p);
  r["x_true"] = x_true;
  r["n_samples"] = est.n_trials;
  r["shots_per_trial"] = est.shots_per_trial;
  r["seed"] = est.seed;
  r["closed_form"] = closed;
  r["oracle_value"] = est.empirical_fisher;
  r["relative_error"] = rel;
  r["threshold"] = threshold;
  r["empirical_mse"] = est.empirical_mse;
  r["crb"] = crb;
  r["mean_estimate"] = est.mean_estimate;
  r["pass"] = rel < threshold;
  return r;
}

namespace {

std::string csv_cell(const Record& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number()) return fmt::format("{:.17g}", v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::string to_csv(const Record& records) {
  const Record rows = records.is_array() ? records : Record::array({records});
  std::ostringstream os;
  if (rows.empty()) return {};
  std::vector<std::string> columns;
  for (const auto& [key, _] : rows.front().items()) {
    columns.push_back(key);
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    os << (i ? "," : "") << columns[i];
  }
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      os << (i ? "," : "") << csv_cell(row.at(columns[i]));
    }
    os << '\n';
  }
  return os.str();
}

namespace {

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(fmt::format("config: cannot open '{}'", path));
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config: '{}' is not valid JSON: {}", path, e.what()));
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fisher information of entangled multi-phase sensors", "mpsense"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> assignments;

  const std::vector<std::pair<std::string, Command>> commands = {
      {"report", Command::kReport},
      {"sweep", Command::kSweep},
      {"oracle", Command::kOracle},
      {"montecarlo", Command::kMonteCarlo},
  };
  const std::map<std::string, std::string> descriptions = {
      {"report", "QFI, homodyne CFI modes and intermediates at x0"},
      {"sweep", "table of Fisher information along one parameter axis"},
      {"oracle", "compare the closed-form QFI with a truncated Fock-space SLD computation (M = 1)"},
      {"montecarlo", "compare the homodyne CFI with a Monte-Carlo maximum-likelihood experiment"},
  };
  for (const auto& [name, _] : commands) {
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output path (default: stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--set", assignments, "override a configuration key: key=value")->take_all();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  Command command = Command::kReport;
  for (const auto& [name, c] : commands) {
    if (app.got_subcommand(name)) command = c;
  }

  try {
    json doc = config_path.empty() ? json::object() : load_config_file(config_path);
    apply_overrides(doc, assignments);
    RunConfig cfg = parse_run_config(command, doc);
    if (out_path) cfg.out = out_path;
    if (format) cfg.format = kFormatNames.at(*format);
    if (seed) cfg.seed = *seed;

    Record result;
    switch (command) {
      case Command::kReport:
        result = run_report(cfg);
        break;
      case Command::kSweep:
        result = run_sweep(cfg);
        break;
      case Command::kOracle:
        result = run_oracle(cfg);
        break;
      case Command::kMonteCarlo:
        result = run_montecarlo(cfg);
        break;
    }
    const Format fmt_kind = cfg.format.value_or(command == Command::kSweep ? Format::kCsv : Format::kJson);
    const std::string text = fmt_kind == Format::kCsv ? to_csv(result) : result.dump(2) + "\n";
    if (cfg.out) {
      std::ofstream file(*cfg.out, std::ios::binary);
      if (!file) {
        throw ConfigError(fmt::format("out: cannot write '{}'", *cfg.out));
      }
      file << text;
    } else {
      out << text;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace mpsense::cli
