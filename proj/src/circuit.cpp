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

#include "mpsense/circuit.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

namespace mpsense {

double SensorConfig::squeezed_photons() const {
  const double s = std::sinh(squeezing);
  return s * s;
}

void SensorConfig::validate() const {
  if (modes < 1) {
    throw std::invalid_argument(fmt::format("M: must be at least 1 (got {})", modes));
  }
  if (!(squeezing >= 0.0) || !std::isfinite(squeezing)) {
    throw std::invalid_argument(fmt::format("r: must be finite and nonnegative (got {})", squeezing));
  }
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw std::invalid_argument("alpha: must be finite");
  }
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::invalid_argument(fmt::format("tau: must lie in [0, 1] (got {})", tau));
  }
  if (!std::isfinite(phi_h)) {
    throw std::invalid_argument("phi_H: must be finite");
  }
  if (!std::isfinite(x0)) {
    throw std::invalid_argument("x0: must be finite");
  }
  if (!std::isfinite(total_photons())) {
    throw std::invalid_argument("r: total photon number overflows");
  }
}

PhaseModel::PhaseModel(int modes, Function theta, Function dtheta)
    : modes_(modes), theta_(std::move(theta)), dtheta_(std::move(dtheta)) {
  if (modes_ < 1) {
    throw std::invalid_argument("PhaseModel: number of phases must be at least 1");
  }
  if (!theta_) {
    throw std::invalid_argument("PhaseModel: theta function is required");
  }
}

PhaseModel PhaseModel::equal_phases(int modes, double slope) {
  return PhaseModel(
      modes, [modes, slope](double x) { return Eigen::VectorXd::Constant(modes, slope * x); },
      [modes, slope](double) { return Eigen::VectorXd::Constant(modes, slope); });
}

PhaseModel PhaseModel::linear(Eigen::VectorXd slopes, Eigen::VectorXd offsets) {
  const auto m = static_cast<int>(slopes.size());
  if (offsets.size() == 0) {
    offsets = Eigen::VectorXd::Zero(m);
  }
  if (offsets.size() != m) {
    throw std::invalid_argument("PhaseModel::linear: slopes and offsets differ in length");
  }
  return PhaseModel(
      m, [slopes, offsets](double x) -> Eigen::VectorXd { return offsets + slopes * x; },
      [slopes](double) -> Eigen::VectorXd { return slopes; });
}

Eigen::VectorXd PhaseModel::theta(double x) const {
  Eigen::VectorXd t = theta_(x);
  if (t.size() != modes_) {
    throw std::invalid_argument("PhaseModel: theta returned the wrong number of phases");
  }
  return t;
}

double PhaseModel::fd_step(double x) { return std::max(1e-6, 1e-6 * std::abs(x)); }

Eigen::VectorXd PhaseModel::dtheta_numeric(double x) const {
  const double h = fd_step(x);
  return (theta(x + h) - theta(x - h)) / (2.0 * h);
}

Eigen::VectorXd PhaseModel::dtheta(double x) const {
  if (!dtheta_) {
    return dtheta_numeric(x);
  }
  Eigen::VectorXd d = dtheta_(x);
  if (d.size() != modes_) {
    throw std::invalid_argument("PhaseModel: dtheta returned the wrong number of phases");
  }
  return d;
}

namespace {

void check_sizes(const SensorConfig& cfg, const PhaseModel& model) {
  if (cfg.modes != model.modes()) {
    throw std::invalid_argument(
        fmt::format("M: sensor has {} phases but the phase model has {}", cfg.modes, model.modes()));
  }
}

}  // namespace

PassiveUnitary<double> system_unitary(const SensorConfig& cfg, const PhaseModel& model, double x,
                                      const PassiveUnitary<double>& probe_circuit) {
  check_sizes(cfg, model);
  const auto modulation = build_modulation(model.theta(x));
  const auto reference = build_modulation(model.theta(cfg.x0));
  const auto rotation = homodyne_rotation<double>(2 * cfg.modes, cfg.phi_h);
  return rotation * probe_circuit.adjoint() * reference.adjoint() * modulation * probe_circuit;
}

PassiveUnitary<double> system_unitary(const SensorConfig& cfg, const PhaseModel& model, double x) {
  return system_unitary(cfg, model, x, build_probe_circuit<double>(cfg.modes));
}

ReceiverElements receiver_elements(const SensorConfig& cfg, const PhaseModel& model, double x) {
  check_sizes(cfg, model);
  const Eigen::VectorXd dphi = model.theta(x) - model.theta(cfg.x0);
  std::complex<double> avg = 0.0;
  for (Eigen::Index m = 0; m < dphi.size(); ++m) {
    avg += std::polar(1.0, dphi(m));
  }
  avg /= static_cast<double>(cfg.modes);
  const std::complex<double> pre = 0.5 * std::polar(1.0, cfg.phi_h);
  return {pre * (avg + 1.0), pre * (avg - 1.0)};
}

ReceiverElements receiver_element_derivatives(const SensorConfig& cfg, const PhaseModel& model, double x) {
  check_sizes(cfg, model);
  const Eigen::VectorXd dphi = model.theta(x) - model.theta(cfg.x0);
  const Eigen::VectorXd slope = model.dtheta(x);
  std::complex<double> avg = 0.0;
  for (Eigen::Index m = 0; m < dphi.size(); ++m) {
    avg += std::complex<double>(0.0, slope(m)) * std::polar(1.0, dphi(m));
  }
  avg /= static_cast<double>(cfg.modes);
  const std::complex<double> d = 0.5 * std::polar(1.0, cfg.phi_h) * avg;
  return {d, d};
}

QuadratureMoments<double> output_moments(const SensorConfig& cfg, const PhaseModel& model, double x) {
  if (!cfg.has_real_alpha()) {
    throw std::invalid_argument("alpha: closed-form output moments require a real coherent amplitude");
  }
  const ReceiverElements u = receiver_elements(cfg, model, x);
  const double q0 = std::sqrt(2.0) * cfg.alpha.real();
  const double re = u.u11.real();
  const double im = u.u11.imag();
  const double r2 = 2.0 * cfg.squeezing;
  const double mean = std::sqrt(cfg.tau) * u.u1m1.real() * q0;
  const double variance =
      0.5 * (1.0 + cfg.tau * re * re * std::expm1(r2) + cfg.tau * im * im * std::expm1(-r2));
  return {mean, variance};
}

QuadratureMoments<double> output_moment_derivatives(const SensorConfig& cfg, const PhaseModel& model,
                                                    double x) {
  if (!cfg.has_real_alpha()) {
    throw std::invalid_argument("alpha: closed-form output moments require a real coherent amplitude");
  }
  const ReceiverElements u = receiver_elements(cfg, model, x);
  const ReceiverElements du = receiver_element_derivatives(cfg, model, x);
  const double q0 = std::sqrt(2.0) * cfg.alpha.real();
  const double r2 = 2.0 * cfg.squeezing;
  const double dmean = std::sqrt(cfg.tau) * du.u1m1.real() * q0;
  const double dvariance = cfg.tau * (u.u11.real() * du.u11.real() * std::expm1(r2) +
                                      u.u11.imag() * du.u11.imag() * std::expm1(-r2));
  return {dmean, dvariance};
}

GaussianState<double> output_state(const SensorConfig& cfg, const PhaseModel& model, double x,
                                   LossPlacement placement) {
  cfg.validate();
  const LossChannel<double> loss(cfg.tau);
  GaussianState<double> state = probe_state<double>(cfg.modes, cfg.squeezing, cfg.alpha);
  if (placement == LossPlacement::kAtInput) {
    state = apply_uniform_loss(state, loss);
  }
  state = apply_passive(state, system_unitary(cfg, model, x));
  if (placement == LossPlacement::kBeforeHomodyne) {
    state = apply_uniform_loss(state, loss);
  }
  return state;
}

QuadratureMoments<double> output_moments_dense(const SensorConfig& cfg, const PhaseModel& model, double x,
                                               LossPlacement placement) {
  return homodyne_q_distribution(output_state(cfg, model, x, placement), 0);
}

}  // namespace mpsense
