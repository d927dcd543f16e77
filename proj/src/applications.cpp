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

#include "mpsense/applications.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mpsense {

PhaseModel rf_phase_model(const RfArrayModel& m) {
  if (!(m.efficiency > 0.0) || !(m.omega_rf > 0.0) || !(m.pitch > 0.0) || !(m.speed_of_light > 0.0)) {
    throw std::invalid_argument("rf: A, Omega and b must be positive");
  }
  if (m.modes < 1) {
    throw std::invalid_argument("M: must be at least 1");
  }
  auto theta = [m](double phi) {
    Eigen::VectorXd out(m.modes);
    for (int k = 0; k < m.modes; ++k) {
      const double pos = (k + 1) * m.pitch;
      out(k) = m.efficiency * std::sin(m.omega_rf * (m.time + pos * std::sin(phi) / m.speed_of_light));
    }
    return out;
  };
  auto dtheta = [m](double phi) {
    Eigen::VectorXd out(m.modes);
    for (int k = 0; k < m.modes; ++k) {
      const double pos = (k + 1) * m.pitch;
      out(k) = m.efficiency * std::cos(m.omega_rf * (m.time + pos * std::sin(phi) / m.speed_of_light)) *
               m.omega_rf * pos * std::cos(phi) / m.speed_of_light;
    }
    return out;
  };
  return PhaseModel(m.modes, theta, dtheta);
}

Prefactors<double> beam_displacement_prefactor(const BeamDisplacementModel& m) {
  if (m.lambdas.empty()) {
    throw std::invalid_argument("beam: lambdas must be nonempty");
  }
  const Eigen::Map<const Eigen::VectorXd> lambdas(m.lambdas.data(), static_cast<Eigen::Index>(m.lambdas.size()));
  return Prefactors<double>::from_derivatives(2.0 * lambdas);
}

PhaseModel beam_displacement_phase_model(const BeamDisplacementModel& m) {
  if (m.lambdas.empty()) {
    throw std::invalid_argument("beam: lambdas must be nonempty");
  }
  Eigen::VectorXd slopes = 2.0 * Eigen::Map<const Eigen::VectorXd>(m.lambdas.data(),
                                                                   static_cast<Eigen::Index>(m.lambdas.size()));
  for (double v : slopes) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("beam: lambdas must be finite");
    }
  }
  return PhaseModel::linear(std::move(slopes));
}

double heat_kernel(double q, double diffusivity, double y, double t) {
  const double spread = 4.0 * diffusivity * t;
  return q / std::sqrt(std::numbers::pi * spread) * std::exp(-y * y / spread);
}

PhaseModel gradiometry_phase_model(const GradiometryModel& m) {
  if (!(m.density > 0.0) || !(m.specific_heat > 0.0) || !(m.bandwidth > 0.0) || !(m.pulse > 0.0)) {
    throw std::invalid_argument("gradiometry: rho, c_p, W and Q must be positive");
  }
  if (!std::isfinite(m.phase_per_kelvin) || !std::isfinite(m.position)) {
    throw std::invalid_argument("gradiometry: beta and y0 must be finite");
  }
  if (m.modes < 1) {
    throw std::invalid_argument("M: must be at least 1");
  }
  // Samples start at m = 1, so t = 0 is never evaluated.
  auto theta = [m](double k) {
    if (!(k > 0.0)) {
      throw std::invalid_argument("gradiometry: thermal conductivity must be positive");
    }
    const double diffusivity = k / (m.density * m.specific_heat);
    Eigen::VectorXd out(m.modes);
    for (int s = 0; s < m.modes; ++s) {
      const double t = (s + 1) / m.bandwidth;
      out(s) = m.phase_per_kelvin * heat_kernel(m.pulse, diffusivity, m.position, t);
    }
    return out;
  };
  return PhaseModel(m.modes, theta);
}

}  // namespace mpsense
