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

#ifndef MPSENSE_APPLICATIONS_HPP
#define MPSENSE_APPLICATIONS_HPP

// Phase models for concrete sensors.

#include "mpsense/fisher.hpp"

#include <vector>

namespace mpsense {

inline constexpr double kSpeedOfLight = 3e8;  // m/s

/// Linear array of RF-photonic phase modulators at positions m b, m = 1..M,
/// estimating the RF angle of incidence phi:
///   theta_m(phi) = A sin(Omega (t + m b sin(phi) / c)).
/// omega_rf enters the sine directly (rad/s).
struct RfArrayModel {
  double efficiency = 0.1;  ///< A
  double omega_rf = 3e4;    ///< Omega
  double pitch = 10.0;      ///< b, metres
  int modes = 1;            ///< M
  double time = 0.0;        ///< t, seconds
  double speed_of_light = kSpeedOfLight;
};

PhaseModel rf_phase_model(const RfArrayModel& m);

/// Beam-displacement tracking: M effective MZIs with phases 2 lambda_m delta.
struct BeamDisplacementModel {
  std::vector<double> lambdas;
};

/// <dtheta> and <dtheta^2> at delta0 = 0.
Prefactors<double> beam_displacement_prefactor(const BeamDisplacementModel& m);
PhaseModel beam_displacement_phase_model(const BeamDisplacementModel& m);

/// Thermal-conductivity estimation on a rod heated by an instantaneous line
/// source. The fibre sits at y0; sample m is taken at t_m = m / W:
///   theta_m(k) = beta u(y0, t_m),  u(y, t) = Q / sqrt(4 pi D t) exp(-y^2 / (4 D t)),
/// with diffusivity D = k / (rho c_p). The derivative in k is numeric.
struct GradiometryModel {
  double density = 1.0;                ///< rho, kg/m^3
  double specific_heat = 1.0;          ///< c_p, J/(kg K)
  double position = 0.0;               ///< y0, m
  double bandwidth = 1.0;              ///< W, Hz
  double phase_per_kelvin = 1.0;       ///< beta, rad/K
  double pulse = 1.0;                  ///< Q, K m
  int modes = 1;                       ///< M = W T
};

/// Temperature at (y, t) for diffusivity D.
double heat_kernel(double q, double diffusivity, double y, double t);

PhaseModel gradiometry_phase_model(const GradiometryModel& m);

}  // namespace mpsense

#endif  // MPSENSE_APPLICATIONS_HPP
