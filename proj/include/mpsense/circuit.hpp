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

#ifndef MPSENSE_CIRCUIT_HPP
#define MPSENSE_CIRCUIT_HPP

// The multi-phase sensor: a squeezed vacuum and a coherent state are spread
// over M Mach-Zehnder arms by U_I, the upper arms pick up phases theta_m(x),
// and the receiver undoes the reference phases theta_m(x0) and U_I before a
// homodyne measurement of mode 0.
//
// Mode layout of the 2M-mode register: modes 0..M-1 are the phase-carrying
// (upper) arms, modes M..2M-1 the reference arms. The squeezed vacuum enters
// mode 0 and the coherent state mode M.

#include "mpsense/phase_space.hpp"

#include <complex>
#include <functional>
#include <numbers>
#include <optional>

namespace mpsense {

/// One instance of the sensor.
struct SensorConfig {
  int modes = 1;                     ///< M, number of modulated phases
  double squeezing = 0.0;            ///< r
  std::complex<double> alpha = 0.0;  ///< coherent amplitude
  double tau = 1.0;                  ///< uniform transmissivity
  double phi_h = 0.0;                ///< homodyne phase
  double x0 = 0.0;                   ///< reference parameter value

  double squeezed_photons() const;
  double coherent_photons() const { return std::norm(alpha); }
  double total_photons() const { return squeezed_photons() + coherent_photons(); }
  bool has_real_alpha() const { return alpha.imag() == 0.0; }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Map x -> (theta_1(x), ..., theta_M(x)) with its derivative.
///
/// When no analytic derivative is supplied, dtheta uses a central difference
/// with step max(1e-6, 1e-6 |x|). Evaluation is reentrant.
class PhaseModel {
 public:
  using Function = std::function<Eigen::VectorXd(double)>;

  PhaseModel(int modes, Function theta, Function dtheta = {});

  /// theta_m(x) = slope * x for every m.
  static PhaseModel equal_phases(int modes, double slope = 1.0);
  /// theta_m(x) = offsets_m + slopes_m * x.
  static PhaseModel linear(Eigen::VectorXd slopes, Eigen::VectorXd offsets = {});

  int modes() const { return modes_; }
  bool has_analytic_derivative() const { return static_cast<bool>(dtheta_); }

  Eigen::VectorXd theta(double x) const;
  Eigen::VectorXd dtheta(double x) const;
  Eigen::VectorXd dtheta_numeric(double x) const;

  static double fd_step(double x);

 private:
  int modes_;
  Function theta_;
  Function dtheta_;
};

/// Balanced M-mode Fourier gate, F_jk = exp(2 pi i jk/M)/sqrt(M).
template <typename Scalar = double>
PassiveUnitary<Scalar> dft_gate(Eigen::Index m) {
  using C = std::complex<Scalar>;
  CMat<Scalar> f(m, m);
  const Scalar norm = Scalar(1) / std::sqrt(Scalar(m));
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      const Scalar angle = Scalar(2) * std::numbers::pi_v<Scalar> * Scalar((j * k) % m) / Scalar(m);
      f(j, k) = norm * C(std::cos(angle), std::sin(angle));
    }
  }
  return PassiveUnitary<Scalar>(std::move(f));
}

/// U_I = (1/sqrt2) [[F, F], [F, -F]] built from an M-mode balanced gate.
template <typename Scalar = double>
PassiveUnitary<Scalar> probe_circuit_from_gate(const PassiveUnitary<Scalar>& gate) {
  const Eigen::Index m = gate.n_modes();
  const CMat<Scalar>& f = gate.matrix();
  CMat<Scalar> u(2 * m, 2 * m);
  u << f, f, f, -f;
  u /= std::sqrt(Scalar(2));
  return PassiveUnitary<Scalar>(std::move(u));
}

template <typename Scalar = double>
PassiveUnitary<Scalar> build_probe_circuit(Eigen::Index m) {
  if (m < 1) {
    throw std::invalid_argument("build_probe_circuit: number of phases must be at least 1");
  }
  return probe_circuit_from_gate(dft_gate<Scalar>(m));
}

/// diag(e^{i theta_1}, ..., e^{i theta_M}, 1, ..., 1).
template <typename Derived>
PassiveUnitary<typename Derived::Scalar> build_modulation(const Eigen::MatrixBase<Derived>& thetas) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = thetas.size();
  CMat<Scalar> u = CMat<Scalar>::Identity(2 * m, 2 * m);
  for (Eigen::Index k = 0; k < m; ++k) {
    u(k, k) = std::polar(Scalar(1), thetas(k));
  }
  return PassiveUnitary<Scalar>(std::move(u));
}

/// diag(e^{i phi_H}, 1, ..., 1) on n modes.
template <typename Scalar = double>
PassiveUnitary<Scalar> homodyne_rotation(Eigen::Index n_modes, Scalar phi_h) {
  CMat<Scalar> u = CMat<Scalar>::Identity(n_modes, n_modes);
  u(0, 0) = std::polar(Scalar(1), phi_h);
  return PassiveUnitary<Scalar>(std::move(u));
}

/// Full system unitary U_H U_I^dagger U_{x0}^dagger U_x U_I for a given U_I.
PassiveUnitary<double> system_unitary(const SensorConfig& cfg, const PhaseModel& model, double x,
                                      const PassiveUnitary<double>& probe_circuit);
PassiveUnitary<double> system_unitary(const SensorConfig& cfg, const PhaseModel& model, double x);

/// The two entries of the system unitary that reach the measured mode:
/// u11 = U(0, 0) and u1m1 = U(0, M).
struct ReceiverElements {
  std::complex<double> u11;
  std::complex<double> u1m1;
};

ReceiverElements receiver_elements(const SensorConfig& cfg, const PhaseModel& model, double x);
/// d/dx of the receiver elements.
ReceiverElements receiver_element_derivatives(const SensorConfig& cfg, const PhaseModel& model, double x);

/// Where the uniform loss is applied in the dense propagation.
enum class LossPlacement { kAtInput, kBeforeHomodyne };

/// Closed-form homodyne moments of mode 0 (real alpha only):
///   mean     = sqrt(tau) Re{u1m1} q0,  q0 = sqrt(2) alpha
///   variance = (1/2)[1 + tau Re{u11}^2 (e^{2r} - 1) + tau Im{u11}^2 (e^{-2r} - 1)]
QuadratureMoments<double> output_moments(const SensorConfig& cfg, const PhaseModel& model, double x);

/// d/dx of output_moments, from the analytic receiver-element derivatives.
QuadratureMoments<double> output_moment_derivatives(const SensorConfig& cfg, const PhaseModel& model,
                                                    double x);

/// Homodyne moments by propagating the full 2M-mode state. Accepts complex alpha.
QuadratureMoments<double> output_moments_dense(const SensorConfig& cfg, const PhaseModel& model, double x,
                                               LossPlacement placement = LossPlacement::kAtInput);

/// State of all 2M modes just before detection.
GaussianState<double> output_state(const SensorConfig& cfg, const PhaseModel& model, double x,
                                   LossPlacement placement = LossPlacement::kAtInput);

}  // namespace mpsense

#endif  // MPSENSE_CIRCUIT_HPP
