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

#ifndef MPSENSE_ORACLE_HPP
#define MPSENSE_ORACLE_HPP

// Brute-force cross-checks for the closed forms: a truncated Fock-space
// density matrix of the single-phase (two-mode) sensor with its SLD quantum
// Fisher information, and a Monte-Carlo maximum-likelihood homodyne
// experiment.

#include "mpsense/circuit.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mpsense {

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two-mode density matrix on the Fock states |n1, n2> with n1 + n2 < cutoff.
///
/// This subspace is invariant under passive unitaries, so the interferometer
/// is applied exactly; only the input state is truncated.
struct FockState {
  int cutoff = 0;
  std::vector<std::pair<int, int>> basis;  ///< (n1, n2), ordered by n1 + n2, then n1
  Eigen::MatrixXcd rho;
  double trace_deficit = 0.0;  ///< 1 - Tr(rho)

  Eigen::Index index_of(int n1, int n2) const;
  Eigen::Index dim() const { return static_cast<Eigen::Index>(basis.size()); }
};

/// Number-conserving basis with n1 + n2 < cutoff.
std::vector<std::pair<int, int>> truncated_basis(int cutoff);

/// Fock-space representation of the two-mode passive unitary u on the
/// truncated basis, with U^dagger a U = u a.
Eigen::MatrixXcd fock_passive_unitary(const Eigen::Matrix2cd& u, int cutoff);

/// Single-mode Fock amplitudes of a squeezed vacuum, anti-squeezed in q.
Eigen::VectorXd squeezed_vacuum_amplitudes(double r, int cutoff);
/// Single-mode Fock amplitudes of a coherent state.
Eigen::VectorXcd coherent_amplitudes(std::complex<double> beta, int cutoff);
/// Single-mode pure-loss channel via its Kraus operators.
Eigen::MatrixXcd apply_pure_loss(const Eigen::MatrixXcd& rho, double tau);

/// Largest tolerated trace deficit before the state is rejected.
inline constexpr double kMaxTraceDeficit = 1e-4;

/// Sensor state after loss, U_I and the phase at x (single phase, M = 1).
/// Throws TruncationError if the trace deficit reaches kMaxTraceDeficit.
FockState fock_final_state(const SensorConfig& cfg, const PhaseModel& model, double x, int cutoff);

/// d rho / dx = i theta'(x) [n_1, rho] for the phase on mode 0.
Eigen::MatrixXcd fock_state_derivative(const FockState& state, const PhaseModel& model, double x);

/// Central difference of fock_final_state with the given step.
Eigen::MatrixXcd fock_state_derivative_fd(const SensorConfig& cfg, const PhaseModel& model, double x,
                                          int cutoff, double step = 1e-5);

/// H = 2 sum_{ij} |<i| d rho |j>|^2 / (p_i + p_j) over eigenpairs of rho with
/// p_i + p_j > 1e-12.
double sld_qfi(const FockState& state, const Eigen::MatrixXcd& drho);

/// Photon-number and quadrature moments of a FockState, for checking it
/// against the phase-space description.
GaussianState<double> fock_moments(const FockState& state);

struct McEstimate {
  std::int64_t n_trials = 0;      ///< independent maximum-likelihood estimates
  int shots_per_trial = 0;        ///< homodyne samples per estimate
  std::uint64_t seed = 0;
  double empirical_mse = 0.0;     ///< mean of (x_hat - x_true)^2
  double empirical_fisher = 0.0;  ///< per-shot: 1 / (mse * shots_per_trial)
  double mean_estimate = 0.0;
};

struct McOptions {
  std::int64_t n_trials = 100000;
  int shots_per_trial = 100;
  std::uint64_t seed = 1;
  int max_iterations = 100;
  int trials_per_batch = 1000;  ///< batch b draws from its own generator seeded with seed + b
  int threads = 0;              ///< 0: hardware concurrency
};

/// Draws homodyne outcomes at x_true from the closed-form output moments and
/// estimates x by maximising the Gaussian log-likelihood of each trial
/// (Fisher-scoring Newton steps started at x0). Bit-identical for a fixed
/// seed regardless of thread count. Throws EstimationError when the model
/// carries no information or an estimate does not converge.
McEstimate mc_homodyne(const SensorConfig& cfg, const PhaseModel& model, double x_true,
                       const McOptions& options = {});

}  // namespace mpsense

#endif  // MPSENSE_ORACLE_HPP
