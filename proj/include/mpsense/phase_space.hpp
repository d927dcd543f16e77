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

#ifndef MPSENSE_PHASE_SPACE_HPP
#define MPSENSE_PHASE_SPACE_HPP

// Gaussian phase-space toolbox.
//
// Conventions: hbar = 1, vacuum covariance I/2, and quadratures ordered as
// (q_1 ... q_n, p_1 ... p_n). A mode operator a_j = (q_j + i p_j)/sqrt(2)
// transforms under a passive unitary as a -> U a.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace mpsense {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CMat = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

namespace tolerance {
inline constexpr double kSymmetry = 1e-12;
inline constexpr double kPhysicality = 1e-9;
inline constexpr double kUnitarity = 1e-10;
inline constexpr double kSymplectic = 1e-10;
}  // namespace tolerance

/// Omega_s = [[0, I], [-I, 0]] for n modes in (q, p) ordering.
template <typename Scalar = double>
Mat<Scalar> symplectic_form(Eigen::Index n_modes) {
  Mat<Scalar> omega = Mat<Scalar>::Zero(2 * n_modes, 2 * n_modes);
  omega.topRightCorner(n_modes, n_modes).setIdentity();
  omega.bottomLeftCorner(n_modes, n_modes) = -Mat<Scalar>::Identity(n_modes, n_modes);
  return omega;
}

/// Williamson spectrum of a covariance matrix, ascending.
///
/// Computed from the antisymmetric matrix L^T Omega L (V = L L^T), which is
/// similar to Omega V and whose Hermitian partner i L^T Omega L has
/// eigenvalues +/- nu_k.
template <typename Derived>
Vec<typename Derived::Scalar> symplectic_eigenvalues(const Eigen::MatrixBase<Derived>& cov) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index dim = cov.rows();
  if (dim == 0 || dim % 2 != 0 || cov.cols() != dim) {
    throw std::invalid_argument("symplectic_eigenvalues: covariance must be 2n x 2n");
  }
  const Eigen::Index n = dim / 2;
  Mat<Scalar> sym = (cov + cov.transpose()) / Scalar(2);
  Eigen::LLT<Mat<Scalar>> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("symplectic_eigenvalues: covariance is not positive definite");
  }
  Mat<Scalar> lower = llt.matrixL();
  Mat<Scalar> antisym = lower.transpose() * symplectic_form<Scalar>(n) * lower;
  CMat<Scalar> herm = std::complex<Scalar>(0, 1) * antisym.template cast<std::complex<Scalar>>();
  Eigen::SelfAdjointEigenSolver<CMat<Scalar>> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symplectic_eigenvalues: eigensolver failed");
  }
  // Eigenvalues come sorted ascending as (-nu_max, ..., -nu_min, nu_min, ..., nu_max).
  return solver.eigenvalues().tail(n);
}

/// First and second moments of an n-mode Gaussian state.
template <typename Scalar = double>
class GaussianState {
 public:
  GaussianState(Vec<Scalar> mean, Mat<Scalar> cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    const Eigen::Index dim = mean_.size();
    if (dim == 0 || dim % 2 != 0) {
      throw std::invalid_argument("GaussianState: moment vector must have even, nonzero length");
    }
    if (cov_.rows() != dim || cov_.cols() != dim) {
      throw std::invalid_argument("GaussianState: covariance dimension does not match moments");
    }
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > Scalar(tolerance::kSymmetry)) {
      throw std::invalid_argument("GaussianState: covariance is not symmetric");
    }
    const Scalar nu_min = symplectic_eigenvalues(cov_).minCoeff();
    if (nu_min < Scalar(0.5) - Scalar(tolerance::kPhysicality)) {
      throw std::invalid_argument("GaussianState: covariance violates the uncertainty principle");
    }
  }

  static GaussianState vacuum(Eigen::Index n_modes) {
    return GaussianState(Vec<Scalar>::Zero(2 * n_modes),
                         Mat<Scalar>::Identity(2 * n_modes, 2 * n_modes) / Scalar(2));
  }

  Eigen::Index n_modes() const { return mean_.size() / 2; }
  const Vec<Scalar>& mean() const { return mean_; }
  const Mat<Scalar>& cov() const { return cov_; }

  /// Purity Tr(rho^2) = 1 / sqrt(det(2V)).
  Scalar purity() const { return Scalar(1) / std::sqrt((Scalar(2) * cov_).determinant()); }

 private:
  Vec<Scalar> mean_;
  Mat<Scalar> cov_;
};

template <typename Derived>
typename Derived::RealScalar unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  using C = typename Derived::Scalar;
  const auto n = u.rows();
  return (u.adjoint() * u - Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n))
      .cwiseAbs()
      .maxCoeff();
}

/// Complex n x n mode-mixing matrix; unitarity is checked on construction.
template <typename Scalar = double>
class PassiveUnitary {
 public:
  explicit PassiveUnitary(CMat<Scalar> u) : u_(std::move(u)) {
    if (u_.rows() == 0 || u_.rows() != u_.cols()) {
      throw std::invalid_argument("PassiveUnitary: matrix must be square and nonempty");
    }
    if (unitarity_defect(u_) > Scalar(tolerance::kUnitarity)) {
      throw std::invalid_argument("PassiveUnitary: matrix is not unitary");
    }
  }

  static PassiveUnitary identity(Eigen::Index n) { return PassiveUnitary(CMat<Scalar>::Identity(n, n)); }

  Eigen::Index n_modes() const { return u_.rows(); }
  const CMat<Scalar>& matrix() const { return u_; }
  PassiveUnitary adjoint() const { return PassiveUnitary(u_.adjoint()); }

  friend PassiveUnitary operator*(const PassiveUnitary& a, const PassiveUnitary& b) {
    if (a.n_modes() != b.n_modes()) {
      throw std::invalid_argument("PassiveUnitary: mode count mismatch in product");
    }
    return PassiveUnitary(a.u_ * b.u_);
  }

 private:
  CMat<Scalar> u_;
};

/// Real 2n x 2n phase-space map.
template <typename Scalar = double>
class Symplectic {
 public:
  explicit Symplectic(Mat<Scalar> s) : s_(std::move(s)) {
    if (s_.rows() == 0 || s_.rows() != s_.cols() || s_.rows() % 2 != 0) {
      throw std::invalid_argument("Symplectic: matrix must be 2n x 2n");
    }
    const Mat<Scalar> omega = symplectic_form<Scalar>(s_.rows() / 2);
    if ((s_ * omega * s_.transpose() - omega).cwiseAbs().maxCoeff() > Scalar(tolerance::kSymplectic)) {
      throw std::invalid_argument("Symplectic: matrix does not preserve the symplectic form");
    }
  }

  Eigen::Index n_modes() const { return s_.rows() / 2; }
  const Mat<Scalar>& matrix() const { return s_; }

 private:
  Mat<Scalar> s_;
};

/// Identical pure-loss channel on every mode.
template <typename Scalar = double>
class LossChannel {
 public:
  explicit LossChannel(Scalar tau) : tau_(tau) {
    if (!(tau >= Scalar(0) && tau <= Scalar(1))) {
      throw std::invalid_argument("LossChannel: transmissivity must lie in [0, 1]");
    }
  }
  Scalar transmissivity() const { return tau_; }

 private:
  Scalar tau_;
};

/// S = [[Re U, -Im U], [Im U, Re U]].
template <typename Scalar>
Symplectic<Scalar> symplectic_from_unitary(const PassiveUnitary<Scalar>& unitary) {
  const CMat<Scalar>& u = unitary.matrix();
  const Eigen::Index n = u.rows();
  Mat<Scalar> s(2 * n, 2 * n);
  s.topLeftCorner(n, n) = u.real();
  s.topRightCorner(n, n) = -u.imag();
  s.bottomLeftCorner(n, n) = u.imag();
  s.bottomRightCorner(n, n) = u.real();
  return Symplectic<Scalar>(std::move(s));
}

template <typename Scalar>
Symplectic<Scalar> symplectic_from_unitary(const CMat<Scalar>& u) {
  return symplectic_from_unitary(PassiveUnitary<Scalar>(u));
}

template <typename Scalar>
GaussianState<Scalar> apply_symplectic(const GaussianState<Scalar>& state, const Symplectic<Scalar>& s) {
  if (state.n_modes() != s.n_modes()) {
    throw std::invalid_argument("apply_symplectic: mode count mismatch");
  }
  const Mat<Scalar>& m = s.matrix();
  Mat<Scalar> cov = m * state.cov() * m.transpose();
  cov = (cov + cov.transpose()) / Scalar(2);
  return GaussianState<Scalar>(m * state.mean(), std::move(cov));
}

template <typename Scalar>
GaussianState<Scalar> apply_passive(const GaussianState<Scalar>& state, const PassiveUnitary<Scalar>& u) {
  return apply_symplectic(state, symplectic_from_unitary(u));
}

/// d -> sqrt(tau) d,  V -> tau V + (1 - tau)/2 I.
template <typename Scalar>
GaussianState<Scalar> apply_uniform_loss(const GaussianState<Scalar>& state, const LossChannel<Scalar>& channel) {
  const Scalar tau = channel.transmissivity();
  const Eigen::Index dim = state.mean().size();
  Mat<Scalar> cov = tau * state.cov() + (Scalar(1) - tau) / Scalar(2) * Mat<Scalar>::Identity(dim, dim);
  return GaussianState<Scalar>(std::sqrt(tau) * state.mean(), std::move(cov));
}

/// Squeezed vacuum in mode 0 and coherent state alpha in mode M of a 2M-mode
/// register; every other mode is vacuum. Mode 0 is anti-squeezed in q.
template <typename Scalar = double>
GaussianState<Scalar> probe_state(Eigen::Index m_phases, Scalar squeezing, std::complex<Scalar> alpha) {
  if (m_phases < 1) {
    throw std::invalid_argument("probe_state: number of phases must be at least 1");
  }
  if (!(squeezing >= Scalar(0))) {
    throw std::invalid_argument("probe_state: squeezing must be nonnegative");
  }
  const Eigen::Index n = 2 * m_phases;
  Vec<Scalar> mean = Vec<Scalar>::Zero(2 * n);
  mean(m_phases) = std::sqrt(Scalar(2)) * alpha.real();
  mean(n + m_phases) = std::sqrt(Scalar(2)) * alpha.imag();
  Vec<Scalar> diag = Vec<Scalar>::Ones(2 * n);
  diag(0) = std::exp(Scalar(2) * squeezing);
  diag(n) = std::exp(Scalar(-2) * squeezing);
  return GaussianState<Scalar>(std::move(mean), Mat<Scalar>(diag.asDiagonal()) / Scalar(2));
}

template <typename Scalar>
struct QuadratureMoments {
  Scalar mean;
  Scalar variance;
};

/// Statistics of a q-quadrature homodyne measurement on one mode (0-based).
template <typename Scalar>
QuadratureMoments<Scalar> homodyne_q_distribution(const GaussianState<Scalar>& state, Eigen::Index mode) {
  if (mode < 0 || mode >= state.n_modes()) {
    throw std::invalid_argument("homodyne_q_distribution: mode index " + std::to_string(mode) +
                                " out of range");
  }
  return {state.mean()(mode), state.cov()(mode, mode)};
}

template <typename Scalar>
bool is_physical(const GaussianState<Scalar>& state, Scalar tol = Scalar(tolerance::kPhysicality)) {
  return symplectic_eigenvalues(state.cov()).minCoeff() >= Scalar(0.5) - tol;
}

}  // namespace mpsense

#endif  // MPSENSE_PHASE_SPACE_HPP
