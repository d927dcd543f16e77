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

#ifndef MPSENSE_FISHER_HPP
#define MPSENSE_FISHER_HPP

// Closed-form quantum and classical Fisher information for x.
//
// The scalar-templated functions take the probe (r, real alpha, tau) and the
// phase prefactors <dtheta> and <dtheta^2>; the SensorConfig/PhaseModel
// overloads evaluate prefactors at the reference point and dispatch to them.
// sigma denotes sin^2(phi_H) throughout.

#include "mpsense/circuit.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

namespace mpsense {

/// Below this squeezing csch(2r) is treated as singular and the homodyne
/// modes that depend on it fall back to phi_H = pi/2.
inline constexpr double kDegenerateSqueezing = 1e-8;

template <typename Scalar>
struct ProbeParameters {
  Scalar squeezing;  ///< r
  Scalar alpha;      ///< real coherent amplitude
  Scalar tau;
};

template <typename Scalar>
struct Prefactors {
  Scalar mean_dtheta = 0;     ///< <dtheta> = (1/M) sum_m dtheta_m
  Scalar mean_dtheta_sq = 0;  ///< <dtheta^2> = (1/M) sum_m dtheta_m^2

  template <typename Derived>
  static Prefactors from_derivatives(const Eigen::MatrixBase<Derived>& dtheta) {
    return {dtheta.mean(), dtheta.squaredNorm() / Scalar(dtheta.size())};
  }
};

/// Thermal occupation and reduced squeezing of the lossy squeezed mode.
template <typename Scalar>
struct ThermalSqueezing {
  Scalar thermal_photons;    ///< N1bar
  Scalar reduced_squeezing;  ///< s_red
};

template <typename Scalar>
struct LossyQfiIntermediates {
  Scalar thermal_photons;
  Scalar reduced_squeezing;
  Scalar h;
};

template <typename Scalar>
ThermalSqueezing<Scalar> qfi_intermediates(Scalar r, Scalar tau) {
  using std::expm1;
  using std::log1p;
  using std::sinh;
  using std::sqrt;
  const Scalar sh = sinh(r);
  const Scalar n1 = sqrt(tau * (Scalar(1) - tau) * sh * sh + Scalar(0.25)) - Scalar(0.5);
  const Scalar s = (log1p(expm1(Scalar(2) * r) * tau) - log1p(expm1(Scalar(-2) * r) * tau)) / Scalar(4);
  return {n1, s};
}

/// Cross-phase term h of the lossy QFI matrix. Complex alpha enters only
/// through Re(alpha^2).
template <typename Scalar>
Scalar h_term(Scalar r, std::complex<Scalar> alpha, Scalar tau) {
  using std::sinh;
  const auto [n1, s] = qfi_intermediates(r, tau);
  const Scalar c = Scalar(2) * n1 + Scalar(1);
  const Scalar k = Scalar(2) * n1 * (n1 + Scalar(1)) + Scalar(1);  // (c^2 + 1)/2
  const Scalar sh = sinh(s);
  const Scalar sh2 = sinh(Scalar(2) * s);
  const Scalar abs2 = std::norm(alpha);
  const Scalar re_alpha_sq = alpha.real() * alpha.real() - alpha.imag() * alpha.imag();
  // c^3 cosh4s - 2k c^2 cosh2s + c, rewritten without the cancellation near s = 0.
  const Scalar hyperbolic = Scalar(2) * c * c * c * sh2 * sh2 - Scalar(4) * k * c * c * sh * sh -
                            Scalar(4) * n1 * c * k;
  const Scalar numerator = Scalar(8) * tau * abs2 * k * (sh * sh - n1) +
                           Scalar(4) * re_alpha_sq * k * tau * sh2 + hyperbolic;
  const Scalar denominator =
      Scalar(4) * (Scalar(4) * n1 * n1 * n1 + Scalar(6) * n1 * n1 + Scalar(4) * n1 + Scalar(1));
  return numerator / denominator;
}

template <typename Scalar>
LossyQfiIntermediates<Scalar> lossy_qfi_intermediates(const ProbeParameters<Scalar>& p) {
  const auto [n1, s] = qfi_intermediates(p.squeezing, p.tau);
  return {n1, s, h_term(p.squeezing, std::complex<Scalar>(p.alpha, 0), p.tau)};
}

/// H_x = 2 (sinh^2 s + tau alpha^2 + N1 cosh 2s) <dtheta^2> + h <dtheta>^2.
template <typename Scalar>
Scalar qfi(const ProbeParameters<Scalar>& p, const Prefactors<Scalar>& pf) {
  using std::cosh;
  using std::sinh;
  const auto in = lossy_qfi_intermediates(p);
  const Scalar sh = sinh(in.reduced_squeezing);
  const Scalar diag = Scalar(2) * (sh * sh + p.tau * p.alpha * p.alpha +
                                   in.thermal_photons * cosh(Scalar(2) * in.reduced_squeezing));
  return diag * pf.mean_dtheta_sq + in.h * pf.mean_dtheta * pf.mean_dtheta;
}

/// Lossless QFI written in photon numbers, real alpha:
///   <dtheta>^2 [Nv (sqrt Ns + sqrt(Ns+1))^2 + 2 Ns (Ns+1) - N] + 2 <dtheta^2> N.
template <typename Scalar>
Scalar qfi_lossless(Scalar squeezed_photons, Scalar coherent_photons, const Prefactors<Scalar>& pf) {
  using std::sqrt;
  const Scalar ns = squeezed_photons;
  const Scalar nv = coherent_photons;
  const Scalar n = ns + nv;
  const Scalar gain = sqrt(ns) + sqrt(ns + Scalar(1));
  return pf.mean_dtheta * pf.mean_dtheta * (nv * gain * gain + Scalar(2) * ns * (ns + Scalar(1)) - n) +
         Scalar(2) * pf.mean_dtheta_sq * n;
}

/// Homodyne CFI at x0, split into the mean (displacement) and variance parts.
template <typename Scalar>
struct CfiComponents {
  Scalar displacement;
  Scalar variance;
  Scalar total() const { return displacement + variance; }
};

/// CFI at x0 as a function of sigma = sin^2(phi_H).
template <typename Scalar>
CfiComponents<Scalar> cfi_components_sigma(const ProbeParameters<Scalar>& p, Scalar sigma, Scalar mean_dtheta) {
  using std::exp;
  using std::sinh;
  const Scalar r2 = Scalar(2) * p.squeezing;
  const Scalar denom =
      Scalar(1) - p.tau + p.tau * ((Scalar(1) - sigma) * exp(r2) + sigma * exp(-r2));
  const Scalar m1sq = mean_dtheta * mean_dtheta;
  const Scalar sh = sinh(r2);
  const Scalar sin_sq_2phi = Scalar(4) * sigma * (Scalar(1) - sigma);
  return {p.tau * m1sq * sigma * p.alpha * p.alpha / denom,
          p.tau * p.tau * m1sq * sin_sq_2phi * sh * sh / (Scalar(2) * denom * denom)};
}

template <typename Scalar>
CfiComponents<Scalar> cfi_components(const ProbeParameters<Scalar>& p, Scalar phi_h, Scalar mean_dtheta) {
  using std::cos;
  using std::exp;
  using std::sin;
  using std::sinh;
  // Same expressions as cfi_components_sigma, written in phi_H.
  const Scalar c = cos(phi_h);
  const Scalar s = sin(phi_h);
  const Scalar r2 = Scalar(2) * p.squeezing;
  const Scalar denom = Scalar(1) - p.tau + p.tau * (c * c * exp(r2) + s * s * exp(-r2));
  const Scalar m1sq = mean_dtheta * mean_dtheta;
  const Scalar sh = sinh(r2);
  const Scalar s2 = sin(Scalar(2) * phi_h);
  return {p.tau * m1sq * s * s * p.alpha * p.alpha / denom,
          p.tau * p.tau * m1sq * s2 * s2 * sh * sh / (Scalar(2) * denom * denom)};
}

/// phi_H = pi/2: tau <dtheta>^2 alpha^2 / (tau e^{-2r} + 1 - tau).
template <typename Scalar>
Scalar cfi_mode1(const ProbeParameters<Scalar>& p, Scalar mean_dtheta) {
  using std::exp;
  return p.tau * mean_dtheta * mean_dtheta * p.alpha * p.alpha /
         (p.tau * exp(Scalar(-2) * p.squeezing) + Scalar(1) - p.tau);
}

/// Homodyne phase that maximises the variance term:
/// cos(2 phi_H) = -tau sinh 2r / (1 + 2 tau sinh^2 r).
template <typename Scalar>
Scalar mode2_homodyne_phase(Scalar r, Scalar tau) {
  using std::acos;
  using std::sinh;
  const Scalar sh = sinh(r);
  return acos(-tau * sinh(Scalar(2) * r) / (Scalar(1) + Scalar(2) * tau * sh * sh)) / Scalar(2);
}

template <typename Scalar>
struct Mode2Result {
  CfiComponents<Scalar> components;
  Scalar phi_h;
  bool degenerate;  ///< r below kDegenerateSqueezing: phi_H = pi/4, no variance term
  Scalar total() const { return components.total(); }
};

template <typename Scalar>
Mode2Result<Scalar> cfi_mode2(const ProbeParameters<Scalar>& p, Scalar mean_dtheta) {
  using std::sinh;
  const Scalar sh = sinh(p.squeezing);
  const Scalar sh2 = sinh(Scalar(2) * p.squeezing);
  const Scalar m1sq = mean_dtheta * mean_dtheta;
  const bool degenerate = p.squeezing <= Scalar(kDegenerateSqueezing);
  const Scalar phi = degenerate ? std::numbers::pi_v<Scalar> / Scalar(4)
                                : mode2_homodyne_phase(p.squeezing, p.tau);
  const Scalar displacement = cfi_mode1(p, mean_dtheta) / Scalar(2);
  const Scalar variance =
      degenerate ? Scalar(0)
                 : p.tau * p.tau * m1sq * sh2 * sh2 /
                       (Scalar(2) * (Scalar(1) + Scalar(4) * p.tau * (Scalar(1) - p.tau) * sh * sh));
  return {{displacement, variance}, phi, degenerate};
}

/// Maximiser of the total CFI over sigma = sin^2(phi_H); may exceed 1.
/// Empty when r <= kDegenerateSqueezing or tau == 0.
template <typename Scalar>
std::optional<Scalar> sigma_opt(const ProbeParameters<Scalar>& p) {
  using std::cosh;
  using std::expm1;
  using std::sinh;
  using std::tanh;
  if (p.squeezing <= Scalar(kDegenerateSqueezing) || p.tau <= Scalar(0)) {
    return std::nullopt;
  }
  const Scalar sh2 = sinh(Scalar(2) * p.squeezing);
  const Scalar g = p.alpha * p.alpha / Scalar(2) *
                   (Scalar(1) / sh2 + p.tau * tanh(p.squeezing) + p.tau);
  const Scalar anti = Scalar(1) + p.tau * expm1(Scalar(2) * p.squeezing);
  return anti * (p.tau * sh2 + g) /
         (Scalar(2) * p.tau * sh2 * (Scalar(1) - p.tau + p.tau * cosh(Scalar(2) * p.squeezing) + g));
}

template <typename Scalar>
struct Mode3Result {
  Scalar value;
  std::optional<Scalar> sigma_opt;
  bool uses_mode1;  ///< sigma_opt >= 1 or degenerate: phi_H = pi/2 is optimal
  CfiComponents<Scalar> components;
};

/// Fully optimised homodyne CFI.
///
/// For sigma_opt < 1 the value is the sum of the displacement and variance
/// terms at sigma_opt,
///   I_d = <dtheta>^2 {2 a^2 tau sh^2 + a^4 [1 - (1 - e^{2r}) tau]} / (4 sh^2 [1 - (1 - e^{-2r}) tau])
///   I_V = <dtheta>^2 {4 tau^2 sh^2 - a^4 [1 - (1 - e^{2r}) tau]^2 / sh^2} / (8 [1 + 4 tau (1 - tau) sinh^2 r])
/// with sh = sinh 2r; otherwise it is the phi_H = pi/2 value.
template <typename Scalar>
Mode3Result<Scalar> cfi_mode3(const ProbeParameters<Scalar>& p, Scalar mean_dtheta) {
  using std::expm1;
  using std::sinh;
  const auto sigma = sigma_opt(p);
  if (!sigma || *sigma >= Scalar(1)) {
    const Scalar v = cfi_mode1(p, mean_dtheta);
    return {v, sigma, true, {v, Scalar(0)}};
  }
  const Scalar r2 = Scalar(2) * p.squeezing;
  const Scalar sh2 = sinh(r2);
  const Scalar sh = sinh(p.squeezing);
  const Scalar m1sq = mean_dtheta * mean_dtheta;
  const Scalar a2 = p.alpha * p.alpha;
  const Scalar anti = Scalar(1) + p.tau * expm1(r2);    // 1 - (1 - e^{2r}) tau
  const Scalar squeezed = Scalar(1) + p.tau * expm1(-r2);  // 1 - (1 - e^{-2r}) tau
  const Scalar displacement =
      m1sq * (Scalar(2) * a2 * p.tau * sh2 * sh2 + a2 * a2 * anti) / (Scalar(4) * sh2 * sh2 * squeezed);
  const Scalar variance =
      m1sq * (Scalar(4) * p.tau * p.tau * sh2 * sh2 - a2 * a2 * anti * anti / (sh2 * sh2)) /
      (Scalar(8) * (Scalar(1) + Scalar(4) * p.tau * (Scalar(1) - p.tau) * sh * sh));
  return {displacement + variance, sigma, false, {displacement, variance}};
}

// ---------------------------------------------------------------------------
// SensorConfig / PhaseModel front end. Closed forms require a real alpha and
// throw std::invalid_argument otherwise. CFI closed forms are evaluated at x0.

ProbeParameters<double> probe_parameters(const SensorConfig& cfg);
Prefactors<double> prefactors(const PhaseModel& model, double x);

double qfi(const SensorConfig& cfg, const PhaseModel& model, double x);
CfiComponents<double> cfi_components(const SensorConfig& cfg, const PhaseModel& model);
double cfi_mode1(const SensorConfig& cfg, const PhaseModel& model);
Mode2Result<double> cfi_mode2(const SensorConfig& cfg, const PhaseModel& model);
std::optional<double> sigma_opt(const SensorConfig& cfg);
Mode3Result<double> cfi_mode3(const SensorConfig& cfg, const PhaseModel& model);

/// Homodyne CFI at arbitrary x from central differences of the closed-form
/// output moments: I = mean'^2 / V + (V'/V)^2 / 2.
double cfi_numeric(const SensorConfig& cfg, const PhaseModel& model, double x);

/// Gaussian CFI from the analytic moment derivatives.
double cfi_analytic(const SensorConfig& cfg, const PhaseModel& model, double x);

struct FisherReport {
  double qfi;
  double cfi_d;
  double cfi_v;
  double cfi_mode1;
  double cfi_mode2;
  double cfi_mode3;
  std::optional<double> sigma_opt;
  double mode2_phi_h;
  LossyQfiIntermediates<double> intermediates;
  Prefactors<double> prefactors;
};

/// Everything at x = x0; cfi_d/cfi_v use the configured phi_H.
FisherReport fisher_report(const SensorConfig& cfg, const PhaseModel& model);

enum class EnergyObjective { kQfi, kCfiMode3 };

struct EnergyAllocation {
  double eta;  ///< fraction of the photon budget in the squeezed vacuum
  double value;
  double squeezing;
  double alpha;
};

/// r = asinh(sqrt(eta N)), alpha = sqrt((1 - eta) N).
EnergyAllocation allocation_probe(double total_photons, double eta);

double energy_objective(double total_photons, double eta, double tau, const Prefactors<double>& pf,
                        EnergyObjective objective);

/// Maximises the objective over eta in [0, 1]: a 101-point grid, then
/// golden-section refinement to 1e-6 around the best grid point. Ties go to
/// the smallest eta.
EnergyAllocation optimize_energy_allocation(double total_photons, double tau, const Prefactors<double>& pf,
                                            EnergyObjective objective);
EnergyAllocation optimize_energy_allocation(double total_photons, double tau, const PhaseModel& model,
                                            double x0, EnergyObjective objective);

}  // namespace mpsense

#endif  // MPSENSE_FISHER_HPP
