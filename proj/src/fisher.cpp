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

#include "mpsense/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpsense {

ProbeParameters<double> probe_parameters(const SensorConfig& cfg) {
  cfg.validate();
  if (!cfg.has_real_alpha()) {
    throw std::invalid_argument("alpha: closed-form Fisher information requires a real coherent amplitude");
  }
  return {cfg.squeezing, cfg.alpha.real(), cfg.tau};
}

Prefactors<double> prefactors(const PhaseModel& model, double x) {
  return Prefactors<double>::from_derivatives(model.dtheta(x));
}

double qfi(const SensorConfig& cfg, const PhaseModel& model, double x) {
  return qfi(probe_parameters(cfg), prefactors(model, x));
}

CfiComponents<double> cfi_components(const SensorConfig& cfg, const PhaseModel& model) {
  return cfi_components(probe_parameters(cfg), cfg.phi_h, prefactors(model, cfg.x0).mean_dtheta);
}

double cfi_mode1(const SensorConfig& cfg, const PhaseModel& model) {
  return cfi_mode1(probe_parameters(cfg), prefactors(model, cfg.x0).mean_dtheta);
}

Mode2Result<double> cfi_mode2(const SensorConfig& cfg, const PhaseModel& model) {
  return cfi_mode2(probe_parameters(cfg), prefactors(model, cfg.x0).mean_dtheta);
}

std::optional<double> sigma_opt(const SensorConfig& cfg) { return sigma_opt(probe_parameters(cfg)); }

Mode3Result<double> cfi_mode3(const SensorConfig& cfg, const PhaseModel& model) {
  return cfi_mode3(probe_parameters(cfg), prefactors(model, cfg.x0).mean_dtheta);
}

namespace {

double gaussian_fisher(const QuadratureMoments<double>& m, const QuadratureMoments<double>& dm) {
  if (!(m.variance > 0.0)) {
    throw std::runtime_error("homodyne variance is not positive");
  }
  const double ratio = dm.variance / m.variance;
  return dm.mean * dm.mean / m.variance + 0.5 * ratio * ratio;
}

}  // namespace

double cfi_numeric(const SensorConfig& cfg, const PhaseModel& model, double x) {
  const double h = PhaseModel::fd_step(x);
  const auto plus = output_moments(cfg, model, x + h);
  const auto minus = output_moments(cfg, model, x - h);
  const QuadratureMoments<double> d{(plus.mean - minus.mean) / (2.0 * h),
                                    (plus.variance - minus.variance) / (2.0 * h)};
  return gaussian_fisher(output_moments(cfg, model, x), d);
}

double cfi_analytic(const SensorConfig& cfg, const PhaseModel& model, double x) {
  return gaussian_fisher(output_moments(cfg, model, x), output_moment_derivatives(cfg, model, x));
}

FisherReport fisher_report(const SensorConfig& cfg, const PhaseModel& model) {
  const auto p = probe_parameters(cfg);
  const auto pf = prefactors(model, cfg.x0);
  const auto comps = cfi_components(p, cfg.phi_h, pf.mean_dtheta);
  const auto m2 = cfi_mode2(p, pf.mean_dtheta);
  const auto m3 = cfi_mode3(p, pf.mean_dtheta);
  return FisherReport{
      .qfi = qfi(p, pf),
      .cfi_d = comps.displacement,
      .cfi_v = comps.variance,
      .cfi_mode1 = cfi_mode1(p, pf.mean_dtheta),
      .cfi_mode2 = m2.total(),
      .cfi_mode3 = m3.value,
      .sigma_opt = m3.sigma_opt,
      .mode2_phi_h = m2.phi_h,
      .intermediates = lossy_qfi_intermediates(p),
      .prefactors = pf,
  };
}

EnergyAllocation allocation_probe(double total_photons, double eta) {
  const double ns = eta * total_photons;
  const double nv = std::max(0.0, (1.0 - eta) * total_photons);
  return {eta, 0.0, std::asinh(std::sqrt(ns)), std::sqrt(nv)};
}

double energy_objective(double total_photons, double eta, double tau, const Prefactors<double>& pf,
                        EnergyObjective objective) {
  const auto a = allocation_probe(total_photons, eta);
  const ProbeParameters<double> p{a.squeezing, a.alpha, tau};
  switch (objective) {
    case EnergyObjective::kQfi:
      return qfi(p, pf);
    case EnergyObjective::kCfiMode3:
      return cfi_mode3(p, pf.mean_dtheta).value;
  }
  throw std::logic_error("unknown energy objective");
}

EnergyAllocation optimize_energy_allocation(double total_photons, double tau, const Prefactors<double>& pf,
                                            EnergyObjective objective) {
  if (!(total_photons > 0.0) || !std::isfinite(total_photons)) {
    throw std::invalid_argument("N: photon budget must be positive and finite");
  }
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("tau: must lie in [0, 1]");
  }
  auto f = [&](double eta) { return energy_objective(total_photons, eta, tau, pf, objective); };

  constexpr int kGrid = 101;
  int best = 0;
  double best_value = f(0.0);
  for (int i = 1; i < kGrid; ++i) {
    const double v = f(static_cast<double>(i) / (kGrid - 1));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  double eta_star = static_cast<double>(best) / (kGrid - 1);

  // Golden-section search on the bracket around the best grid point.
  double lo = std::max(0.0, static_cast<double>(best - 1) / (kGrid - 1));
  double hi = std::min(1.0, static_cast<double>(best + 1) / (kGrid - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double fa = f(a);
  double fb = f(b);
  while (hi - lo > 1e-6) {
    if (fa >= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = f(b);
    }
  }
  const double refined = (lo + hi) / 2.0;
  const double refined_value = f(refined);
  if (refined_value > best_value) {
    eta_star = refined;
    best_value = refined_value;
  }
  auto out = allocation_probe(total_photons, eta_star);
  out.value = best_value;
  return out;
}

EnergyAllocation optimize_energy_allocation(double total_photons, double tau, const PhaseModel& model,
                                            double x0, EnergyObjective objective) {
  return optimize_energy_allocation(total_photons, tau, prefactors(model, x0), objective);
}

}  // namespace mpsense
