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

#include "mpsense/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <thread>

#include <fmt/format.h>

namespace mpsense {

namespace {

using cd = std::complex<double>;

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

cd ipow(cd base, int n) {
  cd out = 1.0;
  for (int i = 0; i < n; ++i) out *= base;
  return out;
}

double binomial(int n, int k) {
  return std::round(std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k)));
}

// Coefficients of (a A + b B)^n as a polynomial in A: c[k] multiplies A^k B^{n-k}.
std::vector<cd> binomial_expand(cd a, cd b, int n) {
  std::vector<cd> c(n + 1);
  for (int k = 0; k <= n; ++k) {
    c[k] = binomial(n, k) * ipow(a, k) * ipow(b, n - k);
  }
  return c;
}

}  // namespace

std::vector<std::pair<int, int>> truncated_basis(int cutoff) {
  std::vector<std::pair<int, int>> basis;
  for (int total = 0; total < cutoff; ++total) {
    for (int n1 = 0; n1 <= total; ++n1) {
      basis.emplace_back(n1, total - n1);
    }
  }
  return basis;
}

Eigen::Index FockState::index_of(int n1, int n2) const {
  const int total = n1 + n2;
  if (n1 < 0 || n2 < 0 || total >= cutoff) {
    return -1;
  }
  return static_cast<Eigen::Index>(total) * (total + 1) / 2 + n1;
}

Eigen::MatrixXcd fock_passive_unitary(const Eigen::Matrix2cd& u, int cutoff) {
  // U |n1, n2> = (u00 A + u10 B)^n1 (u01 A + u11 B)^n2 / sqrt(n1! n2!) |0>,
  // with A, B the creation operators of modes 0 and 1.
  const auto basis = truncated_basis(cutoff);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto [n1, n2] = basis[col];
    const int total = n1 + n2;
    const auto first = binomial_expand(u(0, 0), u(1, 0), n1);
    const auto second = binomial_expand(u(0, 1), u(1, 1), n2);
    const Eigen::Index offset = static_cast<Eigen::Index>(total) * (total + 1) / 2;
    for (int i = 0; i <= n1; ++i) {
      for (int j = 0; j <= n2; ++j) {
        const int k = i + j;
        const double norm =
            std::exp(0.5 * (log_factorial(k) + log_factorial(total - k) - log_factorial(n1) - log_factorial(n2)));
        out(offset + k, col) += first[i] * second[j] * norm;
      }
    }
  }
  return out;
}

Eigen::VectorXd squeezed_vacuum_amplitudes(double r, int cutoff) {
  // <2n|psi> = (tanh r)^n sqrt((2n)!) / (2^n n!) / sqrt(cosh r)
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(cutoff);
  const double t = std::tanh(r);
  for (int n = 0; 2 * n < cutoff; ++n) {
    const double log_mag = 0.5 * log_factorial(2 * n) - n * std::log(2.0) - log_factorial(n);
    psi(2 * n) = std::pow(t, n) * std::exp(log_mag) / std::sqrt(std::cosh(r));
  }
  return psi;
}

Eigen::VectorXcd coherent_amplitudes(std::complex<double> beta, int cutoff) {
  Eigen::VectorXcd psi(cutoff);
  const double pre = std::exp(-0.5 * std::norm(beta));
  for (int n = 0; n < cutoff; ++n) {
    psi(n) = pre * ipow(beta, n) / std::exp(0.5 * log_factorial(n));
  }
  return psi;
}

Eigen::MatrixXcd apply_pure_loss(const Eigen::MatrixXcd& rho, double tau) {
  // K_k |n> = sqrt(C(n, k)) (1 - tau)^{k/2} tau^{(n - k)/2} |n - k>
  const Eigen::Index dim = rho.rows();
  auto amp = [tau](Eigen::Index n, Eigen::Index k) {
    return std::sqrt(binomial(static_cast<int>(n), static_cast<int>(k)) * std::pow(1.0 - tau, k) *
                     std::pow(tau, n - k));
  };
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (Eigen::Index m = 0; m + k < dim; ++m) {
      for (Eigen::Index mp = 0; mp + k < dim; ++mp) {
        out(m, mp) += amp(m + k, k) * rho(m + k, mp + k) * amp(mp + k, k);
      }
    }
  }
  return out;
}

FockState fock_final_state(const SensorConfig& cfg, const PhaseModel& model, double x, int cutoff) {
  cfg.validate();
  if (cfg.modes != 1 || model.modes() != 1) {
    throw std::invalid_argument("M: the Fock-space oracle supports a single phase only");
  }
  if (cutoff < 2) {
    throw std::invalid_argument("cutoff: must be at least 2");
  }
  // Loss acts first: on the squeezed mode through its Kraus operators, on the
  // coherent mode as alpha -> sqrt(tau) alpha.
  const Eigen::VectorXd sq = squeezed_vacuum_amplitudes(cfg.squeezing, cutoff);
  const Eigen::MatrixXcd rho_sq = apply_pure_loss((sq * sq.transpose()).cast<cd>(), cfg.tau);
  const Eigen::VectorXcd coh = coherent_amplitudes(std::sqrt(cfg.tau) * cfg.alpha, cutoff);

  FockState state;
  state.cutoff = cutoff;
  state.basis = truncated_basis(cutoff);
  const Eigen::Index dim = state.dim();
  Eigen::MatrixXcd rho_in(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto [a1, a2] = state.basis[i];
    for (Eigen::Index j = 0; j < dim; ++j) {
      const auto [b1, b2] = state.basis[j];
      rho_in(i, j) = rho_sq(a1, b1) * coh(a2) * std::conj(coh(b2));
    }
  }

  const Eigen::VectorXd theta = model.theta(x);
  Eigen::Matrix2cd u = build_probe_circuit<double>(1).matrix();
  u.row(0) *= std::polar(1.0, theta(0));
  const Eigen::MatrixXcd big_u = fock_passive_unitary(u, cutoff);
  state.rho = big_u * rho_in * big_u.adjoint();
  state.rho = (state.rho + state.rho.adjoint()).eval() / 2.0;
  state.trace_deficit = 1.0 - state.rho.trace().real();
  if (state.trace_deficit >= kMaxTraceDeficit) {
    throw TruncationError(fmt::format("cutoff {} truncates {:.3e} of the state's trace", cutoff,
                                      state.trace_deficit));
  }
  return state;
}

Eigen::MatrixXcd fock_state_derivative(const FockState& state, const PhaseModel& model, double x) {
  const double slope = model.dtheta(x)(0);
  Eigen::VectorXd n1(state.dim());
  for (Eigen::Index i = 0; i < state.dim(); ++i) {
    n1(i) = state.basis[i].first;
  }
  // [n, rho]_{ij} = (n_i - n_j) rho_ij
  Eigen::MatrixXcd out(state.dim(), state.dim());
  for (Eigen::Index j = 0; j < state.dim(); ++j) {
    for (Eigen::Index i = 0; i < state.dim(); ++i) {
      out(i, j) = cd(0.0, slope * (n1(i) - n1(j))) * state.rho(i, j);
    }
  }
  return out;
}

Eigen::MatrixXcd fock_state_derivative_fd(const SensorConfig& cfg, const PhaseModel& model, double x,
                                          int cutoff, double step) {
  const FockState plus = fock_final_state(cfg, model, x + step, cutoff);
  const FockState minus = fock_final_state(cfg, model, x - step, cutoff);
  return (plus.rho - minus.rho) / (2.0 * step);
}

double sld_qfi(const FockState& state, const Eigen::MatrixXcd& drho) {
  if (drho.rows() != state.dim() || drho.cols() != state.dim()) {
    throw std::invalid_argument("sld_qfi: derivative has the wrong dimension");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(state.rho);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("sld_qfi: eigensolver failed");
  }
  const Eigen::VectorXd& p = solver.eigenvalues();
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  const Eigen::MatrixXcd d = v.adjoint() * drho * v;
  double h = 0.0;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const double denom = p(i) + p(j);
      if (denom > 1e-12) {
        h += std::norm(d(i, j)) / denom;
      }
    }
  }
  return 2.0 * h;
}

GaussianState<double> fock_moments(const FockState& state) {
  // a_k |n1, n2> on the truncated basis; moments from Tr(rho O).
  const Eigen::Index dim = state.dim();
  std::array<Eigen::MatrixXcd, 2> a;
  for (int mode = 0; mode < 2; ++mode) {
    a[mode] = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
      auto [n1, n2] = state.basis[col];
      const int n = mode == 0 ? n1 : n2;
      if (n == 0) continue;
      const Eigen::Index row = mode == 0 ? state.index_of(n1 - 1, n2) : state.index_of(n1, n2 - 1);
      a[mode](row, col) = std::sqrt(static_cast<double>(n));
    }
  }
  std::array<Eigen::MatrixXcd, 4> quad;
  const double s = 1.0 / std::sqrt(2.0);
  for (int mode = 0; mode < 2; ++mode) {
    quad[mode] = s * (a[mode] + a[mode].adjoint());
    quad[2 + mode] = cd(0.0, -s) * (a[mode] - a[mode].adjoint());
  }
  const double norm = state.rho.trace().real();
  Eigen::Vector4d mean;
  for (int k = 0; k < 4; ++k) {
    mean(k) = (state.rho * quad[k]).trace().real() / norm;
  }
  Eigen::Matrix4d cov;
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      const Eigen::MatrixXcd sym = (quad[k] * quad[l] + quad[l] * quad[k]) / 2.0;
      cov(k, l) = (state.rho * sym).trace().real() / norm - mean(k) * mean(l);
    }
  }
  cov = (cov + cov.transpose()).eval() / 2.0;
  return GaussianState<double>(mean, cov);
}

namespace {

struct BatchResult {
  double sum_sq_error = 0.0;
  double sum_estimate = 0.0;
};

struct TrialSetup {
  const SensorConfig& cfg;
  const PhaseModel& model;
  double x_true;
  const McOptions& options;
};

double estimate_trial(const TrialSetup& t, double sum_y, double sum_y2) {
  const double n = t.options.shots_per_trial;
  double x = t.cfg.x0;
  for (int it = 0; it < t.options.max_iterations; ++it) {
    const auto m = output_moments(t.cfg, t.model, x);
    const auto dm = output_moment_derivatives(t.cfg, t.model, x);
    // Sufficient statistics: sum (y - mu)^2 = sum_y2 - 2 mu sum_y + n mu^2.
    const double rss = sum_y2 - 2.0 * m.mean * sum_y + n * m.mean * m.mean;
    const double score = dm.mean * (sum_y - n * m.mean) / m.variance +
                         dm.variance / (2.0 * m.variance) * (rss / m.variance - n);
    const double ratio = dm.variance / m.variance;
    const double info = n * (dm.mean * dm.mean / m.variance + 0.5 * ratio * ratio);
    if (!(info > 0.0)) {
      throw EstimationError(fmt::format("Fisher information vanishes at x = {}", x));
    }
    const double step = score / info;
    x += step;
    if (std::abs(step) <= 1e-12 * (1.0 + std::abs(x))) {
      return x;
    }
  }
  throw EstimationError(fmt::format("maximum-likelihood estimate did not converge in {} iterations (last x = {})",
                                    t.options.max_iterations, x));
}

BatchResult run_batch(const TrialSetup& t, std::int64_t first, std::int64_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto m = output_moments(t.cfg, t.model, t.x_true);
  std::normal_distribution<double> dist(m.mean, std::sqrt(m.variance));
  BatchResult out;
  for (std::int64_t trial = first; trial < first + count; ++trial) {
    double sum_y = 0.0;
    double sum_y2 = 0.0;
    for (int s = 0; s < t.options.shots_per_trial; ++s) {
      const double y = dist(rng);
      sum_y += y;
      sum_y2 += y * y;
    }
    const double est = estimate_trial(t, sum_y, sum_y2);
    out.sum_sq_error += (est - t.x_true) * (est - t.x_true);
    out.sum_estimate += est;
  }
  return out;
}

}  // namespace

McEstimate mc_homodyne(const SensorConfig& cfg, const PhaseModel& model, double x_true, const McOptions& options) {
  if (options.n_trials < 1 || options.shots_per_trial < 1 || options.trials_per_batch < 1) {
    throw std::invalid_argument("n_samples: trial and shot counts must be positive");
  }
  cfg.validate();
  {
    const auto dm = output_moment_derivatives(cfg, model, cfg.x0);
    if (dm.mean == 0.0 && dm.variance == 0.0) {
      throw EstimationError("homodyne statistics do not depend on x: maximum likelihood is ill-posed");
    }
  }
  const TrialSetup setup{cfg, model, x_true, options};
  const std::int64_t n_batches = (options.n_trials + options.trials_per_batch - 1) / options.trials_per_batch;
  std::vector<BatchResult> results(static_cast<std::size_t>(n_batches));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_batches));

  int threads = options.threads > 0 ? options.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp<int>(threads, 1, static_cast<int>(std::max<std::int64_t>(1, n_batches)));
  auto worker = [&](int id) {
    for (std::int64_t b = id; b < n_batches; b += threads) {
      const std::int64_t first = b * options.trials_per_batch;
      const std::int64_t count = std::min<std::int64_t>(options.trials_per_batch, options.n_trials - first);
      try {
        results[b] = run_batch(setup, first, count, options.seed + static_cast<std::uint64_t>(b));
      } catch (...) {
        errors[b] = std::current_exception();
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

  BatchResult total;
  for (const auto& r : results) {
    total.sum_sq_error += r.sum_sq_error;
    total.sum_estimate += r.sum_estimate;
  }
  McEstimate out;
  out.n_trials = options.n_trials;
  out.shots_per_trial = options.shots_per_trial;
  out.seed = options.seed;
  out.empirical_mse = total.sum_sq_error / static_cast<double>(options.n_trials);
  out.mean_estimate = total.sum_estimate / static_cast<double>(options.n_trials);
  out.empirical_fisher = 1.0 / (out.empirical_mse * options.shots_per_trial);
  return out;
}

}  // namespace mpsense
