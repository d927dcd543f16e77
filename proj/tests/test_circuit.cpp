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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_util.hpp"

namespace mpsense {
namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXd;
using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// Built independently of the library: DFT, block probe circuit, phases.
MatrixXcd reference_probe_circuit(int m) {
  MatrixXcd f(m, m);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      f(j, k) = std::exp(cd(0, 2 * kPi * j * k / m)) / std::sqrt(double(m));
    }
  }
  MatrixXcd u(2 * m, 2 * m);
  u << f, f, f, -f;
  return u / std::sqrt(2.0);
}

MatrixXcd reference_system(const SensorConfig& cfg, const PhaseModel& model, double x) {
  const int m = cfg.modes;
  const MatrixXcd ui = reference_probe_circuit(m);
  const VectorXd th = model.theta(x);
  const VectorXd th0 = model.theta(cfg.x0);
  MatrixXcd mod = MatrixXcd::Identity(2 * m, 2 * m);
  MatrixXcd ref = MatrixXcd::Identity(2 * m, 2 * m);
  for (int k = 0; k < m; ++k) {
    mod(k, k) = std::exp(cd(0, th(k)));
    ref(k, k) = std::exp(cd(0, -th0(k)));
  }
  MatrixXcd h = MatrixXcd::Identity(2 * m, 2 * m);
  h(0, 0) = std::exp(cd(0, cfg.phi_h));
  return h * ui.adjoint() * ref * mod * ui;
}

PhaseModel random_model(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  VectorXd a(m), b(m), c(m);
  for (int k = 0; k < m; ++k) {
    a(k) = u(rng);
    b(k) = u(rng);
    c(k) = u(rng);
  }
  return PhaseModel(m, [a, b, c](double x) -> VectorXd {
    return (a.array() + b.array() * x + 0.3 * (c.array() * x).sin()).matrix();
  });
}

SensorConfig random_sensor(std::mt19937_64& rng, int max_modes = 8) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SensorConfig c;
  c.modes = 1 + static_cast<int>(u(rng) * max_modes) % max_modes;
  c.squeezing = 1.5 * u(rng);
  c.alpha = 3.0 * u(rng);
  c.tau = u(rng);
  c.phi_h = 2 * kPi * u(rng);
  c.x0 = u(rng) - 0.5;
  return c;
}

TEST(ProbeCircuit, SinglePhaseIsBalancedGate) {
  const MatrixXcd u = build_probe_circuit<double>(1).matrix();
  MatrixXcd expected(2, 2);
  expected << 1, 1, 1, -1;
  expected /= std::sqrt(2.0);
  EXPECT_LT((u - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ProbeCircuit, TwoPhasesHaveBalancedFirstColumn) {
  const MatrixXcd u = build_probe_circuit<double>(2).matrix();
  for (int m = 0; m < 2; ++m) {
    EXPECT_NEAR(std::abs(u(m, 0)), 0.5, 1e-15);
  }
}

TEST(ProbeCircuit, ColumnsZeroAndMHaveUniformMagnitude) {
  for (int m : {1, 3, 5, 8}) {
    const MatrixXcd u = build_probe_circuit<double>(m).matrix();
    for (int row = 0; row < m; ++row) {
      EXPECT_NEAR(std::abs(u(row, 0)), 1.0 / std::sqrt(2.0 * m), 1e-15);
      EXPECT_NEAR(std::abs(u(row, m)), 1.0 / std::sqrt(2.0 * m), 1e-15);
    }
  }
}

TEST(ProbeCircuit, Unitary) {
  for (int m = 1; m <= 16; ++m) {
    const MatrixXcd u = build_probe_circuit<double>(m).matrix();
    EXPECT_LT((u.adjoint() * u - MatrixXcd::Identity(2 * m, 2 * m)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ProbeCircuit, MatchesReferenceConstruction) {
  for (int m = 1; m <= 8; ++m) {
    EXPECT_LT((build_probe_circuit<double>(m).matrix() - reference_probe_circuit(m)).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(ProbeCircuit, RejectsZeroPhases) { EXPECT_THROW(build_probe_circuit<double>(0), std::invalid_argument); }

TEST(Modulation, ZeroPhasesIsIdentity) {
  EXPECT_EQ(build_modulation(VectorXd::Zero(3)).matrix(), MatrixXcd::Identity(6, 6));
}

TEST(Modulation, PiPhase) {
  const MatrixXcd u = build_modulation(VectorXd::Constant(1, kPi)).matrix();
  EXPECT_LT(std::abs(u(0, 0) - cd(-1, 0)), 1e-15);
  EXPECT_EQ(u(1, 1), cd(1, 0));
  EXPECT_EQ(u(0, 1), cd(0, 0));
}

TEST(Modulation, TwoPhases) {
  VectorXd th(2);
  th << kPi / 2, kPi;
  const MatrixXcd u = build_modulation(th).matrix();
  MatrixXcd expected = MatrixXcd::Zero(4, 4);
  expected.diagonal() << cd(0, 1), cd(-1, 0), cd(1, 0), cd(1, 0);
  EXPECT_LT((u - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PhaseModel, NumericDerivativeConsistentWithAnalytic) {
  std::mt19937_64 rng(11);
  const VectorXd slopes = VectorXd::LinSpaced(5, 0.5, 3.0);
  const auto model = PhaseModel(5, [slopes](double x) -> VectorXd { return (slopes.array() * x).sin(); },
                                [slopes](double x) -> VectorXd {
                                  return (slopes.array() * (slopes.array() * x).cos()).matrix();
                                });
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    const double x = u(rng);
    const VectorXd a = model.dtheta(x);
    const VectorXd n = model.dtheta_numeric(x);
    for (int k = 0; k < 5; ++k) {
      EXPECT_LE(std::abs(a(k) - n(k)), std::max(1e-6, 1e-4 * std::abs(a(k))));
    }
  }
}

TEST(PhaseModel, FiniteDifferenceStep) {
  EXPECT_EQ(PhaseModel::fd_step(0.0), 1e-6);
  EXPECT_EQ(PhaseModel::fd_step(1e3), 1e-3);
}

TEST(PhaseModel, WithoutAnalyticDerivativeFallsBackToDifference) {
  const PhaseModel m(1, [](double x) { return VectorXd::Constant(1, x * x); });
  EXPECT_FALSE(m.has_analytic_derivative());
  EXPECT_NEAR(m.dtheta(1.5)(0), 3.0, 1e-8);
}

TEST(ReceiverElements, AtReferencePoint) {
  SensorConfig cfg;
  cfg.modes = 3;
  cfg.phi_h = 0.7;
  cfg.x0 = 0.2;
  const auto e = receiver_elements(cfg, PhaseModel::equal_phases(3, 2.0), cfg.x0);
  EXPECT_LT(std::abs(e.u11 - std::polar(1.0, 0.7)), 1e-15);
  EXPECT_LT(std::abs(e.u1m1), 1e-15);
}

TEST(ReceiverElements, PiShiftSwapsPorts) {
  SensorConfig cfg;
  const auto e = receiver_elements(cfg, PhaseModel::equal_phases(1, kPi), 1.0);
  EXPECT_LT(std::abs(e.u11), 1e-15);
  EXPECT_LT(std::abs(e.u1m1 - cd(-1, 0)), 1e-15);
}

TEST(ReceiverElements, MatchDenseProduct) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const SensorConfig cfg = random_sensor(rng);
    const PhaseModel model = random_model(cfg.modes, rng);
    const double x = u(rng);
    const auto e = receiver_elements(cfg, model, x);
    const MatrixXcd dense = reference_system(cfg, model, x);
    EXPECT_LT(std::abs(e.u11 - dense(0, 0)), 1e-12);
    EXPECT_LT(std::abs(e.u1m1 - dense(0, cfg.modes)), 1e-12);
    const MatrixXcd lib = system_unitary(cfg, model, x).matrix();
    EXPECT_LT((lib - dense).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ReceiverElements, DerivativesMatchFiniteDifference) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const SensorConfig cfg = random_sensor(rng);
    const PhaseModel model = random_model(cfg.modes, rng);
    const double x = cfg.x0 + 0.3;
    const double h = 1e-6;
    const auto p = receiver_elements(cfg, model, x + h);
    const auto m = receiver_elements(cfg, model, x - h);
    const auto d = receiver_element_derivatives(cfg, model, x);
    EXPECT_LT(std::abs(d.u11 - (p.u11 - m.u11) / (2 * h)), 1e-7);
    EXPECT_LT(std::abs(d.u1m1 - (p.u1m1 - m.u1m1) / (2 * h)), 1e-7);
  }
}

TEST(ReceiverElements, InsensitiveToGateColumnPhases) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const SensorConfig cfg = random_sensor(rng);
    const int m = cfg.modes;
    const PhaseModel model = random_model(m, rng);
    // A balanced gate whose first column has entries of modulus 1/sqrt(M)
    // with arbitrary phases: diag(phases) * DFT * diag(column phases).
    MatrixXcd row = MatrixXcd::Identity(m, m);
    MatrixXcd col = MatrixXcd::Identity(m, m);
    for (int k = 0; k < m; ++k) {
      row(k, k) = std::polar(1.0, u(rng));
      col(k, k) = std::polar(1.0, u(rng));
    }
    const MatrixXcd gate = row * dft_gate<double>(m).matrix() * col;
    const auto circuit = probe_circuit_from_gate(PassiveUnitary<double>(gate));
    const double x = u(rng);
    const MatrixXcd a = system_unitary(cfg, model, x, circuit).matrix();
    const auto e = receiver_elements(cfg, model, x);
    EXPECT_LT(std::abs(a(0, 0) - e.u11), 1e-12);
    EXPECT_LT(std::abs(a(0, m) - e.u1m1), 1e-12);
  }
}

TEST(OutputMoments, ReferencePointMomentumHomodyne) {
  SensorConfig cfg;
  cfg.modes = 3;
  cfg.squeezing = 0.8;
  cfg.alpha = 1.3;
  cfg.tau = 0.6;
  cfg.phi_h = kPi / 2;
  const auto m = output_moments(cfg, PhaseModel::equal_phases(3), 0.0);
  EXPECT_NEAR(m.mean, 0.0, 1e-15);
  EXPECT_NEAR(m.variance, 0.5 * (1 + 0.6 * (std::exp(-1.6) - 1)), 1e-14);
}

TEST(OutputMoments, ReferencePointPositionHomodyne) {
  SensorConfig cfg;
  cfg.modes = 2;
  cfg.squeezing = 0.8;
  cfg.alpha = 1.3;
  cfg.tau = 0.6;
  const auto m = output_moments(cfg, PhaseModel::equal_phases(2), 0.0);
  EXPECT_NEAR(m.mean, 0.0, 1e-15);
  EXPECT_NEAR(m.variance, 0.5 * (1 + 0.6 * (std::exp(1.6) - 1)), 1e-14);
}

TEST(OutputMoments, CoherentProbeIsShotNoiseLimited) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    SensorConfig cfg = random_sensor(rng);
    cfg.squeezing = 0.0;
    cfg.tau = 1.0;
    const auto m = output_moments(cfg, random_model(cfg.modes, rng), 0.37);
    EXPECT_NEAR(m.variance, 0.5, 1e-15);
  }
}

TEST(OutputMoments, MeanFollowsDenseHomodyne) {
  // mean = sqrt(tau) Re{u1m1} sqrt(2) alpha, as produced by full propagation.
  SensorConfig cfg;
  cfg.modes = 1;
  cfg.alpha = 2.0;
  cfg.tau = 0.49;
  const auto model = PhaseModel::equal_phases(1, kPi);
  const auto m = output_moments(cfg, model, 1.0);
  EXPECT_NEAR(m.mean, -0.7 * std::sqrt(2.0) * 2.0, 1e-14);
  EXPECT_NEAR(output_moments_dense(cfg, model, 1.0).mean, m.mean, 1e-12);
}

TEST(OutputMoments, ClosedFormMatchesDensePropagation) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const SensorConfig cfg = random_sensor(rng);
    const PhaseModel model = random_model(cfg.modes, rng);
    const double x = u(rng);
    const auto a = output_moments(cfg, model, x);
    const auto b = output_moments_dense(cfg, model, x);
    EXPECT_NEAR(a.mean, b.mean, 1e-10);
    EXPECT_NEAR(a.variance, b.variance, 1e-10);
  }
}

TEST(OutputMoments, LossPlacementDoesNotMatter) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    SensorConfig cfg = random_sensor(rng);
    cfg.alpha = cd(cfg.alpha.real(), u(rng));
    const PhaseModel model = random_model(cfg.modes, rng);
    const double x = u(rng);
    const auto a = output_state(cfg, model, x, LossPlacement::kAtInput);
    const auto b = output_state(cfg, model, x, LossPlacement::kBeforeHomodyne);
    EXPECT_LT((a.mean() - b.mean()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((a.cov() - b.cov()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(OutputMoments, DerivativesMatchFiniteDifference) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    const SensorConfig cfg = random_sensor(rng);
    const PhaseModel model = random_model(cfg.modes, rng);
    const double x = cfg.x0 - 0.2;
    const double h = 1e-6;
    const auto p = output_moments(cfg, model, x + h);
    const auto m = output_moments(cfg, model, x - h);
    const auto d = output_moment_derivatives(cfg, model, x);
    EXPECT_NEAR(d.mean, (p.mean - m.mean) / (2 * h), 1e-6);
    EXPECT_NEAR(d.variance, (p.variance - m.variance) / (2 * h), 1e-6);
  }
}

TEST(OutputMoments, ComplexAlphaNeedsDensePath) {
  SensorConfig cfg;
  cfg.alpha = cd(1.0, 0.5);
  const auto model = PhaseModel::equal_phases(1);
  EXPECT_THROW(output_moments(cfg, model, 0.1), std::invalid_argument);
  EXPECT_NO_THROW(output_moments_dense(cfg, model, 0.1));
}

TEST(SensorConfig, ValidateNamesField) {
  SensorConfig cfg;
  cfg.tau = 1.5;
  try {
    cfg.validate();
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_EQ(std::string(e.what()).rfind("tau", 0), 0u);
  }
  cfg.tau = 1.0;
  cfg.modes = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(SensorConfig, PhotonNumbers) {
  SensorConfig cfg;
  cfg.squeezing = std::asinh(1.0);
  cfg.alpha = cd(1.0, 1.0);
  EXPECT_NEAR(cfg.squeezed_photons(), 1.0, 1e-15);
  EXPECT_NEAR(cfg.total_photons(), 3.0, 1e-15);
}

}  // namespace
}  // namespace mpsense
