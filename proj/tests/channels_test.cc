// Copyright 2026 The qpc Authors
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

#include "qpc/channels.h"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qpc/error.h"
#include "random_objects.h"

namespace qpc {
namespace {

using std::numbers::pi;
using testing::random_channel;
using testing::random_density;
using testing::random_unitary;

std::array<double, 3> bloch(const CMatrix& rho) {
  return {frob_inner(pauli_x(), rho).real(), frob_inner(pauli_y(), rho).real(),
          frob_inner(pauli_z(), rho).real()};
}

CMatrix from_bloch(double x, double y, double z) {
  return 0.5 * (CMatrix::Identity(2, 2) + x * pauli_x() + y * pauli_y() + z * pauli_z());
}

double max_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

TEST(Gate, CphaseValues) {
  EXPECT_LE(max_diff(cphase(0.0).matrix(), CMatrix::Identity(4, 4)), 1e-15);
  CMatrix expected = CMatrix::Identity(4, 4);
  expected(3, 3) = -1.0;
  EXPECT_LE(max_diff(cphase(pi).matrix(), expected), 1e-15);
}

TEST(Gate, UrDecomposition) {
  CMatrix lhs = ur(0.0, pi / 4).matrix();
  CMatrix rhs = rx(pi / 2).matrix() * rz(pi / 4).matrix() * rx(-pi / 2).matrix();
  // equal up to a global phase
  Complex phase = frob_inner(rhs, lhs) / 2.0;
  EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
  EXPECT_LE(max_diff(lhs, phase * rhs), 1e-12);
}

TEST(Gate, NamedLookup) {
  const double lam[] = {pi};
  EXPECT_LE(max_diff(gate("cphase", lam).matrix(), cphase(pi).matrix()), 0.0);
  EXPECT_LE(max_diff(gate("s").matrix() * gate("sdg").matrix(), CMatrix::Identity(2, 2)), 1e-15);
  try {
    gate("toffoli");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownGate);
  }
}

TEST(OperatorBasis, Convention) {
  // E_q = |q1 q2><q3 q4|
  EXPECT_EQ(operator_basis(0), ket_bra(4, 0, 0));
  EXPECT_EQ(operator_basis(1), ket_bra(4, 2, 0));  // q1 = 1
  EXPECT_EQ(operator_basis(2), ket_bra(4, 1, 0));  // q2 = 1
  EXPECT_EQ(operator_basis(4), ket_bra(4, 0, 2));  // q3 = 1
  EXPECT_EQ(operator_basis(8), ket_bra(4, 0, 1));  // q4 = 1
  for (int q = 0; q < 16; ++q) {
    const CMatrix e = operator_basis(q);
    int ket = 0, bra = 0;
    e.cwiseAbs().maxCoeff(&ket, &bra);
    EXPECT_EQ(basis_index(ket, bra), q);
  }
}

TEST(ProcessFromKraus, Identity) {
  ProcessMatrix chi = process_from_kraus(KrausChannel::identity(4));
  CVector v = CVector::Zero(16);
  for (int i : {0, 5, 10, 15}) v(i) = 1.0;
  EXPECT_LE(max_diff(chi.chi(), v * v.adjoint() / 4.0), 1e-15);
  EXPECT_NEAR(chi.view().trace(), 1.0, 1e-15);
}

TEST(ProcessFromKraus, UnitaryIsPure) {
  ProcessMatrix chi = process_from_unitary(cphase(pi));
  EXPECT_NEAR(frob_inner(chi.chi(), chi.chi()).real(), 1.0, 1e-12);
  EigenDecomposition e = eigh(chi.view());
  EXPECT_NEAR(e.values(0), 1.0, 1e-12);
  EXPECT_NEAR(e.values(1), 0.0, 1e-12);
}

TEST(ProcessFromKraus, FullyDepolarizing) {
  ProcessMatrix chi = process_from_kraus(depolarizing(1.0, 2));
  EXPECT_LE(max_diff(chi.chi(), CMatrix::Identity(16, 16) / 16.0), 1e-15);
}

TEST(ProcessFromKraus, RejectsSingleQubit) {
  EXPECT_THROW(process_from_kraus(KrausChannel::identity(2)), Error);
}

TEST(ApplyProcess, Examples) {
  std::mt19937_64 rng(3);
  DensityMatrix rho(random_density(4, rng));
  ProcessMatrix id = process_from_kraus(KrausChannel::identity(4));
  EXPECT_LE(max_diff(apply_process(id, rho).matrix(), rho.matrix()), 1e-14);

  CVector plus = CVector::Constant(4, 0.5);
  CVector out(4);
  out << 0.5, 0.5, 0.5, -0.5;
  DensityMatrix y = apply_process(process_from_unitary(cphase(pi)), pure_state(plus));
  EXPECT_LE(max_diff(y.matrix(), out * out.adjoint()), 1e-14);

  // Summing 4 * E_q rho E_r^dagger / 16 over the diagonal q = r gives tr(rho) I / 4.
  CMatrix dep = CMatrix::Zero(4, 4);
  for (int q = 0; q < 16; ++q) dep += 4.0 * operator_basis(q) * rho.matrix() * operator_basis(q).adjoint() / 16.0;
  EXPECT_LE(max_diff(dep, CMatrix::Identity(4, 4) / 4.0), 1e-14);
  ProcessMatrix mixed(CMatrix::Identity(16, 16) / 16.0);
  EXPECT_LE(max_diff(apply_process(mixed, rho).matrix(), dep), 1e-14);
}

TEST(ApplyProcess, MatchesKrausAndPreservesTrace) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    KrausChannel ch = random_channel(4, 1 + trial % 4, rng);
    ProcessMatrix chi = process_from_kraus(ch);
    EXPECT_NEAR(chi.view().trace(), 1.0, 1e-12);
    EXPECT_GE(min_eigenvalue(chi.view()), -1e-12);
    CMatrix rho = random_density(4, rng);
    CMatrix out = apply_chi(chi.chi(), rho);
    EXPECT_LE(max_diff(out, ch.apply(rho)), 1e-12);
    EXPECT_NEAR(out.trace().real(), 1.0, 1e-9);
  }
}

TEST(ChiFromBasisOutputs, InvertsAction) {
  std::mt19937_64 rng(5);
  KrausChannel ch = random_channel(4, 3, rng);
  std::array<CMatrix, 16> outs;
  for (int q = 0; q < 16; ++q) outs[q] = ch.apply(operator_basis(q));
  EXPECT_LE(max_diff(chi_from_basis_outputs(outs), process_from_kraus(ch).chi()), 1e-14);
}

TEST(Compose, Examples) {
  std::mt19937_64 rng(6);
  ProcessMatrix id = process_from_kraus(KrausChannel::identity(4));
  ProcessMatrix any = process_from_kraus(random_channel(4, 2, rng));
  EXPECT_LE(max_diff(compose(id, any).chi(), any.chi()), 1e-14);
  ProcessMatrix cz = process_from_unitary(cphase(pi));
  EXPECT_LE(max_diff(compose(cz, cz).chi(), id.chi()), 1e-14);
  ProcessMatrix half = process_from_unitary(cphase(pi / 2));
  EXPECT_LE(max_diff(compose(half, half).chi(), cz.chi()), 1e-9);
}

TEST(Compose, MatchesSequentialActionAndIsAssociative) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    ProcessMatrix a = process_from_kraus(random_channel(4, 2, rng));
    ProcessMatrix b = process_from_kraus(random_channel(4, 3, rng));
    ProcessMatrix c = process_from_kraus(random_channel(4, 1, rng));
    CMatrix rho = random_density(4, rng);
    EXPECT_LE(max_diff(apply_chi(compose(b, a).chi(), rho), apply_chi(b.chi(), apply_chi(a.chi(), rho))), 1e-12);
    EXPECT_LE(max_diff(compose(c, compose(b, a)).chi(), compose(compose(c, b), a).chi()), 1e-9);
  }
}

TEST(ProcessMatrix, RejectsNonPhysical) {
  CMatrix bad = CMatrix::Identity(16, 16) / 16.0;
  bad(0, 0) = -0.1;
  bad(1, 1) += 0.1 + 1.0 / 16.0;
  EXPECT_THROW(ProcessMatrix{bad}, Error);
  EXPECT_THROW(ProcessMatrix(CMatrix::Identity(16, 16) / 8.0), Error);
}

TEST(AmplitudeDamping, BlochAction) {
  const double t1 = 50.0;
  for (double t : {0.0, 7.0, t1}) {
    KrausChannel ch = amplitude_damping(t, t1);
    const double gamma = 1.0 - std::exp(-t / t1);
    auto r = bloch(ch.apply(from_bloch(0.3, -0.4, 0.5)));
    EXPECT_NEAR(r[0], 0.3 * std::sqrt(1 - gamma), 1e-14);
    EXPECT_NEAR(r[1], -0.4 * std::sqrt(1 - gamma), 1e-14);
    EXPECT_NEAR(r[2], 0.5 * (1 - gamma) + gamma, 1e-14);
    EXPECT_TRUE(ch.is_trace_preserving());
  }
  // gamma at t = T1
  KrausChannel at = amplitude_damping(t1, t1);
  EXPECT_NEAR(std::norm(at.operators()[1](0, 1)), 1.0 - std::exp(-1.0), 1e-14);
  EXPECT_NEAR(std::norm(at.operators()[1](0, 1)), 0.6321, 1e-4);
  KrausChannel full = amplitude_damping(100 * t1, t1);
  EXPECT_LE(max_diff(full.apply(from_bloch(0.0, 0.0, -1.0)), ket_bra(2, 0, 0)), 1e-10);
  EXPECT_THROW(amplitude_damping(-1.0, t1), Error);
  EXPECT_THROW(amplitude_damping(1.0, 0.0), Error);
}

TEST(PhaseDamping, BlochAction) {
  const double t2 = 40.0;
  for (double t : {0.0, 3.0, t2 / 2}) {
    KrausChannel ch = phase_damping(t, t2);
    const double lambda = 1.0 - std::exp(-t / (t2 / 2));
    auto r = bloch(ch.apply(from_bloch(0.3, -0.4, 0.5)));
    EXPECT_NEAR(r[0], 0.3 * std::sqrt(1 - lambda), 1e-14);
    EXPECT_NEAR(r[1], -0.4 * std::sqrt(1 - lambda), 1e-14);
    EXPECT_NEAR(r[2], 0.5, 1e-14);
  }
  EXPECT_NEAR(std::norm(phase_damping(t2 / 2, t2).operators()[1](1, 1)), 1.0 - std::exp(-1.0), 1e-14);
  KrausChannel complete({CMatrix(ket_bra(2, 0, 0)), CMatrix(ket_bra(2, 1, 1))});
  EXPECT_LE(max_diff(complete.apply(from_bloch(1, 0, 0)), CMatrix::Identity(2, 2) / 2.0), 1e-15);
  EXPECT_LE(max_diff(phase_damping(1e6, 1.0).apply(from_bloch(1, 0, 0)), CMatrix::Identity(2, 2) / 2.0), 1e-12);
}

TEST(ThermalRelaxation, CoherenceDecaysWithT2) {
  const double t = 0.4, t1 = 3.0, t2 = 2.0;
  auto r = bloch(thermal_relaxation(t, t1, t2).apply(from_bloch(1, 0, 0)));
  EXPECT_NEAR(r[0], std::exp(-t / t2), 1e-14);
  auto rz = bloch(thermal_relaxation(t, t1, t2).apply(from_bloch(0, 0, -1)));
  EXPECT_NEAR(rz[2], 1.0 - 2.0 * std::exp(-t / t1), 1e-14);
  EXPECT_THROW(thermal_relaxation(t, 1.0, 2.5), Error);
}

TEST(Depolarizing, Examples) {
  std::mt19937_64 rng(8);
  CMatrix rho = random_density(4, rng);
  EXPECT_LE(max_diff(depolarizing(0.0, 2).apply(rho), rho), 1e-15);
  EXPECT_LE(max_diff(depolarizing(1.0, 2).apply(rho), CMatrix::Identity(4, 4) / 4.0), 1e-15);
  CMatrix half = CMatrix::Zero(2, 2);
  half.diagonal() << 0.75, 0.25;
  EXPECT_LE(max_diff(depolarizing(0.5, 1).apply(ket_bra(2, 0, 0)), half), 1e-15);
  EXPECT_THROW(depolarizing(1.5, 1), Error);
}

// Oracle: average gate fidelity estimated by sampling Haar-random pure states.
double haar_average_fidelity(const KrausChannel& ch, int samples, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const int d = ch.dim();
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    CVector psi(d);
    for (int i = 0; i < d; ++i) psi(i) = Complex(nd(rng), nd(rng));
    psi.normalize();
    acc += (psi.adjoint() * ch.apply(psi * psi.adjoint()) * psi)(0, 0).real();
  }
  return acc / samples;
}

TEST(CalibratedGateNoise, SantiagoSingleQubit) {
  NoiseModel m = santiago_noise_model();
  const int q[] = {0};
  CalibratedNoise n = calibrate_gate_noise(m, GateKind::kOneQubit, q);
  EXPECT_GT(n.depolarizing_p, 0.0);
  EXPECT_TRUE(n.channel.is_trace_preserving(1e-12));
  std::mt19937_64 rng(9);
  // Monte Carlo variance is tiny because the channel is close to identity.
  const double err = 1.0 - haar_average_fidelity(n.channel, 200000, rng);
  EXPECT_NEAR(err, 0.0002, 1e-6);
  EXPECT_NEAR(1.0 - average_gate_fidelity(n.channel), 0.0002, 1e-12);
}

TEST(CalibratedGateNoise, TwoQubitMatchesCalibration) {
  NoiseModel m = santiago_noise_model();
  const int q[] = {0, 1};
  CalibratedNoise n = calibrate_gate_noise(m, GateKind::kTwoQubit, q);
  EXPECT_EQ(n.channel.dim(), 4);
  std::mt19937_64 rng(10);
  const double err = 1.0 - average_gate_fidelity(n.channel);
  EXPECT_NEAR(1.0 - haar_average_fidelity(n.channel, 100000, rng), err, 2e-4);
  // Relaxation over the 377 ns gate already exceeds the calibrated 0.0056.
  EXPECT_GT(n.relaxation_error, 0.0056);
  EXPECT_EQ(n.depolarizing_p, 0.0);
  EXPECT_NEAR(err, n.relaxation_error, 1e-12);
  m.gate_error_2q = 0.02;
  CalibratedNoise stronger = calibrate_gate_noise(m, GateKind::kTwoQubit, q);
  EXPECT_GT(stronger.depolarizing_p, 0.0);
  EXPECT_NEAR(1.0 - average_gate_fidelity(stronger.channel), 0.02, 1e-12);
  EXPECT_NEAR(1.0 - haar_average_fidelity(stronger.channel, 100000, rng), 0.02, 5e-4);
}

TEST(CalibratedGateNoise, IdealIsIdentity) {
  NoiseModel m = ideal_noise_model();
  const int q[] = {1};
  KrausChannel ch = calibrated_gate_noise(m, GateKind::kOneQubit, q);
  std::mt19937_64 rng(11);
  CMatrix rho = random_density(2, rng);
  EXPECT_LE(max_diff(ch.apply(rho), rho), 1e-15);
}

TEST(CalibratedGateNoise, ClampsWhenRelaxationDominates) {
  NoiseModel m = santiago_noise_model();
  m.gate_error_1q = {1e-6, 1e-6};
  const int q[] = {1};
  CalibratedNoise n = calibrate_gate_noise(m, GateKind::kOneQubit, q);
  EXPECT_EQ(n.depolarizing_p, 0.0);
  const double t = m.gate_time_1q_ns * 1e-3;
  KrausChannel relax = thermal_relaxation(t, m.t1_us[1], m.t2_us[1]);
  CMatrix rho = from_bloch(0.2, 0.5, -0.3);
  EXPECT_LE(max_diff(n.channel.apply(rho), relax.apply(rho)), 1e-15);
}

TEST(Readout, Examples) {
  const double p[] = {0.3, 0.7};
  auto same = readout_apply(ReadoutError{0.0, 0.0}, p);
  EXPECT_EQ(same[0], 0.3);
  EXPECT_EQ(same[1], 0.7);
  const double det[] = {1.0, 0.0};
  auto flipped = readout_apply(ReadoutError{0.0, 0.25}, det);
  EXPECT_NEAR(flipped[0], 0.75, 1e-15);
  EXPECT_NEAR(flipped[1], 0.25, 1e-15);
  // Aspen-M-1 qubit 15: readout error = 1 - fidelity
  const double e = 1.0 - 0.983;
  auto aspen = readout_apply(ReadoutError{e, e}, det);
  EXPECT_NEAR(aspen[1], 0.017, 1e-12);
}

TEST(Readout, TwoQubitOrdering) {
  const double p[] = {1.0, 0.0, 0.0, 0.0};
  const ReadoutError errs[] = {{0.0, 0.1}, {0.0, 0.2}};
  auto out = readout_apply(std::span<const ReadoutError>(errs), p);
  EXPECT_NEAR(out[0], 0.9 * 0.8, 1e-15);
  EXPECT_NEAR(out[1], 0.9 * 0.2, 1e-15);  // Bob flipped
  EXPECT_NEAR(out[2], 0.1 * 0.8, 1e-15);  // Alice flipped
  EXPECT_NEAR(out[3], 0.1 * 0.2, 1e-15);
}

TEST(NoiseModel, JsonRoundTrip) {
  NoiseModel m = santiago_noise_model();
  m.gate_time_2q_ns = 0.1 + 0.2;  // a value without a short decimal form
  NoiseModel back = noise_model_from_json(noise_model_to_json(m));
  EXPECT_EQ(back, m);
  NoiseModel ideal = ideal_noise_model();
  EXPECT_EQ(noise_model_from_json(noise_model_to_json(ideal)), ideal);
}

TEST(NoiseModel, Validation) {
  NoiseModel m = santiago_noise_model();
  m.t2_us[0] = 3 * m.t1_us[0];
  EXPECT_THROW(m.validate(), Error);
  m = santiago_noise_model();
  m.gate_error_1q[1] = 1.2;
  EXPECT_THROW(m.validate(), Error);
  EXPECT_THROW(noise_model_from_json("{\"t1_us\": [1]}"), Error);
}

}  // namespace
}  // namespace qpc
