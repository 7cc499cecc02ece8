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

#include "qpc/simulator.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qpc/error.h"

namespace qpc {
namespace {

using std::numbers::pi;

Circuit single(TestKind test, double lambda, InputPair in, Setting s) {
  for (auto& c : build_circuits(test, lambda)) {
    if (c.input == in && c.setting == s) return c;
  }
  throw std::runtime_error("circuit not found");
}

constexpr InputToken kZp{Axis::kZ, +1}, kXp{Axis::kX, +1}, kYp{Axis::kY, +1}, kZm{Axis::kZ, -1};

TEST(BuildCircuits, Steering) {
  auto cs = build_circuits(TestKind::kSteering, pi);
  ASSERT_EQ(cs.size(), 144u);
  for (const auto& c : cs) EXPECT_FALSE(c.bell_rotation.has_value());
  EXPECT_EQ(cs[0].input, (InputPair{kZp, kZp}));
  EXPECT_EQ(cs[1].setting, (Setting{Axis::kX, Axis::kY}));
  EXPECT_EQ(cs[9].input, (InputPair{kZp, kZm}));
}

TEST(BuildCircuits, BellCarriesRotation) {
  auto cs = build_circuits(TestKind::kBell, pi);
  ASSERT_EQ(cs.size(), 144u);
  for (const auto& c : cs) {
    ASSERT_TRUE(c.bell_rotation.has_value());
    EXPECT_EQ(c.bell_rotation->phi, 0.0);
    EXPECT_DOUBLE_EQ(c.bell_rotation->theta, pi / 4);
  }
}

TEST(BuildCircuits, SixteenInputs) {
  auto cs = build_circuits(TestKind::kSteering, 0.3);
  std::vector<InputPair> seen;
  for (const auto& c : cs) {
    if (std::find(seen.begin(), seen.end(), c.input) == seen.end()) seen.push_back(c.input);
    for (const auto& t : c.input) {
      EXPECT_TRUE(t == kZp || t == kZm || t == kXp || t == kYp);
    }
  }
  EXPECT_EQ(seen.size(), 16u);
}

TEST(InputKet, PauliEigenstates) {
  for (Axis a : {Axis::kX, Axis::kY, Axis::kZ}) {
    for (int s : {+1, -1}) {
      CVector psi = input_ket({a, s});
      CMatrix p = a == Axis::kX ? pauli_x() : a == Axis::kY ? pauli_y() : pauli_z();
      EXPECT_LE((p * psi - double(s) * psi).norm(), 1e-14);
    }
  }
  EXPECT_EQ(to_string(parse_input_token("Y-")), "Y-");
  EXPECT_EQ(parse_input_token("X−"), (InputToken{Axis::kX, -1}));
}

TEST(ExactProbabilities, Examples) {
  Distribution d = exact_probabilities(single(TestKind::kSteering, 0.0, {kZp, kZp}, {Axis::kZ, Axis::kZ}));
  EXPECT_NEAR(d[0], 1.0, 1e-15);
  // CPHASE(pi)|++> = (|0>|+> + |1>|->) / sqrt 2, stabilized by X (x) Z.
  const double r = 1 / std::sqrt(2.0);
  CVector psi(4);
  psi << 0.5, 0.5, 0.5, -0.5;
  CVector zero(2), one(2), plus(2), minus(2);
  zero << 1, 0;
  one << 0, 1;
  plus << r, r;
  minus << r, -r;
  const CVector xx[4] = {kron(plus, plus), kron(plus, minus), kron(minus, plus), kron(minus, minus)};
  const CVector xz[4] = {kron(plus, zero), kron(plus, one), kron(minus, zero), kron(minus, one)};
  d = exact_probabilities(single(TestKind::kSteering, pi, {kXp, kXp}, {Axis::kX, Axis::kX}));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(d[i], std::norm(xx[i].dot(psi)), 1e-14);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(d[i], 0.25, 1e-14);
  d = exact_probabilities(single(TestKind::kSteering, pi, {kXp, kXp}, {Axis::kX, Axis::kZ}));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(d[i], std::norm(xz[i].dot(psi)), 1e-14);
  EXPECT_NEAR(d[0], 0.5, 1e-14);
  EXPECT_NEAR(d[3], 0.5, 1e-14);
}

TEST(ExactProbabilities, FullTwoQubitDepolarizingIsUniform) {
  NoiseModel m = ideal_noise_model();
  m.gate_error_2q = 0.75;  // average gate error of the completely depolarizing channel on d = 4
  for (const auto& c : build_circuits(TestKind::kBell, 1.1)) {
    Distribution d = exact_probabilities(c, m);
    for (double v : d) EXPECT_NEAR(v, 0.25, 1e-12);
  }
}

TEST(ExactProbabilities, IdealNoiseModelMatchesNoiseless) {
  for (const auto& c : build_circuits(TestKind::kBell, 0.7)) {
    Distribution a = exact_probabilities(c), b = exact_probabilities(c, ideal_noise_model());
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(a[i], b[i], 1e-10);
  }
}

TEST(ExactProbabilities, NoisyDistributionsNormalized) {
  for (const auto& c : build_circuits(TestKind::kBell, pi)) {
    Distribution d = exact_probabilities(c, santiago_noise_model());
    double s = 0;
    for (double v : d) {
      EXPECT_GE(v, 0.0);
      s += v;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(ExactProbabilities, BellSettingMeasuresRotatedObservables) {
  // Oracle: Born rule with projectors onto eigenvectors of U_R V U_R^dagger.
  const CMatrix u = ur(0.0, pi / 4).matrix();
  const CMatrix paulis[3] = {pauli_x(), pauli_y(), pauli_z()};
  for (const auto& c : build_circuits(TestKind::kBell, 0.9)) {
    CVector in = kron(input_ket(c.input[0]), input_ket(c.input[1]));
    CVector out = cphase(0.9).matrix() * in;
    CMatrix rho = out * out.adjoint();
    const CMatrix va = paulis[static_cast<int>(c.setting[0])];
    const CMatrix vb = u * paulis[static_cast<int>(c.setting[1])] * u.adjoint();
    Distribution d = exact_probabilities(c);
    for (int i = 0; i < 4; ++i) {
      const double sa = (i & 2) ? -1 : 1, sb = (i & 1) ? -1 : 1;
      CMatrix proj = kron((CMatrix::Identity(2, 2) + sa * va) / 2.0, (CMatrix::Identity(2, 2) + sb * vb) / 2.0);
      EXPECT_NEAR(d[i], (proj * rho).trace().real(), 1e-12);
    }
  }
}

TEST(SampleCounts, DeterministicOutcome) {
  Circuit c = single(TestKind::kSteering, 0.0, {kZp, kZp}, {Axis::kZ, Axis::kZ});
  CountsRecord r = sample_counts(c, std::nullopt, 8192, 1);
  EXPECT_EQ(r.counts, (std::array<std::uint64_t, 4>{8192, 0, 0, 0}));
}

TEST(SampleCounts, BinomialConcentration) {
  Circuit c = single(TestKind::kSteering, pi, {kXp, kXp}, {Axis::kX, Axis::kZ});
  CountsRecord r = sample_counts(c, std::nullopt, 81920, 42);
  const double sigma = std::sqrt(81920 * 0.25);
  EXPECT_NEAR(double(r.counts[0]), 40960.0, 5 * sigma);
  EXPECT_NEAR(double(r.counts[3]), 40960.0, 5 * sigma);
  EXPECT_EQ(r.counts[1] + r.counts[2], 0u);
  EXPECT_EQ(r.counts[0] + r.counts[3], 81920u);
}

TEST(SampleCounts, SameSeedSameRecord) {
  Circuit c = single(TestKind::kBell, 1.3, {kYp, kXp}, {Axis::kY, Axis::kZ});
  EXPECT_EQ(sample_counts(c, santiago_noise_model(), 1024, 99), sample_counts(c, santiago_noise_model(), 1024, 99));
  EXPECT_NE(sample_counts(c, std::nullopt, 1024, 99), sample_counts(c, std::nullopt, 1024, 100));
}

TEST(Dataset, SeedsDifferPerCircuitAndJsonRoundTrips) {
  TomographyDataset d = simulate_dataset(TestKind::kBell, pi, std::nullopt, 1024, 5);
  ASSERT_EQ(d.records.size(), 144u);
  ASSERT_TRUE(d.ur.has_value());
  EXPECT_NO_THROW(validate_dataset(d));
  EXPECT_EQ(dataset_from_json(dataset_to_json(d)), d);
  EXPECT_NE(derive_seed(5, 0), derive_seed(5, 1));
}

TEST(Dataset, ValidationErrors) {
  TomographyDataset d = simulate_dataset(TestKind::kSteering, 0.5, std::nullopt, 100, 5);
  TomographyDataset missing = d;
  missing.records.erase(missing.records.begin() + 10);
  try {
    validate_dataset(missing);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaError);
    EXPECT_NE(std::string(e.what()).find("Z+ Z- / XY"), std::string::npos) << e.what();
  }
  TomographyDataset shortfall = d;
  shortfall.records[3].counts[0] -= 1;
  try {
    validate_dataset(shortfall);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShotMismatch);
  }
  EXPECT_THROW(dataset_from_json("{\"test\": \"steering\"}"), Error);
}

}  // namespace
}  // namespace qpc
