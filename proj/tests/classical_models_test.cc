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

#include "qpc/classical_models.h"

#include <functional>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qpc/error.h"

namespace qpc {
namespace {

using std::numbers::pi;

CMatrix random_psd2(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix a(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = Complex(nd(rng), nd(rng));
  return scale * a * a.adjoint();
}

double max_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Brute-force state reconstruction from the full set of joint and marginal
// probabilities: rho = 1/4 [I + sum_kl <V_k V_l> V_k (x) V_l + sum_k <V_k> V_k (x) I + ...].
CMatrix reconstruct_from_statistics(const std::function<double(int, int, int, int)>& joint,
                                    const MeasurementTriad& ta, const MeasurementTriad& tb) {
  const CMatrix id = CMatrix::Identity(2, 2);
  CMatrix rho = kron(id, id);
  for (int k = 0; k < 3; ++k) {
    double ea = 0.0, eb = 0.0;
    for (int l = 0; l < 3; ++l) {
      double corr = 0.0;
      for (int v : {1, -1})
        for (int w : {1, -1}) corr += v * w * joint(k, l, v, w);
      rho += corr * kron(ta.observable(k), tb.observable(l));
    }
    for (int v : {1, -1})
      for (int w : {1, -1}) {
        ea += v * joint(k, 0, v, w);
        eb += v * joint(0, k, w, v);
      }
    rho += ea * kron(ta.observable(k), id) + eb * kron(id, tb.observable(k));
  }
  return rho / 4.0;
}

TEST(Triad, PauliAndRotatedAreValid) {
  MeasurementTriad p = MeasurementTriad::pauli();
  EXPECT_LE(max_diff(p.observable(1), pauli_y()), 0.0);
  MeasurementTriad r = MeasurementTriad::rotated(ur(0.0, pi / 4));
  for (int k = 0; k < 3; ++k) {
    EXPECT_LE(max_diff(r.observable(k) * r.observable(k), CMatrix::Identity(2, 2)), 1e-12);
    EXPECT_LE(max_diff(r.projector(k, 1) + r.projector(k, -1), CMatrix::Identity(2, 2)), 1e-12);
  }
}

TEST(Triad, RejectsInvalid) {
  try {
    MeasurementTriad({pauli_x(), pauli_x(), pauli_z()});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTriadInvalid);
  }
  EXPECT_THROW(MeasurementTriad({pauli_x(), pauli_y(), CMatrix(2.0 * pauli_z())}), Error);
}

TEST(Strategies, Enumeration) {
  auto one = enumerate_strategies(1);
  auto two = enumerate_strategies(2);
  EXPECT_EQ(one.size(), 8u);
  EXPECT_EQ(two.size(), 64u);
  EXPECT_EQ(one[0][0].outcomes, (std::array<int, 3>{1, 1, 1}));
  EXPECT_EQ(one[1][0].outcomes, (std::array<int, 3>{1, 1, -1}));
  EXPECT_EQ(one[7][0].outcomes, (std::array<int, 3>{-1, -1, -1}));
  EXPECT_EQ(two[9][0], one[1][0]);
  EXPECT_EQ(two[9][1], one[1][0]);
  for (size_t i = 0; i < one.size(); ++i)
    for (size_t j = 0; j < i; ++j) EXPECT_NE(one[i][0], one[j][0]);
}

TEST(Strategies, Responses) {
  EXPECT_EQ(deterministic_response({{1, -1, 1}}, 2), -1);
  int plus = 0;
  for (const auto& s : single_party_strategies()) plus += deterministic_response(s, 1) == 1;
  EXPECT_EQ(plus, 4);
  for (const auto& s : single_party_strategies()) {
    for (int k = 1; k <= 3; ++k) {
      // P(v_k = +1 | strategy) is 0 or 1
      const double p = (1 + deterministic_response(s, k)) / 2.0;
      EXPECT_TRUE(p == 0.0 || p == 1.0);
    }
  }
  try {
    deterministic_response({{1, 1, 1}}, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIndexOutOfRange);
  }
  EXPECT_THROW(deterministic_response({{1, 1, 1}}, 0), Error);
}

TEST(ProductInputs, OrderAndStates) {
  const auto& in = product_inputs();
  EXPECT_EQ(to_string(in[0][0]) + to_string(in[0][1]), "X+X+");
  EXPECT_EQ(to_string(in[7][0]) + to_string(in[7][1]), "X-X-");
  EXPECT_EQ(to_string(in[35][0]) + to_string(in[35][1]), "Z-Z-");
  for (int i = 0; i < 36; ++i) {
    EXPECT_EQ(product_input_index(in[i]), i);
    CMatrix rho = product_input_state(in[i]);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
    EXPECT_NEAR((rho * rho).trace().real(), 1.0, 1e-14);
  }
}

TEST(LhsMap, SingleStrategy) {
  LhsOutputMap map(MeasurementTriad::pauli(), MeasurementTriad::pauli());
  std::array<CMatrix, 8> sigma;
  for (auto& s : sigma) s = CMatrix::Zero(2, 2);
  sigma[0] = ket_bra(2, 0, 0);
  CMatrix expected = kron(0.5 * (CMatrix::Identity(2, 2) + pauli_x() + pauli_y() + pauli_z()), ket_bra(2, 0, 0));
  CMatrix out = map.output(sigma);
  EXPECT_LE(max_diff(out, expected), 1e-15);
  EXPECT_LT(min_eigenvalue(HermitianView(out)), -0.1);  // not a state
}

TEST(LhsMap, UniformStrategiesCancel) {
  std::mt19937_64 rng(1);
  LhsOutputMap map(MeasurementTriad::pauli(), MeasurementTriad::pauli());
  CMatrix rb = random_psd2(rng);
  rb /= rb.trace();
  std::array<CMatrix, 8> sigma;
  for (auto& s : sigma) s = rb / 8.0;
  EXPECT_LE(max_diff(map.output(sigma), kron(CMatrix::Identity(2, 2) / 2.0, rb)), 1e-15);
}

TEST(LhsMap, MatchesStatisticsReconstructionAndTrace) {
  std::mt19937_64 rng(2);
  const MeasurementTriad ta = MeasurementTriad::pauli();
  const MeasurementTriad tb = MeasurementTriad::rotated(ur(0.3, 1.1));
  LhsOutputMap map(ta, tb);
  for (int trial = 0; trial < 5; ++trial) {
    std::array<CMatrix, 8> sigma;
    double total = 0.0;
    for (auto& s : sigma) {
      s = random_psd2(rng);
      total += s.trace().real();
    }
    for (auto& s : sigma) s /= total;
    // P(v_k, w_l) = sum_mu [s_mu,k == v] tr(P^B_{l,w} sigma_mu)
    auto joint = [&](int k, int l, int v, int w) {
      double p = 0.0;
      for (int mu = 0; mu < 8; ++mu) {
        if (single_party_strategies()[mu].outcomes[k] == v) p += (tb.projector(l, w) * sigma[mu]).trace().real();
      }
      return p;
    };
    EXPECT_LE(max_diff(map.output(sigma), reconstruct_from_statistics(joint, ta, tb)), 1e-13);
    EXPECT_NEAR(map.output(sigma).trace().real(), 1.0, 1e-13);
  }
}

TEST(LhsMap, LinearAndReducedFunctional) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd(0.0, 1.0);
  LhsOutputMap map(MeasurementTriad::pauli(), MeasurementTriad::pauli());
  LhsVariables x, y, z;
  const double a = 0.7, b = -1.3;
  for (int in = 0; in < 36; ++in) {
    std::array<CMatrix, 8> sx, sy, sz;
    for (int mu = 0; mu < 8; ++mu) {
      sx[mu] = random_psd2(rng) - random_psd2(rng);
      sy[mu] = random_psd2(rng);
      sz[mu] = a * sx[mu] + b * sy[mu];
    }
    x.sigma.push_back(sx);
    y.sigma.push_back(sy);
    z.sigma.push_back(sz);
  }
  auto ox = map.apply(x), oy = map.apply(y), oz = map.apply(z);
  for (int in = 0; in < 36; ++in) EXPECT_LE(max_diff(oz[in], a * ox[in] + b * oy[in]), 1e-12);
  CMatrix k(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) k(i, j) = Complex(nd(rng), nd(rng));
  for (int mu = 0; mu < 8; ++mu) {
    CMatrix s = random_psd2(rng);
    const Complex lhs = (k * kron(map.alice_operators()[mu], s)).trace();
    const Complex rhs = (map.reduced_functional(k, mu) * s).trace();
    EXPECT_LE(std::abs(lhs - rhs), 1e-12);
  }
}

TEST(LhvMap, Examples) {
  const MeasurementTriad tb = MeasurementTriad::rotated(ur(0.0, pi / 4));
  LhvOutputMap map(MeasurementTriad::pauli(), tb);
  std::array<double, 64> w{};
  w[0] = 1.0;
  CMatrix a = MeasurementTriad::pauli().reconstruct({1, 1, 1});
  CMatrix b = tb.reconstruct({1, 1, 1});
  EXPECT_LE(max_diff(map.output(w), kron(a, b)), 1e-15);
  w.fill(1.0 / 64);
  EXPECT_LE(max_diff(map.output(w), CMatrix::Identity(4, 4) / 4.0), 1e-15);
}

TEST(LhvMap, MarginalIsLhsForm) {
  // Summing over Bob's strategies gives sum_zeta A_zeta (x) sigma_zeta with
  // sigma_zeta = sum_eta P(zeta, eta) B_eta, i.e. an LHS-form output.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const MeasurementTriad ta = MeasurementTriad::pauli(), tb = MeasurementTriad::rotated(ur(0.0, pi / 4));
  LhvOutputMap lhv(ta, tb);
  LhsOutputMap lhs(ta, tb);
  std::array<double, 64> w{};
  for (auto& x : w) x = u(rng);
  std::array<CMatrix, 8> sigma;
  for (int z = 0; z < 8; ++z) {
    sigma[z] = CMatrix::Zero(2, 2);
    for (int e = 0; e < 8; ++e) sigma[z] += w[8 * z + e] * strategy_operator(single_party_strategies()[e], tb);
  }
  EXPECT_LE(max_diff(lhv.output(w), lhs.output(sigma)), 1e-13);
}

TEST(LhvMap, Linear) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0.0, 1.0);
  LhvOutputMap map(MeasurementTriad::pauli(), MeasurementTriad::pauli());
  std::array<double, 64> x{}, y{}, z{};
  for (int i = 0; i < 64; ++i) {
    x[i] = nd(rng);
    y[i] = nd(rng);
    z[i] = 2.0 * x[i] - 0.5 * y[i];
  }
  EXPECT_LE(max_diff(map.output(z), 2.0 * map.output(x) - 0.5 * map.output(y)), 1e-12);
}

}  // namespace
}  // namespace qpc
