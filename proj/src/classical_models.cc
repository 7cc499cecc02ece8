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

#include <string>

#include "qpc/error.h"

namespace qpc {

MeasurementTriad::MeasurementTriad(const std::array<CMatrix, 3>& observables) : obs_(observables) {
  for (int k = 0; k < 3; ++k) {
    const CMatrix& v = obs_[k];
    if (v.rows() != 2 || v.cols() != 2) throw Error(ErrorCode::kTriadInvalid, "observables must be 2x2");
    if (hermiticity_defect(v) > Tolerances::kHermiticity) {
      throw Error(ErrorCode::kTriadInvalid, "observable " + std::to_string(k + 1) + " is not Hermitian");
    }
    if ((v * v - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() > Tolerances::kHermiticity) {
      throw Error(ErrorCode::kTriadInvalid, "observable " + std::to_string(k + 1) + " does not square to I");
    }
    for (int l = 0; l < 3; ++l) {
      const double g = frob_inner(obs_[k], obs_[l]).real() / 2.0;
      if (std::abs(g - (k == l ? 1.0 : 0.0)) > Tolerances::kHermiticity) {
        throw Error(ErrorCode::kTriadInvalid, "observables are not orthonormal");
      }
    }
  }
}

MeasurementTriad MeasurementTriad::pauli() { return MeasurementTriad({pauli_x(), pauli_y(), pauli_z()}); }

MeasurementTriad MeasurementTriad::rotated(const GateUnitary& u) {
  if (u.dim() != 2) throw Error(ErrorCode::kTriadInvalid, "triad rotation must be single-qubit");
  const CMatrix& m = u.matrix();
  return MeasurementTriad(
      {m * pauli_x() * m.adjoint(), m * pauli_y() * m.adjoint(), m * pauli_z() * m.adjoint()});
}

CMatrix MeasurementTriad::projector(int k, int sign) const {
  return (CMatrix::Identity(2, 2) + double(sign) * obs_[k]) / 2.0;
}

CMatrix MeasurementTriad::reconstruct(const std::array<double, 3>& v) const {
  CMatrix m = CMatrix::Identity(2, 2);
  for (int k = 0; k < 3; ++k) m += v[k] * obs_[k];
  return m / 2.0;
}

const std::array<DeterministicStrategy, 8>& single_party_strategies() {
  static const std::array<DeterministicStrategy, 8> kAll = [] {
    std::array<DeterministicStrategy, 8> out{};
    for (int i = 0; i < 8; ++i) {
      out[i].outcomes = {(i & 4) ? -1 : 1, (i & 2) ? -1 : 1, (i & 1) ? -1 : 1};
    }
    return out;
  }();
  return kAll;
}

std::vector<StrategyProfile> enumerate_strategies(int parties) {
  if (parties != 1 && parties != 2) throw Error(ErrorCode::kInvalidArgument, "parties must be 1 or 2");
  const auto& s = single_party_strategies();
  std::vector<StrategyProfile> out;
  if (parties == 1) {
    for (const auto& a : s) out.push_back({a});
  } else {
    for (const auto& a : s)
      for (const auto& b : s) out.push_back({a, b});
  }
  return out;
}

int deterministic_response(const DeterministicStrategy& s, int k) {
  if (k < 1 || k > 3) throw Error(ErrorCode::kIndexOutOfRange, "setting index must be 1, 2 or 3");
  return s.outcomes[k - 1];
}

CMatrix strategy_operator(const DeterministicStrategy& s, const MeasurementTriad& triad) {
  return triad.reconstruct({double(s.outcomes[0]), double(s.outcomes[1]), double(s.outcomes[2])});
}

const std::array<InputPair, 36>& product_inputs() {
  static const std::array<InputPair, 36> kInputs = [] {
    const InputToken single[6] = {{Axis::kX, +1}, {Axis::kX, -1}, {Axis::kY, +1},
                                  {Axis::kY, -1}, {Axis::kZ, +1}, {Axis::kZ, -1}};
    std::array<InputPair, 36> out{};
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) out[6 * a + b] = {single[a], single[b]};
    return out;
  }();
  return kInputs;
}

int product_input_index(const InputPair& in) {
  auto idx = [](InputToken t) { return 2 * static_cast<int>(t.axis) + (t.sign > 0 ? 0 : 1); };
  return 6 * idx(in[0]) + idx(in[1]);
}

CMatrix product_input_state(const InputPair& in) {
  CVector psi = kron(input_ket(in[0]), input_ket(in[1]));
  return psi * psi.adjoint();
}

LhsOutputMap::LhsOutputMap(const MeasurementTriad& alice, const MeasurementTriad&) {
  const auto& s = single_party_strategies();
  for (int mu = 0; mu < 8; ++mu) a_[mu] = strategy_operator(s[mu], alice);
}

CMatrix LhsOutputMap::output(const std::array<CMatrix, 8>& sigma) const {
  CMatrix out = CMatrix::Zero(4, 4);
  for (int mu = 0; mu < 8; ++mu) out += kron(a_[mu], sigma[mu]);
  return out;
}

std::vector<CMatrix> LhsOutputMap::apply(const LhsVariables& v) const {
  std::vector<CMatrix> out;
  for (const auto& s : v.sigma) out.push_back(output(s));
  return out;
}

CMatrix LhsOutputMap::reduced_functional(const CMatrix& k, int mu) const {
  // (K_B)_{b b'} = sum_{a a'} K_{(a b), (a' b')} A_{a' a}
  CMatrix kb = CMatrix::Zero(2, 2);
  for (int a = 0; a < 2; ++a)
    for (int ap = 0; ap < 2; ++ap)
      for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp) kb(b, bp) += k(2 * a + b, 2 * ap + bp) * a_[mu](ap, a);
  return kb;
}

LhvOutputMap::LhvOutputMap(const MeasurementTriad& alice, const MeasurementTriad& bob) {
  const auto& s = single_party_strategies();
  for (int z = 0; z < 8; ++z)
    for (int e = 0; e < 8; ++e) ab_[8 * z + e] = kron(strategy_operator(s[z], alice), strategy_operator(s[e], bob));
}

CMatrix LhvOutputMap::output(const std::array<double, 64>& weights) const {
  CMatrix out = CMatrix::Zero(4, 4);
  for (int i = 0; i < 64; ++i) out += weights[i] * ab_[i];
  return out;
}

std::vector<CMatrix> LhvOutputMap::apply(const LhvVariables& v) const {
  std::vector<CMatrix> out;
  for (const auto& w : v.weights) out.push_back(output(w));
  return out;
}

}  // namespace qpc
