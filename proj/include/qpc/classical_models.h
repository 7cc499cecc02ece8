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

#ifndef QPC_CLASSICAL_MODELS_H_
#define QPC_CLASSICAL_MODELS_H_

#include <array>
#include <vector>

#include "qpc/channels.h"
#include "qpc/simulator.h"

namespace qpc {

// Three +-1-valued single-qubit observables, orthonormal under tr(A B) / 2.
class MeasurementTriad {
 public:
  explicit MeasurementTriad(const std::array<CMatrix, 3>& observables);

  static MeasurementTriad pauli();
  // U X U^dagger, U Y U^dagger, U Z U^dagger
  static MeasurementTriad rotated(const GateUnitary& u);

  const CMatrix& observable(int k) const { return obs_[k]; }
  // (I + sign V_k) / 2
  CMatrix projector(int k, int sign) const;
  // (I + sum_k v_k V_k) / 2
  CMatrix reconstruct(const std::array<double, 3>& v) const;

 private:
  std::array<CMatrix, 3> obs_;
};

struct DeterministicStrategy {
  std::array<int, 3> outcomes;

  bool operator==(const DeterministicStrategy&) const = default;
};

// parties = 1: the 8 strategies, lexicographic with +1 before -1.
// parties = 2: the 64 ordered pairs, Alice-major. Each profile holds one
// strategy per party.
using StrategyProfile = std::vector<DeterministicStrategy>;
std::vector<StrategyProfile> enumerate_strategies(int parties);
const std::array<DeterministicStrategy, 8>& single_party_strategies();

// k is 1-based; throws IndexOutOfRange otherwise.
int deterministic_response(const DeterministicStrategy& s, int k);

// (I + sum_k v_k V_k) / 2 for the strategy's outcomes.
CMatrix strategy_operator(const DeterministicStrategy& s, const MeasurementTriad& triad);

// The 36 product inputs: per qubit X+, X-, Y+, Y-, Z+, Z-, Alice-major.
const std::array<InputPair, 36>& product_inputs();
int product_input_index(const InputPair& in);
CMatrix product_input_state(const InputPair& in);

struct LhsVariables {
  std::vector<std::array<CMatrix, 8>> sigma;  // [input][strategy], 2 x 2 Hermitian
};

struct LhvVariables {
  std::vector<std::array<double, 64>> weights;  // [input][alice strategy * 8 + bob strategy]
};

class LhsOutputMap {
 public:
  LhsOutputMap(const MeasurementTriad& alice, const MeasurementTriad& bob);

  const std::array<CMatrix, 8>& alice_operators() const { return a_; }
  // sum_mu A_mu (x) sigma_mu
  CMatrix output(const std::array<CMatrix, 8>& sigma) const;
  std::vector<CMatrix> apply(const LhsVariables& v) const;
  // K_B such that tr(K (A_mu (x) sigma)) = tr(K_B sigma) for every sigma.
  CMatrix reduced_functional(const CMatrix& k, int mu) const;

 private:
  std::array<CMatrix, 8> a_;
};

class LhvOutputMap {
 public:
  LhvOutputMap(const MeasurementTriad& alice, const MeasurementTriad& bob);

  const std::array<CMatrix, 64>& product_operators() const { return ab_; }
  // sum_{zeta, eta} P(zeta, eta) A_zeta (x) B_eta
  CMatrix output(const std::array<double, 64>& weights) const;
  std::vector<CMatrix> apply(const LhvVariables& v) const;

 private:
  std::array<CMatrix, 64> ab_;
};

}  // namespace qpc

#endif  // QPC_CLASSICAL_MODELS_H_
