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

#ifndef QPC_TOMOGRAPHY_H_
#define QPC_TOMOGRAPHY_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qpc/channels.h"
#include "qpc/classical_models.h"
#include "qpc/simulator.h"

namespace qpc {

// Joint outcome distributions of one input state over the 3 x 3 grid of
// measurement settings (index k for Alice, l for Bob).
class ProbabilityTable {
 public:
  void set(int k, int l, const Distribution& d);
  bool has(int k, int l) const { return joint_[k][l].has_value(); }
  bool complete() const;
  const Distribution& joint(int k, int l) const;

  // <V_k (x) W_l>
  double correlation(int k, int l) const;
  // <V_k>, averaged over the three Bob settings
  double alice_expectation(int k) const;
  // <W_l>, averaged over the three Alice settings
  double bob_expectation(int l) const;

 private:
  std::array<std::array<std::optional<Distribution>, 3>, 3> joint_;
};

struct TriadPair {
  MeasurementTriad alice;
  MeasurementTriad bob;
};

// Pauli triads for steering; Bob's triad rotated by U_R for the Bell test.
TriadPair triads_for(TestKind test, const std::optional<UrParams>& ur);

// Throws IncompleteGrid when a setting pair is missing.
DensityMatrix qst(const ProbabilityTable& table, const TriadPair& triads);

using OutputSet = std::vector<std::pair<InputPair, DensityMatrix>>;

// Raw process matrix from the outputs of the 16 inputs {Z+, Z-, X+, Y+}^2.
// Throws MissingInput.
HermitianView qpt(const OutputSet& outputs);

// kSimplex projects the eigenvalues of chi_raw onto the probability simplex,
// giving the Frobenius-nearest trace-one PSD matrix. kClipRenormalize zeroes
// negative eigenvalues and rescales.
enum class Projection { kSimplex, kClipRenormalize };

struct QptResult {
  HermitianView chi_raw;
  ProcessMatrix chi_phys;
  double ml_distance;
  Projection projection;
};

// ZeroTrace when the clipped matrix has trace below 1e-12.
QptResult physicalize(const HermitianView& chi_raw, Projection projection = Projection::kSimplex);

double process_fidelity(const ProcessMatrix& a, const ProcessMatrix& b);

std::vector<std::pair<InputPair, ProbabilityTable>> tables_from_dataset(const TomographyDataset& d);
std::vector<std::pair<InputPair, ProbabilityTable>> tables_from_circuits(const std::vector<Circuit>& circuits,
                                                                         const std::optional<NoiseModel>& noise);
OutputSet reconstruct_outputs(const std::vector<std::pair<InputPair, ProbabilityTable>>& tables,
                              const TriadPair& triads);

QptResult reconstruct_process(const TomographyDataset& d);
QptResult reconstruct_process_exact(const std::vector<Circuit>& circuits, TestKind test,
                                    const std::optional<NoiseModel>& noise);

std::string process_to_json(const ProcessMatrix& p);
// Rejects payloads whose Hermiticity defect exceeds 1e-8 (NonHermitian).
ProcessMatrix process_from_json(std::string_view text);

}  // namespace qpc

#endif  // QPC_TOMOGRAPHY_H_
