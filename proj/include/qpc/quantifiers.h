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

#ifndef QPC_QUANTIFIERS_H_
#define QPC_QUANTIFIERS_H_

#include <optional>
#include <string>
#include <vector>

#include "qpc/channels.h"
#include "qpc/classical_models.h"
#include "qpc/sdp.h"
#include "qpc/simulator.h"

namespace qpc {

enum class Correlation { kSteering, kBell };
enum class Measure { kComposition, kRobustness, kFidelity };

const char* to_string(Correlation c);
const char* to_string(Measure m);

struct QuantifierOptions {
  sdp::SolverOptions solver;
  UrParams bob_rotation;  // Bob's triad for the Bell quantities
};

struct QuantifierReport {
  Correlation correlation;
  Measure measure;
  double value = 0.0;
  double raw_value = 0.0;  // before clamping
  bool clamped = false;
  sdp::SolveStatus status = sdp::SolveStatus::kInaccurate;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  double seconds = 0.0;
  // Unnormalized classical process for alpha and beta, the trace-one mimic for F.
  CMatrix witness;
  std::optional<LhsVariables> lhs;
  std::optional<LhvVariables> lhv;
};

// Primal program. The witness is support * Z * support^dagger with Z the
// Hermitian variable in witness_block. For the composition the support is the
// range of chi (eigenvalues above kSupportTolerance times the largest), since
// 0 <= witness <= chi confines the witness there; otherwise it is the identity.
// Output positivity is implied by witness >= 0 and is only checked post hoc.
struct QuantifierProgram {
  static constexpr double kSupportTolerance = 1e-9;

  sdp::ConicProgram program;
  CMatrix support;
  int witness_block = 0;
  int slack_block = -1;
  std::vector<std::array<int, 8>> sigma_blocks;  // LHS only, per input
  int weights_block = -1;                        // LHV only, 64 entries per input
};

QuantifierProgram build_program(Correlation c, Measure m, const ProcessMatrix& chi,
                                const QuantifierOptions& opt = {});

// Throws NonPhysicalInput for a non-PSD chi and SolverFailure when the solver
// reports infeasibility or the value leaves its range by more than 1e-6.
QuantifierReport quantify(Correlation c, Measure m, const ProcessMatrix& chi,
                          const QuantifierOptions& opt = {});

QuantifierReport steering_composition(const ProcessMatrix& chi, const QuantifierOptions& opt = {});
QuantifierReport bell_composition(const ProcessMatrix& chi, const QuantifierOptions& opt = {});
QuantifierReport steering_robustness(const ProcessMatrix& chi, const QuantifierOptions& opt = {});
QuantifierReport bell_robustness(const ProcessMatrix& chi, const QuantifierOptions& opt = {});
QuantifierReport incapable_fidelity(const ProcessMatrix& target, const QuantifierOptions& opt = {});
QuantifierReport unable_fidelity(const ProcessMatrix& target, const QuantifierOptions& opt = {});

// Value of the Lagrange dual, assembled directly as a linear matrix inequality
// in the multipliers and solved separately from the primal.
struct DualBound {
  double value;
  sdp::SolveStatus status;
  double duality_gap;
};
DualBound dual_bound(Correlation c, Measure m, const ProcessMatrix& chi, const QuantifierOptions& opt = {});

// Re-checks a reported witness against the original constraints using the
// channel action and the classical output maps.
struct WitnessCheck {
  double min_eig_witness = 0.0;
  double min_eig_complement = 0.0;  // chi - witness, witness - chi; 0 for F
  double trace_violation = 0.0;
  double min_eig_classical = 0.0;
  double min_eig_outputs = 0.0;
  double link_residual = 0.0;
  double identity_residual = 0.0;   // identity-decomposition consistency of the outputs
  double value_residual = 0.0;

  bool ok(double tol) const;
};
WitnessCheck verify_witness(const QuantifierReport& r, const ProcessMatrix& chi, const QuantifierOptions& opt = {});

std::string report_to_json(const QuantifierReport& r);

}  // namespace qpc

#endif  // QPC_QUANTIFIERS_H_
