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

#ifndef QPC_CHANNELS_H_
#define QPC_CHANNELS_H_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpc/qmath.h"

namespace qpc {

class GateUnitary {
 public:
  explicit GateUnitary(CMatrix u);

  int dim() const { return static_cast<int>(u_.rows()); }
  const CMatrix& matrix() const { return u_; }
  GateUnitary adjoint() const { return GateUnitary(u_.adjoint()); }

 private:
  CMatrix u_;
};

// Known names: i, x, y, z, h, s, sdg, rx(theta), rz(phi), ur(phi, theta),
// cphase(lambda). Throws UnknownGate otherwise.
GateUnitary gate(std::string_view name, std::span<const double> params = {});
GateUnitary cphase(double lambda);
GateUnitary ur(double phi, double theta);
GateUnitary rx(double theta);
GateUnitary rz(double phi);

// 2 x 2 or 4 x 4 Hermitian operator. Positivity is not required.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(const CMatrix& m, double tol = Tolerances::kHermiticity);
  explicit DensityMatrix(const HermitianView& h);

  const CMatrix& matrix() const { return h_.matrix(); }
  int dim() const { return static_cast<int>(h_.dim()); }
  double trace() const { return h_.trace(); }
  const HermitianView& view() const { return h_; }

 private:
  HermitianView h_;
};

DensityMatrix pure_state(const CVector& psi);

// Operator basis element E_q = |a><b| on two qubits with q = q1 + 2 q2 + 4 q3
// + 8 q4, a = 2 q1 + q2 and b = 2 q3 + q4.
CMatrix operator_basis(int q);
int basis_index(int ket, int bra);

class ProcessMatrix {
 public:
  // Validates size 16, Hermiticity, PSD and the trace against the convention.
  explicit ProcessMatrix(const CMatrix& chi, double trace_convention = 1.0);

  const CMatrix& chi() const { return chi_.matrix(); }
  const HermitianView& view() const { return chi_; }
  double trace_convention() const { return trace_convention_; }

 private:
  HermitianView chi_;
  double trace_convention_;
};

class KrausChannel {
 public:
  explicit KrausChannel(std::vector<CMatrix> operators);

  static KrausChannel identity(int dim);
  static KrausChannel unitary(const GateUnitary& u);

  int dim() const { return dim_; }
  const std::vector<CMatrix>& operators() const { return ops_; }
  CMatrix apply(const CMatrix& rho) const;
  bool is_trace_preserving(double tol = 1e-10) const;
  // this first, then `next`
  KrausChannel then(const KrausChannel& next) const;
  KrausChannel tensor(const KrausChannel& other) const;
  // Equivalent channel with a minimal number of operators.
  KrausChannel simplified() const;

 private:
  std::vector<CMatrix> ops_;
  int dim_;
};

// 4 * sum_qr chi_qr E_q rho E_r^dagger, for any 4 x 4 operator rho.
CMatrix apply_chi(const CMatrix& chi, const CMatrix& rho);
DensityMatrix apply_process(const ProcessMatrix& chi, const DensityMatrix& rho);

// Inverse of the action: given the images of the 16 basis operators E_q,
// returns the unique chi reproducing them.
CMatrix chi_from_basis_outputs(const std::array<CMatrix, 16>& outputs);

ProcessMatrix process_from_kraus(const KrausChannel& ch);
ProcessMatrix process_from_unitary(const GateUnitary& u);
ProcessMatrix compose(const ProcessMatrix& second, const ProcessMatrix& first);

// Entanglement (process) fidelity with the identity and the derived average
// gate fidelity of a channel on dimension d.
double process_fidelity_to_identity(const KrausChannel& ch);
double average_gate_fidelity(const KrausChannel& ch);

KrausChannel amplitude_damping(double t, double t1);
KrausChannel phase_damping(double t, double t2);
// Amplitude damping followed by phase damping such that populations relax
// with T1 and coherences decay as exp(-t / T2). Requires T2 <= 2 T1.
KrausChannel thermal_relaxation(double t, double t1, double t2);
KrausChannel depolarizing(double p, int nq);

struct ReadoutError {
  double p01 = 0.0;  // report 0 given prepared 1
  double p10 = 0.0;  // report 1 given prepared 0

  bool operator==(const ReadoutError&) const = default;
};

std::vector<double> readout_apply(const ReadoutError& err, std::span<const double> probs);
// One error per qubit; qubit 0 is the most significant bit of the outcome.
std::vector<double> readout_apply(std::span<const ReadoutError> errs, std::span<const double> probs);

struct NoiseModel {
  std::vector<double> t1_us;
  std::vector<double> t2_us;
  double gate_time_1q_ns = 0.0;
  double gate_time_2q_ns = 0.0;
  std::vector<double> gate_error_1q;
  double gate_error_2q = 0.0;
  std::vector<ReadoutError> readout;

  int num_qubits() const { return static_cast<int>(t1_us.size()); }
  // Throws InvalidModel, InvalidTime or InvalidProbability.
  void validate() const;
  bool operator==(const NoiseModel&) const = default;
};

// Zero errors, infinite coherence times.
NoiseModel ideal_noise_model();
// Calibration data of the two ibmq_santiago qubits used for CPHASE.
NoiseModel santiago_noise_model();

enum class GateKind { kOneQubit, kTwoQubit };

struct CalibratedNoise {
  KrausChannel channel;
  double depolarizing_p;
  double relaxation_error;  // 1 - average gate fidelity of relaxation alone
};

// Depolarizing channel followed by thermal relaxation for the gate duration,
// with the depolarizing strength fitted to the calibrated gate error.
CalibratedNoise calibrate_gate_noise(const NoiseModel& model, GateKind kind, std::span<const int> qubits);
KrausChannel calibrated_gate_noise(const NoiseModel& model, GateKind kind, std::span<const int> qubits);

std::string noise_model_to_json(const NoiseModel& m);
NoiseModel noise_model_from_json(std::string_view text);
NoiseModel load_noise_model(const std::string& path);
void save_noise_model(const NoiseModel& m, const std::string& path);

}  // namespace qpc

#endif  // QPC_CHANNELS_H_
