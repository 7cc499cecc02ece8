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
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qpc/error.h"

namespace qpc {

namespace {

constexpr double kUnitaryTol = 1e-10;

void require_time(double t, double scale, const char* what) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::kInvalidTime, std::string(what) + " must be >= 0");
  if (!(scale > 0.0)) throw Error(ErrorCode::kInvalidTime, std::string(what) + ": time constant must be > 0");
}

void require_probability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kInvalidProbability, what + " = " + std::to_string(p) + " outside [0, 1]");
  }
}

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

std::vector<CMatrix> pauli_strings(int nq) {
  std::vector<CMatrix> single = {CMatrix::Identity(2, 2), pauli_x(), pauli_y(), pauli_z()};
  std::vector<CMatrix> out = {CMatrix::Identity(1, 1)};
  for (int q = 0; q < nq; ++q) {
    std::vector<CMatrix> next;
    for (const auto& a : out)
      for (const auto& s : single) next.push_back(kron(a, s));
    out = std::move(next);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Gates

GateUnitary::GateUnitary(CMatrix u) : u_(std::move(u)) {
  if (u_.rows() != u_.cols() || (u_.rows() != 2 && u_.rows() != 4)) {
    throw Error(ErrorCode::kDimMismatch, "gate must be 2x2 or 4x4");
  }
  double defect = (u_.adjoint() * u_ - CMatrix::Identity(u_.rows(), u_.cols())).cwiseAbs().maxCoeff();
  if (!(defect <= kUnitaryTol)) throw Error(ErrorCode::kInvalidArgument, "matrix is not unitary");
}

GateUnitary cphase(double lambda) {
  CMatrix u = CMatrix::Identity(4, 4);
  u(3, 3) = std::exp(kI * lambda);
  return GateUnitary(u);
}

GateUnitary ur(double phi, double theta) {
  const Complex em = std::exp(-kI * (phi / 2)), ep = std::exp(kI * (phi / 2));
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return GateUnitary(mat2(em * c, em * s, -ep * s, ep * c));
}

GateUnitary rx(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return GateUnitary(mat2(c, -kI * s, -kI * s, c));
}

GateUnitary rz(double phi) {
  return GateUnitary(mat2(std::exp(-kI * (phi / 2)), 0.0, 0.0, std::exp(kI * (phi / 2))));
}

GateUnitary gate(std::string_view name, std::span<const double> params) {
  auto need = [&](size_t n) {
    if (params.size() != n) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(name) + " takes " + std::to_string(n) + " parameter(s)");
    }
    for (double p : params) {
      if (!std::isfinite(p)) throw Error(ErrorCode::kInvalidArgument, "gate angle must be finite");
    }
  };
  const double r = 1.0 / std::sqrt(2.0);
  if (name == "i") return need(0), GateUnitary(CMatrix::Identity(2, 2));
  if (name == "x") return need(0), GateUnitary(pauli_x());
  if (name == "y") return need(0), GateUnitary(pauli_y());
  if (name == "z") return need(0), GateUnitary(pauli_z());
  if (name == "h") return need(0), GateUnitary(mat2(r, r, r, -r));
  if (name == "s") return need(0), GateUnitary(mat2(1.0, 0.0, 0.0, kI));
  if (name == "sdg") return need(0), GateUnitary(mat2(1.0, 0.0, 0.0, -kI));
  if (name == "rx") return need(1), rx(params[0]);
  if (name == "rz") return need(1), rz(params[0]);
  if (name == "ur") return need(2), ur(params[0], params[1]);
  if (name == "cphase") return need(1), cphase(params[0]);
  throw Error(ErrorCode::kUnknownGate, "unknown gate '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// States and processes

DensityMatrix::DensityMatrix(const CMatrix& m, double tol) : DensityMatrix(HermitianView(m, tol)) {}

DensityMatrix::DensityMatrix(const HermitianView& h) : h_(h) {
  if (h_.dim() != 2 && h_.dim() != 4) throw Error(ErrorCode::kDimMismatch, "density matrix must be 2x2 or 4x4");
}

DensityMatrix pure_state(const CVector& psi) {
  CVector v = psi / psi.norm();
  return DensityMatrix(CMatrix(v * v.adjoint()), 1e-12);
}

int basis_index(int ket, int bra) {
  const int q1 = ket >> 1, q2 = ket & 1, q3 = bra >> 1, q4 = bra & 1;
  return q1 + 2 * q2 + 4 * q3 + 8 * q4;
}

CMatrix operator_basis(int q) {
  if (q < 0 || q >= 16) throw Error(ErrorCode::kIndexOutOfRange, "operator basis index");
  const int q1 = q & 1, q2 = (q >> 1) & 1, q3 = (q >> 2) & 1, q4 = (q >> 3) & 1;
  return ket_bra(4, 2 * q1 + q2, 2 * q3 + q4);
}

ProcessMatrix::ProcessMatrix(const CMatrix& chi, double trace_convention)
    : chi_(chi, Tolerances::kFileHermiticity), trace_convention_(trace_convention) {
  if (chi.rows() != 16 || chi.cols() != 16) throw Error(ErrorCode::kDimMismatch, "process matrix must be 16x16");
  if (!(trace_convention > 0.0)) throw Error(ErrorCode::kNonPhysicalInput, "trace convention must be positive");
  if (min_eigenvalue(chi_) < -Tolerances::kPsdSlack) {
    throw Error(ErrorCode::kNonPhysicalInput, "process matrix is not positive semidefinite");
  }
  if (std::abs(chi_.trace() - trace_convention) > Tolerances::kPsdSlack) {
    throw Error(ErrorCode::kNonPhysicalInput, "process matrix trace " + std::to_string(chi_.trace()) +
                                                  " differs from convention " + std::to_string(trace_convention));
  }
}

CMatrix apply_chi(const CMatrix& chi, const CMatrix& rho) {
  if (chi.rows() != 16 || rho.rows() != 4 || rho.cols() != 4) throw Error(ErrorCode::kDimMismatch, "apply_chi");
  // E_q rho E_r^dagger = rho[b_q][b_r] |a_q><a_r|
  CMatrix out = CMatrix::Zero(4, 4);
  for (int q = 0; q < 16; ++q) {
    const int aq = 2 * (q & 1) + ((q >> 1) & 1), bq = 2 * ((q >> 2) & 1) + ((q >> 3) & 1);
    for (int r = 0; r < 16; ++r) {
      const int ar = 2 * (r & 1) + ((r >> 1) & 1), br = 2 * ((r >> 2) & 1) + ((r >> 3) & 1);
      out(aq, ar) += chi(q, r) * rho(bq, br);
    }
  }
  return 4.0 * out;
}

DensityMatrix apply_process(const ProcessMatrix& chi, const DensityMatrix& rho) {
  if (rho.dim() != 4) throw Error(ErrorCode::kDimMismatch, "process acts on two-qubit states");
  return DensityMatrix(apply_chi(chi.chi(), rho.matrix()), 1e-9);
}

CMatrix chi_from_basis_outputs(const std::array<CMatrix, 16>& outputs) {
  CMatrix chi = CMatrix::Zero(16, 16);
  for (int c = 0; c < 4; ++c) {
    for (int d = 0; d < 4; ++d) {
      const CMatrix& out = outputs[basis_index(c, d)];
      if (out.rows() != 4 || out.cols() != 4) throw Error(ErrorCode::kDimMismatch, "basis output must be 4x4");
      for (int a = 0; a < 4; ++a)
        for (int ap = 0; ap < 4; ++ap) chi(basis_index(a, c), basis_index(ap, d)) = out(a, ap) / 4.0;
    }
  }
  return chi;
}

ProcessMatrix process_from_kraus(const KrausChannel& ch) {
  if (ch.dim() != 4) throw Error(ErrorCode::kDimMismatch, "process matrices describe two-qubit channels");
  CMatrix chi = CMatrix::Zero(16, 16);
  for (const auto& k : ch.operators()) {
    CVector u(16);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) u(basis_index(a, b)) = k(a, b);
    chi += u * u.adjoint() / 4.0;
  }
  chi = (chi + chi.adjoint()) / 2.0;
  return ProcessMatrix(chi, chi.trace().real());
}

ProcessMatrix process_from_unitary(const GateUnitary& u) {
  return process_from_kraus(KrausChannel::unitary(u));
}

ProcessMatrix compose(const ProcessMatrix& second, const ProcessMatrix& first) {
  std::array<CMatrix, 16> outs;
  for (int q = 0; q < 16; ++q) outs[q] = apply_chi(second.chi(), apply_chi(first.chi(), operator_basis(q)));
  CMatrix chi = chi_from_basis_outputs(outs);
  chi = (chi + chi.adjoint()) / 2.0;
  return ProcessMatrix(chi, chi.trace().real());
}

// ---------------------------------------------------------------------------
// Kraus channels

KrausChannel::KrausChannel(std::vector<CMatrix> operators) : ops_(std::move(operators)) {
  if (ops_.empty()) throw Error(ErrorCode::kInvalidArgument, "empty Kraus set");
  dim_ = static_cast<int>(ops_[0].rows());
  CMatrix sum = CMatrix::Zero(dim_, dim_);
  for (const auto& k : ops_) {
    if (k.rows() != dim_ || k.cols() != dim_) throw Error(ErrorCode::kDimMismatch, "Kraus operators differ in shape");
    sum += k.adjoint() * k;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es((sum + sum.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().maxCoeff() > 1.0 + Tolerances::kPsdSlack) {
    throw Error(ErrorCode::kNonPhysicalInput, "Kraus set increases trace");
  }
}

KrausChannel KrausChannel::identity(int dim) { return KrausChannel({CMatrix::Identity(dim, dim)}); }

KrausChannel KrausChannel::unitary(const GateUnitary& u) { return KrausChannel({u.matrix()}); }

CMatrix KrausChannel::apply(const CMatrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) throw Error(ErrorCode::kDimMismatch, "channel input shape");
  CMatrix out = CMatrix::Zero(dim_, dim_);
  for (const auto& k : ops_) out += k * rho * k.adjoint();
  return out;
}

bool KrausChannel::is_trace_preserving(double tol) const {
  CMatrix sum = CMatrix::Zero(dim_, dim_);
  for (const auto& k : ops_) sum += k.adjoint() * k;
  return (sum - CMatrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() <= tol;
}

KrausChannel KrausChannel::then(const KrausChannel& next) const {
  if (next.dim_ != dim_) throw Error(ErrorCode::kDimMismatch, "composed channels differ in dimension");
  std::vector<CMatrix> ops;
  for (const auto& b : next.ops_)
    for (const auto& a : ops_) ops.push_back(b * a);
  return KrausChannel(std::move(ops)).simplified();
}

KrausChannel KrausChannel::tensor(const KrausChannel& other) const {
  std::vector<CMatrix> ops;
  for (const auto& a : ops_)
    for (const auto& b : other.ops_) ops.push_back(kron(a, b));
  return KrausChannel(std::move(ops)).simplified();
}

KrausChannel KrausChannel::simplified() const {
  if (ops_.size() <= 1) return *this;
  const int d2 = dim_ * dim_;
  CMatrix choi = CMatrix::Zero(d2, d2);
  for (const auto& k : ops_) {
    CVector v = Eigen::Map<const CVector>(k.data(), d2);
    choi += v * v.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es((choi + choi.adjoint()) / 2.0);
  const double top = es.eigenvalues().maxCoeff();
  std::vector<CMatrix> ops;
  for (int i = d2 - 1; i >= 0; --i) {
    double lam = es.eigenvalues()(i);
    if (lam <= 1e-14 * std::max(1.0, top)) continue;
    CVector v = std::sqrt(lam) * es.eigenvectors().col(i);
    ops.push_back(Eigen::Map<CMatrix>(v.data(), dim_, dim_));
  }
  if (ops.empty()) ops.push_back(CMatrix::Zero(dim_, dim_));
  return KrausChannel(std::move(ops));
}

double process_fidelity_to_identity(const KrausChannel& ch) {
  double s = 0.0;
  for (const auto& k : ch.operators()) s += std::norm(k.trace());
  return s / (static_cast<double>(ch.dim()) * ch.dim());
}

double average_gate_fidelity(const KrausChannel& ch) {
  const double d = ch.dim();
  return (d * process_fidelity_to_identity(ch) + 1.0) / (d + 1.0);
}

KrausChannel amplitude_damping(double t, double t1) {
  require_time(t, t1, "amplitude damping time");
  const double gamma = std::isinf(t1) ? 0.0 : -std::expm1(-t / t1);
  return KrausChannel({mat2(1.0, 0.0, 0.0, std::sqrt(1.0 - gamma)), mat2(0.0, std::sqrt(gamma), 0.0, 0.0)});
}

KrausChannel phase_damping(double t, double t2) {
  require_time(t, t2, "phase damping time");
  const double lambda = std::isinf(t2) ? 0.0 : -std::expm1(-2.0 * t / t2);
  return KrausChannel({mat2(1.0, 0.0, 0.0, std::sqrt(1.0 - lambda)), mat2(0.0, 0.0, 0.0, std::sqrt(lambda))});
}

KrausChannel thermal_relaxation(double t, double t1, double t2) {
  require_time(t, t1, "relaxation time");
  require_time(t, t2, "relaxation time");
  if (t2 > 2.0 * t1 * (1.0 + 1e-12)) throw Error(ErrorCode::kInvalidTime, "T2 exceeds 2 T1");
  // Amplitude damping already shrinks coherences by exp(-t / 2T1); the pure
  // dephasing part supplies the remainder.
  const double rate = 1.0 / t2 - 1.0 / (2.0 * t1);
  const double t_phi = rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
  return amplitude_damping(t, t1).then(phase_damping(t, t_phi));
}

KrausChannel depolarizing(double p, int nq) {
  require_probability(p, "depolarizing probability");
  if (nq != 1 && nq != 2) throw Error(ErrorCode::kInvalidArgument, "depolarizing acts on 1 or 2 qubits");
  const std::vector<CMatrix> paulis = pauli_strings(nq);
  const double d2 = static_cast<double>(paulis.size());
  std::vector<CMatrix> ops;
  ops.push_back(std::sqrt(1.0 - p + p / d2) * paulis[0]);
  if (p > 0.0) {
    for (size_t i = 1; i < paulis.size(); ++i) ops.push_back(std::sqrt(p / d2) * paulis[i]);
  }
  return KrausChannel(std::move(ops));
}

// ---------------------------------------------------------------------------
// Readout

std::vector<double> readout_apply(const ReadoutError& err, std::span<const double> probs) {
  const ReadoutError errs[1] = {err};
  return readout_apply(std::span<const ReadoutError>(errs), probs);
}

std::vector<double> readout_apply(std::span<const ReadoutError> errs, std::span<const double> probs) {
  const size_t nq = errs.size();
  if (probs.size() != (size_t{1} << nq)) throw Error(ErrorCode::kDimMismatch, "distribution size vs qubits");
  std::vector<double> cur(probs.begin(), probs.end());
  for (size_t q = 0; q < nq; ++q) {
    require_probability(errs[q].p01, "p01");
    require_probability(errs[q].p10, "p10");
    const size_t bit = size_t{1} << (nq - 1 - q);
    std::vector<double> next(cur.size(), 0.0);
    for (size_t s = 0; s < cur.size(); ++s) {
      const bool one = s & bit;
      const double flip = one ? errs[q].p01 : errs[q].p10;
      next[s] += (1.0 - flip) * cur[s];
      next[s ^ bit] += flip * cur[s];
    }
    cur = std::move(next);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Noise model

void NoiseModel::validate() const {
  const size_t n = t1_us.size();
  if (n == 0) throw Error(ErrorCode::kInvalidModel, "noise model has no qubits");
  if (t2_us.size() != n || gate_error_1q.size() != n || readout.size() != n) {
    throw Error(ErrorCode::kInvalidModel, "per-qubit arrays differ in length");
  }
  for (size_t q = 0; q < n; ++q) {
    if (!(t1_us[q] > 0.0) || !(t2_us[q] > 0.0)) throw Error(ErrorCode::kInvalidTime, "T1 and T2 must be > 0");
    if (t2_us[q] > 2.0 * t1_us[q] * (1.0 + 1e-12)) {
      throw Error(ErrorCode::kInvalidModel, "T2 exceeds 2 T1 on qubit " + std::to_string(q));
    }
    require_probability(gate_error_1q[q], "gate_error_1q");
    require_probability(readout[q].p01, "p01");
    require_probability(readout[q].p10, "p10");
  }
  if (!(gate_time_1q_ns >= 0.0) || !(gate_time_2q_ns >= 0.0) || !std::isfinite(gate_time_1q_ns) ||
      !std::isfinite(gate_time_2q_ns)) {
    throw Error(ErrorCode::kInvalidTime, "gate times must be finite and >= 0");
  }
  require_probability(gate_error_2q, "gate_error_2q");
}

NoiseModel ideal_noise_model() {
  const double inf = std::numeric_limits<double>::infinity();
  NoiseModel m;
  m.t1_us = {inf, inf};
  m.t2_us = {inf, inf};
  m.gate_time_1q_ns = 35.5556;
  m.gate_time_2q_ns = 376.8889;
  m.gate_error_1q = {0.0, 0.0};
  m.gate_error_2q = 0.0;
  m.readout = {{0.0, 0.0}, {0.0, 0.0}};
  return m;
}

NoiseModel santiago_noise_model() {
  NoiseModel m;
  m.t1_us = {106.2285, 44.8018};
  m.t2_us = {82.9952, 88.0221};
  m.gate_time_1q_ns = 35.5556;
  m.gate_time_2q_ns = 376.8889;
  m.gate_error_1q = {0.0002, 0.0003};
  m.gate_error_2q = 0.0056;
  m.readout = {{0.0082, 0.0044}, {0.0346, 0.0112}};
  return m;
}

CalibratedNoise calibrate_gate_noise(const NoiseModel& model, GateKind kind, std::span<const int> qubits) {
  model.validate();
  const size_t want = kind == GateKind::kOneQubit ? 1 : 2;
  if (qubits.size() != want) throw Error(ErrorCode::kInvalidArgument, "qubit count does not match gate kind");
  for (int q : qubits) {
    if (q < 0 || q >= model.num_qubits()) throw Error(ErrorCode::kIndexOutOfRange, "qubit index");
  }
  const double t_us = (kind == GateKind::kOneQubit ? model.gate_time_1q_ns : model.gate_time_2q_ns) * 1e-3;
  KrausChannel relax = thermal_relaxation(t_us, model.t1_us[qubits[0]], model.t2_us[qubits[0]]);
  for (size_t i = 1; i < qubits.size(); ++i) {
    relax = relax.tensor(thermal_relaxation(t_us, model.t1_us[qubits[i]], model.t2_us[qubits[i]]));
  }
  const double error = kind == GateKind::kOneQubit ? model.gate_error_1q[qubits[0]] : model.gate_error_2q;
  const double d = relax.dim();
  // F_pro is affine in p: (1 - p) F_relax + p / d^2.
  const double f_relax = process_fidelity_to_identity(relax);
  const double f_target = ((1.0 - error) * (d + 1.0) - 1.0) / d;
  double p = 0.0;
  if (f_relax - 1.0 / (d * d) > 1e-15) p = (f_relax - f_target) / (f_relax - 1.0 / (d * d));
  p = std::clamp(p, 0.0, 1.0);
  KrausChannel channel = depolarizing(p, static_cast<int>(want)).then(relax);
  return {channel, p, 1.0 - average_gate_fidelity(relax)};
}

KrausChannel calibrated_gate_noise(const NoiseModel& model, GateKind kind, std::span<const int> qubits) {
  return calibrate_gate_noise(model, kind, qubits).channel;
}

namespace {

using nlohmann::json;

json time_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(std::isinf(x) ? json(nullptr) : json(x));
  return a;
}

std::vector<double> read_time_array(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) throw Error(ErrorCode::kSchemaError, std::string(key) + " missing");
  std::vector<double> out;
  for (const auto& x : j[key]) {
    if (x.is_null()) {
      out.push_back(std::numeric_limits<double>::infinity());
    } else if (x.is_number()) {
      out.push_back(x.get<double>());
    } else {
      throw Error(ErrorCode::kSchemaError, std::string(key) + " must hold numbers");
    }
  }
  return out;
}

double read_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) throw Error(ErrorCode::kSchemaError, std::string(key) + " missing");
  return j[key].get<double>();
}

}  // namespace

std::string noise_model_to_json(const NoiseModel& m) {
  json j;
  j["t1_us"] = time_array(m.t1_us);
  j["t2_us"] = time_array(m.t2_us);
  j["gate_time_1q_ns"] = m.gate_time_1q_ns;
  j["gate_time_2q_ns"] = m.gate_time_2q_ns;
  j["gate_error_1q"] = m.gate_error_1q;
  j["gate_error_2q"] = m.gate_error_2q;
  j["readout"] = json::array();
  for (const auto& r : m.readout) j["readout"].push_back({{"p01", r.p01}, {"p10", r.p10}});
  return j.dump(2);
}

NoiseModel noise_model_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSchemaError, std::string("noise model: ") + e.what());
  }
  NoiseModel m;
  m.t1_us = read_time_array(j, "t1_us");
  m.t2_us = read_time_array(j, "t2_us");
  m.gate_time_1q_ns = read_number(j, "gate_time_1q_ns");
  m.gate_time_2q_ns = read_number(j, "gate_time_2q_ns");
  m.gate_error_1q = read_time_array(j, "gate_error_1q");
  m.gate_error_2q = read_number(j, "gate_error_2q");
  if (!j.contains("readout") || !j["readout"].is_array()) throw Error(ErrorCode::kSchemaError, "readout missing");
  for (const auto& r : j["readout"]) {
    if (!r.is_object()) throw Error(ErrorCode::kSchemaError, "readout entries must be objects");
    m.readout.push_back({read_number(r, "p01"), read_number(r, "p10")});
  }
  m.validate();
  return m;
}

NoiseModel load_noise_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return noise_model_from_json(ss.str());
}

void save_noise_model(const NoiseModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << noise_model_to_json(m) << "\n";
}

}  // namespace qpc
