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

#include "qpc/quantifiers.h"

#include <chrono>
#include <cmath>

#include <nlohmann/json.hpp>

#include "qpc/error.h"

namespace qpc {
namespace {

constexpr double kClampWindow = 1e-6;

// Orthonormal basis of n x n Hermitian matrices under Re tr(A B).
std::vector<CMatrix> hermitian_basis(int n) {
  std::vector<CMatrix> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) out.push_back(ket_bra(n, j, j));
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      out.push_back((ket_bra(n, j, k) + ket_bra(n, k, j)) * s);
      out.push_back((ket_bra(n, j, k) - ket_bra(n, k, j)) * (kI * s));
    }
  }
  return out;
}

struct BasisIndices {
  std::array<int, 16> ket, bra;
  BasisIndices() {
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        ket[basis_index(a, b)] = a;
        bra[basis_index(a, b)] = b;
      }
  }
};

// L with tr(L chi) = tr(K apply_chi(chi, rho)).
CMatrix link_functional(const CMatrix& k, const CMatrix& rho) {
  static const BasisIndices idx;
  CMatrix l = CMatrix::Zero(16, 16);
  for (int q = 0; q < 16; ++q)
    for (int r = 0; r < 16; ++r) l(r, q) = 4.0 * k(idx.ket[r], idx.ket[q]) * rho(idx.bra[q], idx.bra[r]);
  return l;
}

void check_physical(const ProcessMatrix& chi) {
  if (min_eigenvalue(chi.view()) < -Tolerances::kPsdSlack || !(chi.trace_convention() > 0.0)) {
    throw Error(ErrorCode::kNonPhysicalInput, "process matrix is not physical");
  }
}

MeasurementTriad bob_triad(Correlation c, const QuantifierOptions& opt) {
  if (c == Correlation::kSteering) return MeasurementTriad::pauli();
  return MeasurementTriad::rotated(ur(opt.bob_rotation.phi, opt.bob_rotation.theta));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

const char* to_string(Correlation c) { return c == Correlation::kSteering ? "steering" : "bell"; }

const char* to_string(Measure m) {
  switch (m) {
    case Measure::kComposition: return "composition";
    case Measure::kRobustness: return "robustness";
    case Measure::kFidelity: return "fidelity";
  }
  return "?";
}

namespace {

CMatrix composition_support(const ProcessMatrix& chi, CMatrix* diag) {
  EigenDecomposition e = eigh(chi.view());
  int r = 0;
  while (r < e.values.size() && e.values(r) > QuantifierProgram::kSupportTolerance * std::max(e.values(0), 1e-300)) ++r;
  CMatrix v = e.vectors.leftCols(r);
  if (diag) *diag = e.values.head(r).cast<Complex>().asDiagonal();
  return v;
}

}  // namespace

QuantifierProgram build_program(Correlation c, Measure m, const ProcessMatrix& chi, const QuantifierOptions& opt) {
  check_physical(chi);
  const double tau = chi.trace_convention();
  const auto& inputs = product_inputs();
  const MeasurementTriad alice = MeasurementTriad::pauli();
  const MeasurementTriad bob = bob_triad(c, opt);
  const LhsOutputMap lhs(alice, bob);
  const LhvOutputMap lhv(alice, bob);

  QuantifierProgram qp;
  sdp::ConicProgram& p = qp.program;
  CMatrix target = chi.chi();
  qp.support = CMatrix::Identity(16, 16);
  if (m == Measure::kComposition) qp.support = composition_support(chi, &target);
  const CMatrix& v = qp.support;
  const int r = static_cast<int>(v.cols());
  const CMatrix id = CMatrix::Identity(r, r);

  qp.witness_block = p.add_hermitian_block(r, "witness");
  if (m != Measure::kFidelity) qp.slack_block = p.add_hermitian_block(r, "complement");
  int trace_slack = -1;
  if (m == Measure::kRobustness) trace_slack = p.add_nonneg_block(1, "trace_excess");
  if (c == Correlation::kSteering) {
    for (std::size_t in = 0; in < inputs.size(); ++in) {
      std::array<int, 8> blocks{};
      for (int mu = 0; mu < 8; ++mu) blocks[mu] = p.add_hermitian_block(2, "lhs_state");
      qp.sigma_blocks.push_back(blocks);
    }
  } else {
    qp.weights_block = p.add_nonneg_block(static_cast<int>(inputs.size()) * 64, "lhv_weights");
  }

  if (m != Measure::kFidelity) {
    const double sign = m == Measure::kComposition ? 1.0 : -1.0;
    for (const CMatrix& k : hermitian_basis(r)) {
      const int con = p.add_constraint((k * target).trace().real());
      p.add_hermitian_functional(con, qp.witness_block, k);
      p.add_hermitian_functional(con, qp.slack_block, k, sign);
    }
  }
  if (m == Measure::kRobustness) {
    const int con = p.add_constraint(tau);
    p.add_hermitian_functional(con, qp.witness_block, id);
    p.add_entry(con, trace_slack, 0, 0, -1.0);
  } else if (m == Measure::kFidelity) {
    p.add_hermitian_functional(p.add_constraint(1.0), qp.witness_block, id);
  }

  const auto basis4 = hermitian_basis(4);
  for (std::size_t in = 0; in < inputs.size(); ++in) {
    const CMatrix rho = product_input_state(inputs[in]);
    for (const CMatrix& k : basis4) {
      const int con = p.add_constraint(0.0);
      p.add_hermitian_functional(con, qp.witness_block, v.adjoint() * link_functional(k, rho) * v);
      if (c == Correlation::kSteering) {
        for (int mu = 0; mu < 8; ++mu) {
          p.add_hermitian_functional(con, qp.sigma_blocks[in][mu], lhs.reduced_functional(k, mu), -1.0);
        }
      } else {
        for (int i = 0; i < 64; ++i) {
          const double w = (k * lhv.product_operators()[i]).trace().real();
          const int pos = static_cast<int>(in) * 64 + i;
          if (std::abs(w) > 1e-15) p.add_entry(con, qp.weights_block, pos, pos, -w);
        }
      }
    }
  }

  switch (m) {
    case Measure::kComposition:
      p.add_hermitian_objective(qp.witness_block, id, -1.0 / tau);
      p.set_objective_offset(1.0);
      break;
    case Measure::kRobustness:
      p.add_hermitian_objective(qp.witness_block, id, 1.0 / tau);
      p.set_objective_offset(-1.0);
      break;
    case Measure::kFidelity:
      p.add_hermitian_objective(qp.witness_block, chi.chi(), -1.0);
      break;
  }
  return qp;
}

QuantifierReport quantify(Correlation c, Measure m, const ProcessMatrix& chi, const QuantifierOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  QuantifierProgram qp = build_program(c, m, chi, opt);
  sdp::SdpSolution s = sdp::solve(qp.program, opt.solver);

  QuantifierReport r;
  r.correlation = c;
  r.measure = m;
  r.status = s.status;
  r.iterations = s.iterations;
  r.duality_gap = s.duality_gap;
  r.primal_infeasibility = s.primal_infeasibility;
  r.dual_infeasibility = s.dual_infeasibility;
  const double sign = m == Measure::kFidelity ? -1.0 : 1.0;
  r.primal_objective = sign * s.primal_objective;
  r.dual_objective = sign * s.dual_objective;
  if (s.status == sdp::SolveStatus::kInfeasible) {
    throw Error(ErrorCode::kSolverFailure, std::string(to_string(c)) + " " + to_string(m) +
                                               ": solver reports infeasibility after " +
                                               std::to_string(s.iterations) + " iterations");
  }
  r.raw_value = r.primal_objective;
  const double hi = m == Measure::kRobustness ? INFINITY : 1.0;
  r.value = r.raw_value;
  if (r.value < 0.0 || r.value > hi) {
    const double excess = r.value < 0.0 ? -r.value : r.value - hi;
    if (excess >= kClampWindow) {
      throw Error(ErrorCode::kSolverFailure, std::string(to_string(c)) + " " + to_string(m) +
                                                 " value out of range: " + std::to_string(r.raw_value));
    }
    r.value = r.value < 0.0 ? 0.0 : hi;
    r.clamped = true;
  }

  r.witness = qp.support * s.hermitian_value(qp.witness_block) * qp.support.adjoint();
  const std::size_t n_in = product_inputs().size();
  if (c == Correlation::kSteering) {
    LhsVariables v;
    v.sigma.resize(n_in);
    for (std::size_t in = 0; in < n_in; ++in)
      for (int mu = 0; mu < 8; ++mu) v.sigma[in][mu] = s.hermitian_value(qp.sigma_blocks[in][mu]);
    r.lhs = std::move(v);
  } else {
    LhvVariables v;
    v.weights.resize(n_in);
    for (std::size_t in = 0; in < n_in; ++in)
      for (int i = 0; i < 64; ++i) v.weights[in][i] = s.x[qp.weights_block](static_cast<int>(in) * 64 + i, 0);
    r.lhv = std::move(v);
  }
  r.seconds = seconds_since(t0);
  return r;
}

QuantifierReport steering_composition(const ProcessMatrix& chi, const QuantifierOptions& opt) {
  return quantify(Correlation::kSteering, Measure::kComposition, chi, opt);
}
QuantifierReport bell_composition(const ProcessMatrix& chi, const QuantifierOptions& opt) {
  return quantify(Correlation::kBell, Measure::kComposition, chi, opt);
}
QuantifierReport steering_robustness(const ProcessMatrix& chi, const QuantifierOptions& opt) {
  return quantify(Correlation::kSteering, Measure::kRobustness, chi, opt);
}
QuantifierReport bell_robustness(const ProcessMatrix& chi, const QuantifierOptions& opt) {
  return quantify(Correlation::kBell, Measure::kRobustness, chi, opt);
}
QuantifierReport incapable_fidelity(const ProcessMatrix& target, const QuantifierOptions& opt) {
  return quantify(Correlation::kSteering, Measure::kFidelity, target, opt);
}
QuantifierReport unable_fidelity(const ProcessMatrix& target, const QuantifierOptions& opt) {
  return quantify(Correlation::kBell, Measure::kFidelity, target, opt);
}

namespace {

// Dual program in the multipliers y: maximize b^T y subject to
// C - sum_i y_i A_i in K. Matrix coefficients are entered in embedded form.
class LmiBuilder {
 public:
  sdp::ConicProgram& program() { return p_; }

  int herm_block(int n) { return p_.add_hermitian_block(n, "lmi"); }
  int var(double b) { return p_.add_constraint(b); }

  void coef(int y, int block, const CMatrix& h, double scale) { put(&p_, y, block, h, scale); }
  void constant(int block, const CMatrix& h, double scale) { put(&p_, -1, block, h, scale); }

 private:
  static void put(sdp::ConicProgram* p, int y, int block, const CMatrix& h, double scale) {
    RMatrix e = real_embedding(h) * scale;
    for (int col = 0; col < e.cols(); ++col) {
      for (int row = 0; row <= col; ++row) {
        if (std::abs(e(row, col)) <= 1e-15) continue;
        if (y < 0) {
          p->add_objective_entry(block, row, col, e(row, col));
        } else {
          p->add_entry(y, block, row, col, e(row, col));
        }
      }
    }
  }

  sdp::ConicProgram p_;
};

CMatrix partial_trace_first(const CMatrix& x) {
  CMatrix out = CMatrix::Zero(2, 2);
  for (int a = 0; a < 2; ++a) out += x.block(2 * a, 2 * a, 2, 2);
  return out;
}

// Adjoint of chi -> apply_chi(chi, rho), written with the basis operators.
CMatrix process_adjoint(const CMatrix& g, const CMatrix& rho) {
  CMatrix out(16, 16);
  for (int r = 0; r < 16; ++r) {
    const CMatrix left = operator_basis(r).adjoint() * g;
    for (int q = 0; q < 16; ++q) out(r, q) = 4.0 * (left * operator_basis(q) * rho).trace();
  }
  return out;
}

}  // namespace

DualBound dual_bound(Correlation c, Measure m, const ProcessMatrix& chi, const QuantifierOptions& opt) {
  check_physical(chi);
  const double tau = chi.trace_convention();
  const auto& inputs = product_inputs();
  const MeasurementTriad alice = MeasurementTriad::pauli();
  const MeasurementTriad bob = bob_triad(c, opt);
  const auto g4 = hermitian_basis(4);

  // Composition multipliers live on the range of chi, matching the primal.
  CMatrix target = chi.chi();
  CMatrix v = CMatrix::Identity(16, 16);
  if (m == Measure::kComposition) v = composition_support(chi, &target);
  const int r = static_cast<int>(v.cols());
  const CMatrix id = CMatrix::Identity(r, r);
  const auto gr = hermitian_basis(r);

  LmiBuilder lmi;
  const int q_block = lmi.herm_block(r);
  int p_block = -1, s_block = -1;
  if (m != Measure::kFidelity) p_block = lmi.herm_block(r);
  if (m == Measure::kRobustness) s_block = lmi.program().add_nonneg_block(1, "lmi");

  switch (m) {
    case Measure::kComposition: {
      // maximize 1 - <P, chi>; Q = P - V^+ (I / tau + sum Phi^+(Y)) V
      lmi.constant(q_block, id, -1.0 / tau);
      for (const CMatrix& g : gr) {
        const int y = lmi.var(-(g * target).trace().real());
        lmi.coef(y, p_block, g, -1.0);
        lmi.coef(y, q_block, g, -1.0);
      }
      lmi.program().set_objective_offset(1.0);
      break;
    }
    case Measure::kRobustness: {
      // maximize -1 + <P, chi> + s tau; Q = (1 / tau - s) I - P - sum Phi^+(Y)
      lmi.constant(q_block, id, 1.0 / tau);
      for (const CMatrix& g : gr) {
        const int y = lmi.var((g * target).trace().real());
        lmi.coef(y, p_block, g, -1.0);
        lmi.coef(y, q_block, g, 1.0);
      }
      const int s = lmi.var(tau);
      lmi.program().add_entry(s, s_block, 0, 0, -1.0);
      lmi.coef(s, q_block, id, 1.0);
      lmi.program().set_objective_offset(-1.0);
      break;
    }
    case Measure::kFidelity: {
      // maximize -g; Q = g I - chi - sum Phi^+(Y)
      lmi.constant(q_block, target, -1.0);
      lmi.coef(lmi.var(-1.0), q_block, id, -1.0);
      break;
    }
  }

  // Multipliers Y of the process links; the classical cone's dual requires the
  // model adjoint of Y to be feasible.
  std::array<CMatrix, 8> a_ops;
  for (int mu = 0; mu < 8; ++mu) a_ops[mu] = strategy_operator(single_party_strategies()[mu], alice);
  std::array<CMatrix, 64> ab_ops;
  for (int z = 0; z < 8; ++z)
    for (int e = 0; e < 8; ++e)
      ab_ops[8 * z + e] = kron(a_ops[z], strategy_operator(single_party_strategies()[e], bob));
  const CMatrix id2 = CMatrix::Identity(2, 2);

  const int n_in = static_cast<int>(inputs.size());
  std::vector<std::array<int, 8>> cone_blocks(n_in);
  int lhv_block = -1;
  if (c == Correlation::kSteering) {
    for (int in = 0; in < n_in; ++in)
      for (int mu = 0; mu < 8; ++mu) cone_blocks[in][mu] = lmi.herm_block(2);
  } else {
    lhv_block = lmi.program().add_nonneg_block(n_in * 64, "lmi");
  }

  for (int in = 0; in < n_in; ++in) {
    const CMatrix rho = product_input_state(inputs[in]);
    for (const CMatrix& g : g4) {
      const int y = lmi.var(0.0);
      lmi.coef(y, q_block, v.adjoint() * process_adjoint(g, rho) * v, 1.0);
      if (c == Correlation::kSteering) {
        for (int mu = 0; mu < 8; ++mu) {
          const CMatrix red = partial_trace_first(kron(a_ops[mu], id2) * g);
          lmi.coef(y, cone_blocks[in][mu], (red + red.adjoint()) / 2.0, -1.0);
        }
      } else {
        for (int i = 0; i < 64; ++i) {
          const double w = (ab_ops[i] * g).trace().real();
          if (std::abs(w) > 1e-15) lmi.program().add_entry(y, lhv_block, 64 * in + i, 64 * in + i, -w);
        }
      }
    }
  }

  sdp::SdpSolution s = sdp::solve(lmi.program(), opt.solver);
  const double value = m == Measure::kFidelity ? -s.dual_objective : s.dual_objective;
  return {value, s.status, s.duality_gap};
}

bool WitnessCheck::ok(double tol) const {
  return min_eig_witness >= -tol && min_eig_complement >= -tol && trace_violation <= tol &&
         min_eig_classical >= -tol && min_eig_outputs >= -tol && link_residual <= tol &&
         identity_residual <= tol && value_residual <= tol;
}

WitnessCheck verify_witness(const QuantifierReport& r, const ProcessMatrix& chi, const QuantifierOptions& opt) {
  WitnessCheck w;
  const double tau = chi.trace_convention();
  const CMatrix& x = r.witness;
  auto min_eig = [](const CMatrix& h) {
    return Eigen::SelfAdjointEigenSolver<CMatrix>((h + h.adjoint()) / 2.0, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  };
  w.min_eig_witness = min_eig(x);
  const double tr = x.trace().real();
  double objective = 0.0;
  switch (r.measure) {
    case Measure::kComposition:
      w.min_eig_complement = min_eig(chi.chi() - x);
      objective = 1.0 - tr / tau;
      break;
    case Measure::kRobustness:
      w.min_eig_complement = min_eig(x - chi.chi());
      w.trace_violation = std::max(0.0, tau - tr);
      objective = tr / tau - 1.0;
      break;
    case Measure::kFidelity:
      w.trace_violation = std::abs(tr - 1.0);
      objective = (x * chi.chi()).trace().real();
      break;
  }
  w.value_residual = std::abs(objective - r.raw_value);

  const auto& inputs = product_inputs();
  const MeasurementTriad alice = MeasurementTriad::pauli();
  const MeasurementTriad bob = bob_triad(r.correlation, opt);
  std::vector<CMatrix> model;
  if (r.correlation == Correlation::kSteering) {
    if (!r.lhs) throw Error(ErrorCode::kInvalidArgument, "report carries no LHS variables");
    model = LhsOutputMap(alice, bob).apply(*r.lhs);
    for (const auto& row : r.lhs->sigma)
      for (const auto& s : row) w.min_eig_classical = std::min(w.min_eig_classical, min_eig(s));
  } else {
    if (!r.lhv) throw Error(ErrorCode::kInvalidArgument, "report carries no LHV variables");
    model = LhvOutputMap(alice, bob).apply(*r.lhv);
    for (const auto& row : r.lhv->weights)
      for (double p : row) w.min_eig_classical = std::min(w.min_eig_classical, p);
  }

  std::vector<CMatrix> outputs;
  for (std::size_t in = 0; in < inputs.size(); ++in) {
    outputs.push_back(apply_chi(x, product_input_state(inputs[in])));
    w.min_eig_outputs = std::min(w.min_eig_outputs, min_eig(outputs.back()));
    w.link_residual = std::max(w.link_residual, (outputs.back() - model[in]).cwiseAbs().maxCoeff());
  }

  // Sums over the two eigenstates of any axis on either side must agree with
  // the sums over the X eigenstates (input index 6 a + b, axis = index / 2).
  auto out = [&](int a, int b) { return outputs[6 * a + b]; };
  for (int j = 0; j < 6; ++j) {
    for (int axis = 1; axis < 3; ++axis) {
      CMatrix d = out(2 * axis, j) + out(2 * axis + 1, j) - out(0, j) - out(1, j);
      w.identity_residual = std::max(w.identity_residual, d.cwiseAbs().maxCoeff());
      d = out(j, 2 * axis) + out(j, 2 * axis + 1) - out(j, 0) - out(j, 1);
      w.identity_residual = std::max(w.identity_residual, d.cwiseAbs().maxCoeff());
    }
  }
  return w;
}

std::string report_to_json(const QuantifierReport& r) {
  nlohmann::ordered_json j;
  j["correlation"] = to_string(r.correlation);
  j["measure"] = to_string(r.measure);
  j["value"] = r.value;
  j["raw_value"] = r.raw_value;
  j["clamped"] = r.clamped;
  j["status"] = sdp::status_name(r.status);
  j["primal_objective"] = r.primal_objective;
  j["dual_objective"] = r.dual_objective;
  j["duality_gap"] = r.duality_gap;
  j["primal_infeasibility"] = r.primal_infeasibility;
  j["dual_infeasibility"] = r.dual_infeasibility;
  j["iterations"] = r.iterations;
  j["seconds"] = r.seconds;
  nlohmann::json w = nlohmann::json::array();
  for (int i = 0; i < r.witness.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < r.witness.cols(); ++k) row.push_back({r.witness(i, k).real(), r.witness(i, k).imag()});
    w.push_back(row);
  }
  j["witness"] = w;
  return j.dump(2);
}

}  // namespace qpc
