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

#include "qpc/tomography.h"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "qpc/error.h"

namespace qpc {

namespace {

double signed_sum(const Distribution& d, int which) {
  // outcome index bit 1: Alice '-', bit 0: Bob '-'
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    const int va = (i & 2) ? -1 : 1, vb = (i & 1) ? -1 : 1;
    s += d[i] * (which == 0 ? va * vb : which == 1 ? va : vb);
  }
  return s;
}

// |a><b| = sum_t c[a][b][t] P_t over the projectors onto Z+, Z-, X+, Y+.
const std::array<std::array<std::array<Complex, 4>, 2>, 2>& single_qubit_decomposition() {
  static const auto kC = [] {
    std::array<std::array<std::array<Complex, 4>, 2>, 2> c{};
    c[0][0] = {1.0, 0.0, 0.0, 0.0};
    c[1][1] = {0.0, 1.0, 0.0, 0.0};
    const Complex hp = (1.0 + kI) / 2.0, hm = (1.0 - kI) / 2.0;
    c[0][1] = {-hp, -hp, 1.0, kI};
    c[1][0] = {-hm, -hm, 1.0, -kI};
    return c;
  }();
  return kC;
}

int token_slot(InputToken t) {
  const auto& tokens = qpt_input_tokens();
  for (int i = 0; i < 4; ++i) {
    if (tokens[i] == t) return i;
  }
  return -1;
}

}  // namespace

void ProbabilityTable::set(int k, int l, const Distribution& d) {
  if (k < 0 || k > 2 || l < 0 || l > 2) throw Error(ErrorCode::kIndexOutOfRange, "setting index");
  joint_[k][l] = d;
}

bool ProbabilityTable::complete() const {
  for (const auto& row : joint_)
    for (const auto& d : row)
      if (!d) return false;
  return true;
}

const Distribution& ProbabilityTable::joint(int k, int l) const {
  if (!joint_[k][l]) {
    throw Error(ErrorCode::kIncompleteGrid,
                std::string("missing setting ") + "XYZ"[k] + "XYZ"[l]);
  }
  return *joint_[k][l];
}

double ProbabilityTable::correlation(int k, int l) const { return signed_sum(joint(k, l), 0); }

double ProbabilityTable::alice_expectation(int k) const {
  double s = 0.0;
  for (int l = 0; l < 3; ++l) s += signed_sum(joint(k, l), 1);
  return s / 3.0;
}

double ProbabilityTable::bob_expectation(int l) const {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) s += signed_sum(joint(k, l), 2);
  return s / 3.0;
}

TriadPair triads_for(TestKind test, const std::optional<UrParams>& ur_params) {
  if (test == TestKind::kSteering) return {MeasurementTriad::pauli(), MeasurementTriad::pauli()};
  const UrParams p = ur_params.value_or(UrParams{});
  return {MeasurementTriad::pauli(), MeasurementTriad::rotated(ur(p.phi, p.theta))};
}

DensityMatrix qst(const ProbabilityTable& table, const TriadPair& triads) {
  if (!table.complete()) {
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) table.joint(k, l);
  }
  const CMatrix id = CMatrix::Identity(2, 2);
  CMatrix rho = CMatrix::Identity(4, 4);
  for (int k = 0; k < 3; ++k) {
    const CMatrix& va = triads.alice.observable(k);
    for (int l = 0; l < 3; ++l) rho += table.correlation(k, l) * kron(va, triads.bob.observable(l));
    rho += table.alice_expectation(k) * kron(va, id);
    rho += table.bob_expectation(k) * kron(id, triads.bob.observable(k));
  }
  rho /= 4.0;
  return DensityMatrix(CMatrix((rho + rho.adjoint()) / 2.0), 1e-9);
}

HermitianView qpt(const OutputSet& outputs) {
  std::array<std::array<const DensityMatrix*, 4>, 4> by_slot{};
  for (const auto& [in, rho] : outputs) {
    const int a = token_slot(in[0]), b = token_slot(in[1]);
    if (a < 0 || b < 0) continue;
    if (rho.dim() != 4) throw Error(ErrorCode::kDimMismatch, "outputs must be two-qubit states");
    by_slot[a][b] = &rho;
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (!by_slot[a][b]) {
        throw Error(ErrorCode::kMissingInput, "no output for input " + to_string(qpt_input_tokens()[a]) + " " +
                                                  to_string(qpt_input_tokens()[b]));
      }
    }
  }
  const auto& c = single_qubit_decomposition();
  std::array<CMatrix, 16> basis_out;
  for (int ket = 0; ket < 4; ++ket) {
    for (int bra = 0; bra < 4; ++bra) {
      const int a1 = ket >> 1, a2 = ket & 1, b1 = bra >> 1, b2 = bra & 1;
      CMatrix out = CMatrix::Zero(4, 4);
      for (int t = 0; t < 4; ++t) {
        for (int u = 0; u < 4; ++u) {
          const Complex w = c[a1][b1][t] * c[a2][b2][u];
          if (w != 0.0) out += w * by_slot[t][u]->matrix();
        }
      }
      basis_out[basis_index(ket, bra)] = out;
    }
  }
  CMatrix chi = chi_from_basis_outputs(basis_out);
  return HermitianView(chi, 1e-9);
}

QptResult physicalize(const HermitianView& chi_raw, Projection projection) {
  if (chi_raw.dim() != 16) throw Error(ErrorCode::kDimMismatch, "process matrix must be 16x16");
  EigenDecomposition e = eigh(chi_raw);
  RVector lam = e.values.cwiseMax(0.0);
  const double tr = lam.sum();
  if (!(tr >= 1e-12)) throw Error(ErrorCode::kZeroTrace, "clipped process matrix has zero trace");
  if (projection == Projection::kClipRenormalize) {
    lam /= tr;
  } else {
    // values are sorted in descending order
    double theta = 0.0, partial = 0.0;
    for (int j = 0; j < e.values.size(); ++j) {
      partial += e.values(j);
      const double t = (partial - 1.0) / (j + 1);
      if (e.values(j) - t > 0.0) theta = t;
    }
    lam = (e.values.array() - theta).cwiseMax(0.0).matrix();
    lam /= lam.sum();
  }
  CMatrix phys = e.vectors * lam.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  phys = (phys + phys.adjoint()) / 2.0;
  return {chi_raw, ProcessMatrix(phys, 1.0), (phys - chi_raw.matrix()).norm(), projection};
}

double process_fidelity(const ProcessMatrix& a, const ProcessMatrix& b) {
  return frob_inner(a.chi(), b.chi()).real();
}

std::vector<std::pair<InputPair, ProbabilityTable>> tables_from_dataset(const TomographyDataset& d) {
  std::vector<std::pair<InputPair, ProbabilityTable>> out;
  for (const auto& r : d.records) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == r.input; });
    if (it == out.end()) {
      out.push_back({r.input, ProbabilityTable{}});
      it = out.end() - 1;
    }
    Distribution p;
    for (int i = 0; i < 4; ++i) p[i] = static_cast<double>(r.counts[i]) / static_cast<double>(r.shots);
    it->second.set(static_cast<int>(r.setting[0]), static_cast<int>(r.setting[1]), p);
  }
  return out;
}

std::vector<std::pair<InputPair, ProbabilityTable>> tables_from_circuits(const std::vector<Circuit>& circuits,
                                                                         const std::optional<NoiseModel>& noise) {
  std::vector<std::pair<InputPair, ProbabilityTable>> out;
  for (const auto& c : circuits) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == c.input; });
    if (it == out.end()) {
      out.push_back({c.input, ProbabilityTable{}});
      it = out.end() - 1;
    }
    it->second.set(static_cast<int>(c.setting[0]), static_cast<int>(c.setting[1]), exact_probabilities(c, noise));
  }
  return out;
}

OutputSet reconstruct_outputs(const std::vector<std::pair<InputPair, ProbabilityTable>>& tables,
                              const TriadPair& triads) {
  OutputSet out;
  for (const auto& [in, table] : tables) out.push_back({in, qst(table, triads)});
  return out;
}

QptResult reconstruct_process(const TomographyDataset& d) {
  return physicalize(qpt(reconstruct_outputs(tables_from_dataset(d), triads_for(d.test, d.ur))));
}

QptResult reconstruct_process_exact(const std::vector<Circuit>& circuits, TestKind test,
                                    const std::optional<NoiseModel>& noise) {
  std::optional<UrParams> rot;
  if (!circuits.empty()) rot = circuits.front().bell_rotation;
  return physicalize(qpt(reconstruct_outputs(tables_from_circuits(circuits, noise), triads_for(test, rot))));
}

std::string process_to_json(const ProcessMatrix& p) {
  nlohmann::json j;
  j["trace_convention"] = p.trace_convention();
  j["chi"] = nlohmann::json::array();
  for (int r = 0; r < 16; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 16; ++c) row.push_back({p.chi()(r, c).real(), p.chi()(r, c).imag()});
    j["chi"].push_back(row);
  }
  return j.dump();
}

ProcessMatrix process_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kSchemaError, std::string("process matrix: ") + e.what());
  }
  if (!j.contains("chi") || !j["chi"].is_array() || j["chi"].size() != 16) {
    throw Error(ErrorCode::kSchemaError, "chi: expected 16 rows");
  }
  double trace = 1.0;
  if (j.contains("trace_convention")) {
    if (!j["trace_convention"].is_number()) throw Error(ErrorCode::kSchemaError, "trace_convention: number");
    trace = j["trace_convention"].get<double>();
  }
  CMatrix chi(16, 16);
  for (int r = 0; r < 16; ++r) {
    const auto& row = j["chi"][r];
    if (!row.is_array() || row.size() != 16) {
      throw Error(ErrorCode::kSchemaError, "chi[" + std::to_string(r) + "]: expected 16 entries");
    }
    for (int c = 0; c < 16; ++c) {
      const auto& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw Error(ErrorCode::kSchemaError,
                    "chi[" + std::to_string(r) + "][" + std::to_string(c) + "]: expected [re, im]");
      }
      chi(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  if (hermiticity_defect(chi) > Tolerances::kFileHermiticity) {
    throw Error(ErrorCode::kNonHermitian, "process matrix payload is not Hermitian");
  }
  return ProcessMatrix(chi, trace);
}

}  // namespace qpc
