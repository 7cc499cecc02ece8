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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "qpc/error.h"

namespace qpc {

namespace {

constexpr const char* kOutcomes[4] = {"++", "+-", "-+", "--"};

std::vector<std::string> prep_gates(InputToken t) {
  std::vector<std::string> g;
  if (t.sign < 0) g.push_back("x");
  if (t.axis != Axis::kZ) g.push_back("h");
  if (t.axis == Axis::kY) g.push_back("s");
  return g;
}

std::vector<std::string> measure_gates(Axis a) {
  switch (a) {
    case Axis::kX: return {"h"};
    case Axis::kY: return {"sdg", "h"};
    case Axis::kZ: return {};
  }
  return {};
}

CMatrix on_qubit(const CMatrix& op, int qubit) {
  return qubit == 0 ? kron(op, CMatrix::Identity(2, 2)) : kron(CMatrix::Identity(2, 2), op);
}

KrausChannel lift(const KrausChannel& ch, int qubit) {
  std::vector<CMatrix> ops;
  for (const auto& k : ch.operators()) ops.push_back(on_qubit(k, qubit));
  return KrausChannel(std::move(ops));
}

class NoisyState {
 public:
  explicit NoisyState(const std::optional<NoiseModel>& noise) : rho_(ket_bra(4, 0, 0)) {
    if (!noise) return;
    noise->validate();
    if (noise->num_qubits() < 2) throw Error(ErrorCode::kInvalidModel, "noise model needs two qubits");
    for (int q = 0; q < 2; ++q) {
      const int qs[] = {q};
      one_.push_back(lift(calibrated_gate_noise(*noise, GateKind::kOneQubit, qs), q));
    }
    const int both[] = {0, 1};
    two_ = calibrated_gate_noise(*noise, GateKind::kTwoQubit, both);
  }

  void gate1(const CMatrix& u, int qubit) {
    CMatrix full = on_qubit(u, qubit);
    rho_ = full * rho_ * full.adjoint();
    if (!one_.empty()) rho_ = one_[qubit].apply(rho_);
  }

  void process(const KrausChannel& ch) {
    rho_ = ch.apply(rho_);
    if (two_) rho_ = two_->apply(rho_);
  }

  const CMatrix& rho() const { return rho_; }

 private:
  CMatrix rho_;
  std::vector<KrausChannel> one_;
  std::optional<KrausChannel> two_;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string_view to_string(TestKind t) { return t == TestKind::kSteering ? "steering" : "bell"; }

TestKind parse_test_kind(std::string_view s) {
  if (s == "steering") return TestKind::kSteering;
  if (s == "bell") return TestKind::kBell;
  throw Error(ErrorCode::kInvalidArgument, "test kind must be 'steering' or 'bell'");
}

char axis_letter(Axis a) { return "XYZ"[static_cast<int>(a)]; }

Axis parse_axis(char c) {
  switch (c) {
    case 'X': return Axis::kX;
    case 'Y': return Axis::kY;
    case 'Z': return Axis::kZ;
  }
  throw Error(ErrorCode::kInvalidArgument, std::string("bad axis '") + c + "'");
}

std::string to_string(InputToken t) { return std::string(1, axis_letter(t.axis)) + (t.sign > 0 ? "+" : "-"); }

InputToken parse_input_token(std::string_view s) {
  if (s.size() < 2) throw Error(ErrorCode::kInvalidArgument, "bad input token '" + std::string(s) + "'");
  Axis a = parse_axis(s[0]);
  std::string_view rest = s.substr(1);
  if (rest == "+") return {a, +1};
  if (rest == "-" || rest == "−") return {a, -1};
  throw Error(ErrorCode::kInvalidArgument, "bad input token '" + std::string(s) + "'");
}

CVector input_ket(InputToken t) {
  CVector psi = CVector::Zero(2);
  psi(0) = 1.0;
  for (const auto& g : prep_gates(t)) psi = gate(g).matrix() * psi;
  return psi;
}

const std::array<InputToken, 4>& qpt_input_tokens() {
  static const std::array<InputToken, 4> kTokens = {
      InputToken{Axis::kZ, +1}, InputToken{Axis::kZ, -1}, InputToken{Axis::kX, +1}, InputToken{Axis::kY, +1}};
  return kTokens;
}

std::vector<Circuit> build_circuits(TestKind test, double lambda) {
  if (!std::isfinite(lambda)) throw Error(ErrorCode::kInvalidArgument, "lambda must be finite");
  return build_circuits(test, KrausChannel::unitary(cphase(lambda)));
}

std::vector<Circuit> build_circuits(TestKind test, const KrausChannel& process, UrParams rotation) {
  if (process.dim() != 4) throw Error(ErrorCode::kDimMismatch, "process must act on two qubits");
  std::vector<Circuit> out;
  out.reserve(144);
  for (const auto& a : qpt_input_tokens()) {
    for (const auto& b : qpt_input_tokens()) {
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          Circuit c{{a, b}, process, std::nullopt, {static_cast<Axis>(k), static_cast<Axis>(l)}};
          if (test == TestKind::kBell) c.bell_rotation = rotation;
          out.push_back(std::move(c));
        }
      }
    }
  }
  return out;
}

Distribution exact_probabilities(const Circuit& c, const std::optional<NoiseModel>& noise) {
  NoisyState st(noise);
  for (int q = 0; q < 2; ++q) {
    for (const auto& g : prep_gates(c.input[q])) st.gate1(gate(g).matrix(), q);
  }
  st.process(c.process);
  if (c.bell_rotation) st.gate1(ur(c.bell_rotation->phi, c.bell_rotation->theta).adjoint().matrix(), 1);
  for (int q = 0; q < 2; ++q) {
    for (const auto& g : measure_gates(c.setting[q])) st.gate1(gate(g).matrix(), q);
  }
  std::vector<double> p(4);
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    p[i] = std::max(0.0, st.rho()(i, i).real());
    total += p[i];
  }
  for (auto& v : p) v /= total;
  if (noise) p = readout_apply(std::span<const ReadoutError>(noise->readout.data(), 2), p);
  Distribution d;
  std::copy(p.begin(), p.end(), d.begin());
  return d;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t ordinal) {
  return splitmix64(splitmix64(master) ^ (ordinal + 0x632be59bd9b4e019ULL));
}

CountsRecord sample_counts(const Circuit& c, const std::optional<NoiseModel>& noise, std::uint64_t shots,
                           std::uint64_t seed) {
  if (shots < 1) throw Error(ErrorCode::kInvalidArgument, "shots must be >= 1");
  const Distribution p = exact_probabilities(c, noise);
  std::array<double, 4> cdf{};
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) cdf[i] = (acc += p[i]);
  std::mt19937_64 rng(seed);
  CountsRecord r{c.input, c.setting, shots, {}};
  for (std::uint64_t s = 0; s < shots; ++s) {
    // 53 random bits, independent of the standard library's distributions
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    int k = 0;
    while (k < 3 && u >= cdf[k]) ++k;
    ++r.counts[k];
  }
  return r;
}

TomographyDataset simulate_dataset(TestKind test, double lambda, const std::optional<NoiseModel>& noise,
                                   std::uint64_t shots, std::uint64_t seed) {
  return simulate_dataset(build_circuits(test, lambda), test, lambda, noise, shots, seed);
}

TomographyDataset simulate_dataset(const std::vector<Circuit>& circuits, TestKind test, double lambda,
                                   const std::optional<NoiseModel>& noise, std::uint64_t shots, std::uint64_t seed) {
  TomographyDataset d;
  d.test = test;
  d.lambda = lambda;
  d.shots = shots;
  if (test == TestKind::kBell) d.ur = circuits.empty() ? UrParams{} : circuits.front().bell_rotation.value_or(UrParams{});
  for (size_t i = 0; i < circuits.size(); ++i) {
    d.records.push_back(sample_counts(circuits[i], noise, shots, derive_seed(seed, i)));
  }
  return d;
}

void validate_dataset(const TomographyDataset& d) {
  if (d.shots < 1) throw Error(ErrorCode::kSchemaError, "shots: must be >= 1");
  if ((d.test == TestKind::kBell) != d.ur.has_value()) {
    throw Error(ErrorCode::kSchemaError, "ur: must be present exactly for the bell test");
  }
  std::set<std::string> seen;
  for (size_t i = 0; i < d.records.size(); ++i) {
    const auto& r = d.records[i];
    std::uint64_t total = 0;
    for (auto c : r.counts) total += c;
    const std::string key = to_string(r.input[0]) + " " + to_string(r.input[1]) + " / " +
                            axis_letter(r.setting[0]) + axis_letter(r.setting[1]);
    if (r.shots != d.shots || total != d.shots) {
      throw Error(ErrorCode::kShotMismatch, "records[" + std::to_string(i) + "] (" + key + "): counts sum to " +
                                                std::to_string(total) + ", declared " + std::to_string(d.shots));
    }
    seen.insert(key);
  }
  for (const auto& a : qpt_input_tokens()) {
    for (const auto& b : qpt_input_tokens()) {
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          const std::string key = to_string(a) + " " + to_string(b) + " / " + axis_letter(static_cast<Axis>(k)) +
                                  axis_letter(static_cast<Axis>(l));
          if (!seen.count(key)) throw Error(ErrorCode::kSchemaError, "records: missing (input, setting) " + key);
        }
      }
    }
  }
}

std::string outcome_label(int outcome) { return kOutcomes[outcome]; }

std::string dataset_to_json(const TomographyDataset& d) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["test"] = to_string(d.test);
  j["lambda"] = d.lambda;
  j["shots"] = d.shots;
  if (d.ur) j["ur"] = {{"phi", d.ur->phi}, {"theta", d.ur->theta}};
  j["records"] = ordered_json::array();
  for (const auto& r : d.records) {
    ordered_json counts;
    for (int i = 0; i < 4; ++i) counts[kOutcomes[i]] = r.counts[i];
    j["records"].push_back({{"input", to_string(r.input[0]) + " " + to_string(r.input[1])},
                            {"setting", std::string{axis_letter(r.setting[0]), axis_letter(r.setting[1])}},
                            {"counts", counts}});
  }
  return j.dump(1);
}

namespace {

using nlohmann::json;

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::kSchemaError, path + key + ": missing");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw Error(ErrorCode::kSchemaError, path + ": expected a number");
  return j.get<double>();
}

std::uint64_t count(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw Error(ErrorCode::kSchemaError, path + ": expected a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

std::string normalize_minus(std::string s) {
  const std::string minus = "−";
  for (size_t p; (p = s.find(minus)) != std::string::npos;) s.replace(p, minus.size(), "-");
  return s;
}

}  // namespace

TomographyDataset dataset_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSchemaError, std::string("counts file: ") + e.what());
  }
  TomographyDataset d;
  const json& test = field(j, "test", "");
  if (!test.is_string()) throw Error(ErrorCode::kSchemaError, "test: expected a string");
  try {
    d.test = parse_test_kind(test.get<std::string>());
  } catch (const Error&) {
    throw Error(ErrorCode::kSchemaError, "test: must be 'steering' or 'bell'");
  }
  d.lambda = number(field(j, "lambda", ""), "lambda");
  d.shots = count(field(j, "shots", ""), "shots");
  if (j.contains("ur") && !j["ur"].is_null()) {
    d.ur = UrParams{number(field(j["ur"], "phi", "ur."), "ur.phi"), number(field(j["ur"], "theta", "ur."), "ur.theta")};
  }
  const json& recs = field(j, "records", "");
  if (!recs.is_array()) throw Error(ErrorCode::kSchemaError, "records: expected an array");
  for (size_t i = 0; i < recs.size(); ++i) {
    const std::string path = "records[" + std::to_string(i) + "].";
    const json& r = recs[i];
    CountsRecord rec;
    rec.shots = d.shots;
    const json& in = field(r, "input", path);
    const json& st = field(r, "setting", path);
    if (!in.is_string() || !st.is_string()) throw Error(ErrorCode::kSchemaError, path + "input/setting: strings");
    const std::string input = normalize_minus(in.get<std::string>());
    const std::string setting = st.get<std::string>();
    const auto space = input.find(' ');
    try {
      if (space == std::string::npos) throw Error(ErrorCode::kInvalidArgument, "");
      rec.input = {parse_input_token(input.substr(0, space)), parse_input_token(input.substr(space + 1))};
      if (setting.size() != 2) throw Error(ErrorCode::kInvalidArgument, "");
      rec.setting = {parse_axis(setting[0]), parse_axis(setting[1])};
    } catch (const Error&) {
      throw Error(ErrorCode::kSchemaError, path + "input/setting: malformed ('" + input + "', '" + setting + "')");
    }
    const json& counts = field(r, "counts", path);
    if (!counts.is_object()) throw Error(ErrorCode::kSchemaError, path + "counts: expected an object");
    for (auto it = counts.begin(); it != counts.end(); ++it) {
      const std::string key = normalize_minus(it.key());
      auto pos = std::find(std::begin(kOutcomes), std::end(kOutcomes), key);
      if (pos == std::end(kOutcomes)) throw Error(ErrorCode::kSchemaError, path + "counts." + it.key() + ": unknown outcome");
      rec.counts[pos - std::begin(kOutcomes)] = count(it.value(), path + "counts." + it.key());
    }
    d.records.push_back(rec);
  }
  validate_dataset(d);
  return d;
}

}  // namespace qpc
