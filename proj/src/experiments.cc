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

#include "qpc/experiments.h"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qpc/error.h"

namespace qpc {
namespace {

using nlohmann::ordered_json;

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

std::string fmt6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double parse_number(const std::string& s) {
  if (s == "nan") return NAN;
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kSchemaError, "not a number: '" + s + "'");
  }
}

ordered_json number_json(double v) { return std::isnan(v) ? ordered_json(nullptr) : ordered_json(v); }

double number_from(const nlohmann::json& j, const std::string& path) {
  if (j.is_null()) return NAN;
  if (!j.is_number()) throw Error(ErrorCode::kSchemaError, path + ": expected a number");
  return j.get<double>();
}

ordered_json quantity_json(const QuantityResult& q) {
  ordered_json j;
  j["value"] = number_json(q.value);
  j["status"] = q.status;
  j["gap"] = number_json(q.gap);
  return j;
}

QuantityResult quantity_from(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw Error(ErrorCode::kSchemaError, path + ": expected an object");
  QuantityResult q;
  q.value = number_from(j.value("value", nlohmann::json()), path + ".value");
  if (!j.contains("status") || !j["status"].is_string()) {
    throw Error(ErrorCode::kSchemaError, path + ".status: expected a string");
  }
  q.status = j["status"].get<std::string>();
  q.gap = number_from(j.value("gap", nlohmann::json()), path + ".gap");
  return q;
}

const char* kCsvHeader = "lambda,alpha_steer,beta_steer,alpha_bell,beta_bell,f_expt,f_incapable,f_unable,status,gap";

void run_quantity(QuantityResult& q, Correlation c, Measure m, const ProcessMatrix& chi, const QuantifierOptions& opt) {
  try {
    QuantifierReport r = quantify(c, m, chi, opt);
    q.value = r.value;
    q.status = sdp::status_name(r.status);
    q.gap = r.duality_gap;
  } catch (const Error& e) {
    q.value = NAN;
    q.status = std::string("error: ") + e.what();
    q.gap = NAN;
  }
}

}  // namespace

std::vector<double> default_lambda_grid() {
  std::vector<double> out;
  for (int k = 0; k <= 8; ++k) out.push_back(k * std::numbers::pi / 4);
  return out;
}

void SweepConfig::validate() const {
  if (lambdas.empty()) throw Error(ErrorCode::kInvalidArgument, "lambda grid is empty");
  if (tests.empty()) throw Error(ErrorCode::kInvalidArgument, "no test kinds selected");
  if (shots < 1) throw Error(ErrorCode::kInvalidArgument, "shots must be at least 1");
  if (noise) noise->validate();
}

const char* to_string(Provenance p) { return p == Provenance::kSimulated ? "simulated" : "ingested"; }

bool operator==(const QuantityResult& a, const QuantityResult& b) {
  return same(a.value, b.value) && a.status == b.status && same(a.gap, b.gap);
}

bool operator==(const ResultRow& a, const ResultRow& b) {
  return same(a.lambda, b.lambda) && a.alpha_steer == b.alpha_steer && a.beta_steer == b.beta_steer &&
         a.alpha_bell == b.alpha_bell && a.beta_bell == b.beta_bell && same(a.f_expt, b.f_expt) &&
         a.f_incapable == b.f_incapable && a.f_unable == b.f_unable && a.provenance == b.provenance;
}

std::string ResultRow::status() const {
  for (const QuantityResult* q : {&alpha_steer, &beta_steer, &alpha_bell, &beta_bell, &f_incapable, &f_unable}) {
    if (q->status == "skipped" || q->status == "optimal") continue;
    return q->status.rfind("error", 0) == 0 ? "error" : q->status;
  }
  return "optimal";
}

double ResultRow::gap() const {
  double g = NAN;
  for (const QuantityResult* q : {&alpha_steer, &beta_steer, &alpha_bell, &beta_bell, &f_incapable, &f_unable}) {
    if (!std::isnan(q->gap)) g = std::isnan(g) ? q->gap : std::max(g, q->gap);
  }
  return g;
}

ResultRow quantify_row(double lambda, const std::optional<ProcessMatrix>& steering_process,
                       const std::optional<ProcessMatrix>& bell_process, Provenance provenance,
                       const QuantifierOptions& opt) {
  ResultRow row;
  row.lambda = lambda;
  row.provenance = provenance;
  const ProcessMatrix target = process_from_unitary(cphase(lambda));
  if (steering_process) {
    run_quantity(row.alpha_steer, Correlation::kSteering, Measure::kComposition, *steering_process, opt);
    run_quantity(row.beta_steer, Correlation::kSteering, Measure::kRobustness, *steering_process, opt);
    run_quantity(row.f_incapable, Correlation::kSteering, Measure::kFidelity, target, opt);
    row.f_expt = process_fidelity(*steering_process, target);
  }
  if (bell_process) {
    run_quantity(row.alpha_bell, Correlation::kBell, Measure::kComposition, *bell_process, opt);
    run_quantity(row.beta_bell, Correlation::kBell, Measure::kRobustness, *bell_process, opt);
    run_quantity(row.f_unable, Correlation::kBell, Measure::kFidelity, target, opt);
    if (!steering_process) row.f_expt = process_fidelity(*bell_process, target);
  }
  return row;
}

std::vector<ResultRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < cfg.lambdas.size(); ++i) {
    const double lambda = cfg.lambdas[i];
    std::optional<ProcessMatrix> processes[2];
    std::string failure[2];
    for (TestKind t : cfg.tests) {
      const int ti = static_cast<int>(t);
      try {
        const auto circuits = build_circuits(t, lambda);
        QptResult r = cfg.exact ? reconstruct_process_exact(circuits, t, cfg.noise)
                                : reconstruct_process(simulate_dataset(circuits, t, lambda, cfg.noise, cfg.shots,
                                                                       derive_seed(cfg.seed, 2 * i + ti)));
        processes[ti] = r.chi_phys;
      } catch (const Error& e) {
        failure[ti] = std::string("error: ") + e.what();
      }
    }
    ResultRow row = quantify_row(lambda, processes[0], processes[1], Provenance::kSimulated, cfg.quantifier);
    if (!failure[0].empty()) row.alpha_steer.status = row.beta_steer.status = failure[0];
    if (!failure[1].empty()) row.alpha_bell.status = row.beta_bell.status = failure[1];
    rows.push_back(std::move(row));
  }
  return rows;
}

TomographyDataset ingest_counts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  TomographyDataset d = dataset_from_json(ss.str());
  validate_dataset(d);
  return d;
}

ExportFormat parse_export_format(std::string_view s) {
  if (s == "csv") return ExportFormat::kCsv;
  if (s == "json") return ExportFormat::kJson;
  throw Error(ErrorCode::kInvalidArgument, "format must be 'csv' or 'json'");
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const ResultRow& r : rows) {
    for (double v : {r.lambda, r.alpha_steer.value, r.beta_steer.value, r.alpha_bell.value, r.beta_bell.value,
                     r.f_expt, r.f_incapable.value, r.f_unable.value}) {
      out += fmt6(v) + ",";
    }
    out += r.status() + "," + fmt6(r.gap()) + "\n";
  }
  return out;
}

// Each quantity takes the row status and gap; per-quantity detail and the
// provenance live only in the JSON form.
std::vector<ResultRow> rows_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw Error(ErrorCode::kSchemaError, "CSV header mismatch");
  std::vector<ResultRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10) {
      throw Error(ErrorCode::kSchemaError, "line " + std::to_string(line_no) + ": expected 10 fields");
    }
    ResultRow r;
    r.lambda = parse_number(cells[0]);
    const std::string status = cells[8];
    const double gap = parse_number(cells[9]);
    QuantityResult* q[] = {&r.alpha_steer, &r.beta_steer, &r.alpha_bell, &r.beta_bell};
    for (int k = 0; k < 4; ++k) q[k]->value = parse_number(cells[1 + k]);
    r.f_expt = parse_number(cells[5]);
    r.f_incapable.value = parse_number(cells[6]);
    r.f_unable.value = parse_number(cells[7]);
    for (QuantityResult* x : {&r.alpha_steer, &r.beta_steer, &r.alpha_bell, &r.beta_bell, &r.f_incapable, &r.f_unable}) {
      if (std::isnan(x->value)) continue;
      x->status = status;
      x->gap = gap;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string rows_to_json(const std::vector<ResultRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const ResultRow& r : rows) {
    ordered_json j;
    j["lambda"] = r.lambda;
    j["alpha_steer"] = quantity_json(r.alpha_steer);
    j["beta_steer"] = quantity_json(r.beta_steer);
    j["alpha_bell"] = quantity_json(r.alpha_bell);
    j["beta_bell"] = quantity_json(r.beta_bell);
    j["f_expt"] = number_json(r.f_expt);
    j["f_incapable"] = quantity_json(r.f_incapable);
    j["f_unable"] = quantity_json(r.f_unable);
    j["status"] = r.status();
    j["gap"] = number_json(r.gap());
    j["provenance"] = to_string(r.provenance);
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

std::vector<ResultRow> rows_from_json(std::string_view text) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string("invalid JSON: ") + e.what());
  }
  if (!arr.is_array()) throw Error(ErrorCode::kSchemaError, "$: expected an array of rows");
  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = "$[" + std::to_string(i) + "]";
    const nlohmann::json& j = arr[i];
    if (!j.is_object()) throw Error(ErrorCode::kSchemaError, path + ": expected an object");
    auto field = [&](const char* name) -> const nlohmann::json& {
      if (!j.contains(name)) throw Error(ErrorCode::kSchemaError, path + "." + name + ": missing");
      return j.at(name);
    };
    ResultRow r;
    r.lambda = number_from(field("lambda"), path + ".lambda");
    r.alpha_steer = quantity_from(field("alpha_steer"), path + ".alpha_steer");
    r.beta_steer = quantity_from(field("beta_steer"), path + ".beta_steer");
    r.alpha_bell = quantity_from(field("alpha_bell"), path + ".alpha_bell");
    r.beta_bell = quantity_from(field("beta_bell"), path + ".beta_bell");
    r.f_expt = number_from(field("f_expt"), path + ".f_expt");
    r.f_incapable = quantity_from(field("f_incapable"), path + ".f_incapable");
    r.f_unable = quantity_from(field("f_unable"), path + ".f_unable");
    const nlohmann::json& prov = field("provenance");
    if (prov == "simulated") {
      r.provenance = Provenance::kSimulated;
    } else if (prov == "ingested") {
      r.provenance = Provenance::kIngested;
    } else {
      throw Error(ErrorCode::kSchemaError, path + ".provenance: expected 'simulated' or 'ingested'");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void export_rows(const std::vector<ResultRow>& rows, ExportFormat format, const std::string& path) {
  if (rows.empty()) throw Error(ErrorCode::kInvalidArgument, "refusing to export an empty result set");
  const std::string text = format == ExportFormat::kCsv ? rows_to_csv(rows) : rows_to_json(rows);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

}  // namespace qpc
