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

// Command-line front end: simulate -> tomo -> quantify / fidelity, or sweep.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qpc/error.h"
#include "qpc/experiments.h"
#include "qpc/quantifiers.h"
#include "qpc/simulator.h"
#include "qpc/tomography.h"

namespace {

using namespace qpc;

// Accepts plain radians or a multiple of pi such as "0.5pi" or "pi".
double parse_lambda(const std::string& s) {
  std::string t = s;
  double scale = 1.0;
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    scale = std::numbers::pi;
    t.erase(t.size() - 2);
    if (!t.empty() && t.back() == '*') t.pop_back();
    if (t.empty()) return scale;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size()) throw Error(ErrorCode::kInvalidArgument, "cannot parse lambda '" + s + "'");
  return v * scale;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f || !(f << text)) throw Error(ErrorCode::kIoError, "cannot write " + out);
}

std::optional<NoiseModel> noise_from(const std::string& path) {
  if (path.empty()) return std::nullopt;
  if (path == "santiago") return santiago_noise_model();
  return load_noise_model(path);
}

struct Options {
  std::string test = "steering";
  std::vector<std::string> tests;
  std::string lambda = "pi";
  std::vector<std::string> lambdas;
  std::uint64_t shots = 8192;
  std::uint64_t seed = 1;
  std::string noise;
  bool exact = false;
  std::string in;
  std::string out;
  std::string format = "csv";
};

int cmd_simulate(const Options& o) {
  TomographyDataset d =
      simulate_dataset(parse_test_kind(o.test), parse_lambda(o.lambda), noise_from(o.noise), o.shots, o.seed);
  emit(dataset_to_json(d) + "\n", o.out);
  return 0;
}

int cmd_tomo(const Options& o) {
  if (o.in.empty() && !o.exact) throw Error(ErrorCode::kInvalidArgument, "tomo needs --in <counts.json> or --exact");
  const TestKind t = parse_test_kind(o.test);
  const QptResult r = !o.in.empty()
                          ? reconstruct_process(ingest_counts(o.in))
                          : reconstruct_process_exact(build_circuits(t, parse_lambda(o.lambda)), t, noise_from(o.noise));
  std::fprintf(stderr, "physicalization distance %.3e\n", r.ml_distance);
  emit(process_to_json(r.chi_phys) + "\n", o.out);
  return 0;
}

int cmd_quantify(const Options& o) {
  if (o.in.empty()) throw Error(ErrorCode::kInvalidArgument, "quantify needs --in <process.json>");
  const ProcessMatrix chi = process_from_json(read_text(o.in));
  std::vector<Correlation> kinds;
  if (o.tests.empty()) {
    kinds = {Correlation::kSteering, Correlation::kBell};
  } else {
    for (const auto& t : o.tests) {
      kinds.push_back(parse_test_kind(t) == TestKind::kSteering ? Correlation::kSteering : Correlation::kBell);
    }
  }
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  bool all_optimal = true;
  for (Correlation c : kinds) {
    for (Measure m : {Measure::kComposition, Measure::kRobustness}) {
      QuantifierReport r = quantify(c, m, chi);
      all_optimal = all_optimal && r.status == sdp::SolveStatus::kOptimal;
      std::fprintf(stderr, "%-8s %-11s %.6f  (%s, gap %.1e, %.1fs)\n", to_string(c), to_string(m), r.value,
                   sdp::status_name(r.status), r.duality_gap, r.seconds);
      out.push_back(nlohmann::ordered_json::parse(report_to_json(r)));
    }
  }
  emit(out.dump(2) + "\n", o.out);
  return all_optimal ? 0 : 1;
}

int cmd_fidelity(const Options& o) {
  const double lambda = parse_lambda(o.lambda);
  const ProcessMatrix target = process_from_unitary(cphase(lambda));
  nlohmann::ordered_json j;
  j["lambda"] = lambda;
  bool all_optimal = true;
  if (!o.in.empty()) j["f_expt"] = process_fidelity(process_from_json(read_text(o.in)), target);
  for (Correlation c : {Correlation::kSteering, Correlation::kBell}) {
    QuantifierReport r = quantify(c, Measure::kFidelity, target);
    all_optimal = all_optimal && r.status == sdp::SolveStatus::kOptimal;
    j[c == Correlation::kSteering ? "f_incapable" : "f_unable"] = r.value;
  }
  emit(j.dump(2) + "\n", o.out);
  return all_optimal ? 0 : 1;
}

int cmd_sweep(const Options& o) {
  SweepConfig cfg;
  if (!o.lambdas.empty()) {
    cfg.lambdas.clear();
    for (const auto& s : o.lambdas) cfg.lambdas.push_back(parse_lambda(s));
  }
  if (!o.tests.empty()) {
    cfg.tests.clear();
    for (const auto& t : o.tests) cfg.tests.push_back(parse_test_kind(t));
  }
  cfg.shots = o.shots;
  cfg.seed = o.seed;
  cfg.noise = noise_from(o.noise);
  cfg.exact = o.exact;
  const ExportFormat format = parse_export_format(o.format);
  const auto rows = run_sweep(cfg);
  if (o.out.empty()) {
    std::cout << (format == ExportFormat::kCsv ? rows_to_csv(rows) : rows_to_json(rows));
  } else {
    export_rows(rows, format, o.out);
  }
  for (const auto& r : rows) {
    if (r.status() != "optimal") return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-correlation generating process toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* simulate = app.add_subcommand("simulate", "Sample tomography counts for CPHASE(lambda)");
  simulate->add_option("--test", o.test, "steering or bell")->capture_default_str();
  simulate->add_option("--lambda", o.lambda, "CPHASE shift in radians, or e.g. 0.5pi")->capture_default_str();
  simulate->add_option("--shots", o.shots, "shots per circuit")->capture_default_str();
  simulate->add_option("--seed", o.seed, "master seed")->capture_default_str();
  simulate->add_option("--noise", o.noise, "noise model JSON, or santiago");
  simulate->add_option("--out", o.out, "counts JSON (stdout if omitted)");

  auto* tomo = app.add_subcommand("tomo", "Reconstruct a physical process matrix");
  tomo->add_option("--in", o.in, "counts JSON");
  tomo->add_flag("--exact", o.exact, "use exact probabilities instead of counts");
  tomo->add_option("--test", o.test, "steering or bell (with --exact)")->capture_default_str();
  tomo->add_option("--lambda", o.lambda, "CPHASE shift (with --exact)")->capture_default_str();
  tomo->add_option("--noise", o.noise, "noise model JSON (with --exact)");
  tomo->add_option("--out", o.out, "process JSON (stdout if omitted)");

  auto* quant = app.add_subcommand("quantify", "Composition and robustness of a process");
  quant->add_option("--in", o.in, "process JSON")->required();
  quant->add_option("--test", o.tests, "steering and/or bell (default both)");
  quant->add_option("--out", o.out, "report JSON (stdout if omitted)");

  auto* fid = app.add_subcommand("fidelity", "Incapable/unable fidelity bounds for CPHASE(lambda)");
  fid->add_option("--lambda", o.lambda, "target CPHASE shift")->capture_default_str();
  fid->add_option("--in", o.in, "process JSON to compare against the target");
  fid->add_option("--out", o.out, "JSON output (stdout if omitted)");

  auto* sweep = app.add_subcommand("sweep", "Full pipeline over a grid of CPHASE shifts");
  sweep->add_option("--lambda", o.lambdas, "grid points (default 0, pi/4, ..., 2pi)");
  sweep->add_option("--test", o.tests, "steering and/or bell (default both)");
  sweep->add_option("--shots", o.shots, "shots per circuit")->capture_default_str();
  sweep->add_option("--seed", o.seed, "master seed")->capture_default_str();
  sweep->add_option("--noise", o.noise, "noise model JSON, or santiago");
  sweep->add_flag("--exact", o.exact, "use exact probabilities instead of counts");
  sweep->add_option("--format", o.format, "csv or json")->capture_default_str();
  sweep->add_option("--out", o.out, "output file (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*simulate) return cmd_simulate(o);
    if (*tomo) return cmd_tomo(o);
    if (*quant) return cmd_quantify(o);
    if (*fid) return cmd_fidelity(o);
    if (*sweep) return cmd_sweep(o);
  } catch (const qpc::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
