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

#ifndef QPC_EXPERIMENTS_H_
#define QPC_EXPERIMENTS_H_

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpc/channels.h"
#include "qpc/quantifiers.h"
#include "qpc/simulator.h"
#include "qpc/tomography.h"

namespace qpc {

// Nine CPHASE shifts 0, pi/4, ..., 2 pi.
std::vector<double> default_lambda_grid();

struct SweepConfig {
  std::vector<double> lambdas = default_lambda_grid();
  std::vector<TestKind> tests = {TestKind::kSteering, TestKind::kBell};
  std::uint64_t shots = 8192;
  std::uint64_t seed = 1;
  std::optional<NoiseModel> noise;
  bool exact = false;
  QuantifierOptions quantifier;

  // Throws InvalidArgument for an empty grid, no tests or zero shots.
  void validate() const;
};

enum class Provenance { kSimulated, kIngested };

const char* to_string(Provenance p);

struct QuantityResult {
  double value = NAN;
  std::string status = "skipped";  // solver status, "error: ..." or "skipped"
  double gap = NAN;
};

struct ResultRow {
  double lambda = 0.0;
  QuantityResult alpha_steer, beta_steer, alpha_bell, beta_bell;
  double f_expt = NAN;
  QuantityResult f_incapable, f_unable;
  Provenance provenance = Provenance::kSimulated;

  // "optimal" when every computed quantity is optimal, otherwise the first
  // other status encountered.
  std::string status() const;
  // Largest duality gap among the computed quantities.
  double gap() const;
};

// Field-wise equality with NaN equal to NaN.
bool operator==(const QuantityResult& a, const QuantityResult& b);
bool operator==(const ResultRow& a, const ResultRow& b);

// Quantifies reconstructed processes against the ideal CPHASE(lambda) target.
// Either process may be absent; the corresponding columns stay "skipped".
// Module errors are recorded in the affected quantity's status.
ResultRow quantify_row(double lambda, const std::optional<ProcessMatrix>& steering_process,
                       const std::optional<ProcessMatrix>& bell_process, Provenance provenance,
                       const QuantifierOptions& opt = {});

// Builds circuits, obtains exact probabilities or sampled counts, runs QST, QPT
// and physicalization per test kind, then quantifies. Rows follow the grid
// order. Counts for grid point i and test t use seed derive_seed(seed, 2 i + t).
std::vector<ResultRow> run_sweep(const SweepConfig& cfg);

// Reads a counts file; SchemaError with a field path, or ShotMismatch.
TomographyDataset ingest_counts(const std::string& path);

enum class ExportFormat { kCsv, kJson };

ExportFormat parse_export_format(std::string_view s);
std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::string rows_to_json(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_csv(std::string_view text);
std::vector<ResultRow> rows_from_json(std::string_view text);
// Refuses empty input (InvalidArgument); IoError when the file cannot be written.
void export_rows(const std::vector<ResultRow>& rows, ExportFormat format, const std::string& path);

}  // namespace qpc

#endif  // QPC_EXPERIMENTS_H_
