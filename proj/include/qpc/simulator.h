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

#ifndef QPC_SIMULATOR_H_
#define QPC_SIMULATOR_H_

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpc/channels.h"

namespace qpc {

enum class TestKind { kSteering, kBell };
enum class Axis { kX = 0, kY = 1, kZ = 2 };

std::string_view to_string(TestKind t);
TestKind parse_test_kind(std::string_view s);
char axis_letter(Axis a);
Axis parse_axis(char c);

// Pauli eigenstate |axis, sign>.
struct InputToken {
  Axis axis;
  int sign;  // +1 or -1

  bool operator==(const InputToken&) const = default;
};

std::string to_string(InputToken t);
InputToken parse_input_token(std::string_view s);
CVector input_ket(InputToken t);

// The four single-qubit inputs of the tomography circuits: Z+, Z-, X+, Y+.
const std::array<InputToken, 4>& qpt_input_tokens();

struct UrParams {
  double phi = 0.0;
  double theta = std::numbers::pi / 4;

  bool operator==(const UrParams&) const = default;
};

using InputPair = std::array<InputToken, 2>;   // Alice, Bob
using Setting = std::array<Axis, 2>;           // Alice, Bob
using Distribution = std::array<double, 4>;    // outcomes ++, +-, -+, --

struct Circuit {
  InputPair input;
  KrausChannel process;  // the operation under test (a single unitary for CPHASE)
  std::optional<UrParams> bell_rotation;
  Setting setting;
};

// 16 inputs (Alice-major over Z+, Z-, X+, Y+) x 9 settings (XX, XY, ..., ZZ);
// circuit ordinal = 9 * input_index + setting_index.
std::vector<Circuit> build_circuits(TestKind test, double lambda);
std::vector<Circuit> build_circuits(TestKind test, const KrausChannel& process,
                                    UrParams rotation = UrParams{});

Distribution exact_probabilities(const Circuit& c, const std::optional<NoiseModel>& noise = std::nullopt);

struct CountsRecord {
  InputPair input;
  Setting setting;
  std::uint64_t shots = 0;
  std::array<std::uint64_t, 4> counts{};

  bool operator==(const CountsRecord&) const = default;
};

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t ordinal);

// Multinomial draw from exact_probabilities with a generator seeded by `seed`.
CountsRecord sample_counts(const Circuit& c, const std::optional<NoiseModel>& noise, std::uint64_t shots,
                           std::uint64_t seed);

struct TomographyDataset {
  TestKind test = TestKind::kSteering;
  double lambda = 0.0;
  std::uint64_t shots = 0;
  std::optional<UrParams> ur;
  std::vector<CountsRecord> records;

  bool operator==(const TomographyDataset&) const = default;
};

// Per-circuit streams use derive_seed(seed, ordinal).
TomographyDataset simulate_dataset(TestKind test, double lambda, const std::optional<NoiseModel>& noise,
                                   std::uint64_t shots, std::uint64_t seed);
TomographyDataset simulate_dataset(const std::vector<Circuit>& circuits, TestKind test, double lambda,
                                   const std::optional<NoiseModel>& noise, std::uint64_t shots, std::uint64_t seed);

// Throws SchemaError naming the first missing (input, setting) record and
// ShotMismatch when a record's counts do not sum to the declared shots.
void validate_dataset(const TomographyDataset& d);

std::string outcome_label(int outcome);
std::string dataset_to_json(const TomographyDataset& d);
TomographyDataset dataset_from_json(std::string_view text);

}  // namespace qpc

#endif  // QPC_SIMULATOR_H_
