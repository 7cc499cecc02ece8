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

#ifndef QPC_SDP_H_
#define QPC_SDP_H_

#include <string>
#include <vector>

#include "qpc/qmath.h"

namespace qpc::sdp {

enum class ConeKind { kPsd, kNonneg };

struct BlockInfo {
  ConeKind kind;
  int dim;          // matrix order, or vector length for kNonneg
  bool hermitian;   // PSD block holding the real embedding of a dim/2 Hermitian matrix
  std::string label;
};

struct Entry {
  int block;
  int row;
  int col;
  double value;
};

// Conic program in SDPA layout.
//
// Primal reading:   minimize <C, X> + offset
//                   subject to <A_i, X> = b_i,  X in K.
// Dual reading:     maximize b^T y + offset
//                   subject to C - sum_i y_i A_i in K.
//
// K is a product of real PSD cones and nonnegative orthants. Each coefficient
// matrix is symmetric: an entry (r, c, v) with r != c sets both A[r][c] and
// A[c][r] to v. Repeated entries are summed. For nonnegative blocks only the
// diagonal is meaningful.
class ConicProgram {
 public:
  int add_psd_block(int dim, std::string label);
  // Complex Hermitian n x n block, embedded as a real symmetric 2n x 2n block.
  int add_hermitian_block(int complex_dim, std::string label);
  int add_nonneg_block(int length, std::string label);

  int add_constraint(double rhs);
  void set_rhs(int constraint, double rhs) { rhs_[constraint] = rhs; }

  void add_entry(int constraint, int block, int row, int col, double value);
  void add_objective_entry(int block, int row, int col, double value);

  // Adds the functional  scale * Re tr(K H)  on Hermitian block H, expressed in
  // the embedded variable.
  void add_hermitian_functional(int constraint, int block, const CMatrix& k, double scale = 1.0);
  void add_hermitian_objective(int block, const CMatrix& k, double scale = 1.0);

  void set_objective_offset(double offset) { offset_ = offset; }

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int num_constraints() const { return static_cast<int>(rhs_.size()); }
  const BlockInfo& block(int b) const { return blocks_[b]; }
  const std::vector<BlockInfo>& blocks() const { return blocks_; }
  const std::vector<double>& rhs() const { return rhs_; }
  const std::vector<Entry>& constraint_entries(int i) const { return rows_[i]; }
  const std::vector<Entry>& objective_entries() const { return objective_; }
  double objective_offset() const { return offset_; }
  // Number of real scalar degrees of freedom in the cone variables.
  long long scalar_variable_count() const;

 private:
  void check_entry(int block, int row, int col) const;
  std::vector<Entry> hermitian_entries(int block, const CMatrix& k, double scale) const;

  std::vector<BlockInfo> blocks_;
  std::vector<double> rhs_;
  std::vector<std::vector<Entry>> rows_;
  std::vector<Entry> objective_;
  double offset_ = 0.0;
};

enum class SolveStatus { kOptimal, kInfeasible, kInaccurate };

const char* status_name(SolveStatus s);

struct SolverOptions {
  double tolerance = 1e-9;
  int max_iterations = 100;
  double step_fraction = 0.98;
  bool verbose = false;
};

struct SdpSolution {
  SolveStatus status = SolveStatus::kInaccurate;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;          // |primal - dual|
  double primal_infeasibility = 0.0; // max |b - A(X)|
  double dual_infeasibility = 0.0;   // max |C - Z - A^T(y)|
  int iterations = 0;
  std::vector<RMatrix> x;  // kNonneg blocks stored as a column
  std::vector<RMatrix> z;
  RVector y;

  CMatrix hermitian_value(int block) const { return from_real_embedding(x[block]); }
  CMatrix hermitian_dual(int block) const { return from_real_embedding(z[block]); }
};

SdpSolution solve(const ConicProgram& program, const SolverOptions& options = {});

// Direct re-evaluation of a candidate solution against the program data.
struct Residuals {
  double primal_residual = 0.0;  // max |<A_i, X> - b_i|
  double min_primal_eig = 0.0;   // over all blocks (entries for kNonneg)
  double min_dual_slack_eig = 0.0;  // of C - sum y_i A_i
  double primal_objective = 0.0;
  double dual_objective = 0.0;
};

Residuals evaluate(const ConicProgram& program, const std::vector<RMatrix>& x, const RVector& y);

}  // namespace qpc::sdp

#endif  // QPC_SDP_H_
