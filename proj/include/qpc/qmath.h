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

#ifndef QPC_QMATH_H_
#define QPC_QMATH_H_

#include <complex>

#include <Eigen/Dense>

namespace qpc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

struct Tolerances {
  static constexpr double kHermiticity = 1e-10;
  static constexpr double kPsdSlack = 1e-8;
  static constexpr double kFileHermiticity = 1e-8;
  static constexpr double kWitness = 1e-7;
};

// A square matrix known to be Hermitian. Construction checks the defect
// against `tol` and stores the exactly symmetrized matrix.
class HermitianView {
 public:
  HermitianView() = default;
  explicit HermitianView(const CMatrix& m, double tol = Tolerances::kHermiticity);

  const CMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  double trace() const { return m_.trace().real(); }

 private:
  CMatrix m_;
};

struct EigenDecomposition {
  RVector values;   // descending
  CMatrix vectors;  // columns
};

CMatrix kron(const CMatrix& a, const CMatrix& b);

// max_ij |a_ij - conj(a_ji)|; throws DimMismatch for non-square input.
double hermiticity_defect(const CMatrix& a);
bool all_finite(const CMatrix& a);

// Checked entry point: throws NonHermitian when the defect exceeds `tol`.
EigenDecomposition eigh(const CMatrix& h, double tol = Tolerances::kHermiticity);
EigenDecomposition eigh(const HermitianView& h);

double min_eigenvalue(const HermitianView& h);

// tr(a^dagger b)
Complex frob_inner(const CMatrix& a, const CMatrix& b);

HermitianView nearest_psd(const HermitianView& h);

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();
CMatrix ket_bra(Eigen::Index dim, Eigen::Index row, Eigen::Index col);

// Real symmetric embedding [[Re, -Im], [Im, Re]] and its inverse.
RMatrix real_embedding(const CMatrix& h);
CMatrix from_real_embedding(const RMatrix& e);

}  // namespace qpc

#endif  // QPC_QMATH_H_
