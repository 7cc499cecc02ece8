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

#include "qpc/qmath.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qpc/error.h"

namespace qpc {

namespace {

void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kDimMismatch, std::string(what) + " requires a square matrix, got " +
                                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

// Phase each column so its first non-negligible component is real positive.
void fix_phases(CMatrix& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    double scale = v.col(c).cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      double mag = std::abs(v(r, c));
      if (mag > 1e-8 * scale) {
        v.col(c) *= std::conj(v(r, c)) / mag;
        v(r, c) = Complex(v(r, c).real(), 0.0);
        break;
      }
    }
  }
}

}  // namespace

HermitianView::HermitianView(const CMatrix& m, double tol) {
  if (!all_finite(m)) throw Error(ErrorCode::kNonHermitian, "matrix has non-finite entries");
  double defect = hermiticity_defect(m);
  if (defect > tol) {
    throw Error(ErrorCode::kNonHermitian,
                "hermiticity defect " + std::to_string(defect) + " exceeds " + std::to_string(tol));
  }
  m_ = (m + m.adjoint()) / 2.0;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double hermiticity_defect(const CMatrix& a) {
  require_square(a, "hermiticity check");
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool all_finite(const CMatrix& a) {
  return a.real().allFinite() && a.imag().allFinite();
}

EigenDecomposition eigh(const CMatrix& h, double tol) {
  return eigh(HermitianView(h, tol));
}

EigenDecomposition eigh(const HermitianView& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  const Eigen::Index n = h.dim();
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  fix_phases(out.vectors);
  return out;
}

double min_eigenvalue(const HermitianView& h) {
  if (h.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

Complex frob_inner(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimMismatch, "frob_inner operands differ in shape");
  }
  return (a.conjugate().cwiseProduct(b)).sum();
}

HermitianView nearest_psd(const HermitianView& h) {
  EigenDecomposition e = eigh(h);
  RVector clipped = e.values.cwiseMax(0.0);
  if (clipped == e.values) return h;
  CMatrix out = e.vectors * clipped.asDiagonal() * e.vectors.adjoint();
  return HermitianView(out, 1e-8);
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMatrix ket_bra(Eigen::Index dim, Eigen::Index row, Eigen::Index col) {
  CMatrix m = CMatrix::Zero(dim, dim);
  m(row, col) = 1.0;
  return m;
}

RMatrix real_embedding(const CMatrix& h) {
  const Eigen::Index n = h.rows();
  RMatrix e(2 * n, 2 * n);
  e.topLeftCorner(n, n) = h.real();
  e.topRightCorner(n, n) = -h.imag();
  e.bottomLeftCorner(n, n) = h.imag();
  e.bottomRightCorner(n, n) = h.real();
  return e;
}

CMatrix from_real_embedding(const RMatrix& e) {
  const Eigen::Index n = e.rows() / 2;
  CMatrix h(n, n);
  h.real() = (e.topLeftCorner(n, n) + e.bottomRightCorner(n, n)) / 2.0;
  h.imag() = (e.bottomLeftCorner(n, n) - e.topRightCorner(n, n)) / 2.0;
  return h;
}

}  // namespace qpc
