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

#ifndef QPC_TESTS_RANDOM_OBJECTS_H_
#define QPC_TESTS_RANDOM_OBJECTS_H_

#include <random>
#include <vector>

#include "qpc/channels.h"

namespace qpc::testing {

// Haar unitary via QR with the phase of R's diagonal removed.
inline CMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(nd(rng), nd(rng));
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

inline CMatrix random_density(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(nd(rng), nd(rng));
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

// k Kraus operators cut from an isometry.
inline KrausChannel random_channel(int n, int k, std::mt19937_64& rng) {
  CMatrix v = random_unitary(n * k, rng).leftCols(n);
  std::vector<CMatrix> ops;
  for (int i = 0; i < k; ++i) ops.push_back(v.middleRows(i * n, n));
  return KrausChannel(ops);
}

}  // namespace qpc::testing

#endif  // QPC_TESTS_RANDOM_OBJECTS_H_
