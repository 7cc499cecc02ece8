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

#include "qpc/sdp.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>

#include "qpc/error.h"

namespace qpc::sdp {

// ---------------------------------------------------------------------------
// ConicProgram

int ConicProgram::add_psd_block(int dim, std::string label) {
  if (dim <= 0) throw Error(ErrorCode::kInvalidArgument, "block dimension must be positive");
  blocks_.push_back({ConeKind::kPsd, dim, false, std::move(label)});
  return num_blocks() - 1;
}

int ConicProgram::add_hermitian_block(int complex_dim, std::string label) {
  if (complex_dim <= 0) throw Error(ErrorCode::kInvalidArgument, "block dimension must be positive");
  blocks_.push_back({ConeKind::kPsd, 2 * complex_dim, true, std::move(label)});
  return num_blocks() - 1;
}

int ConicProgram::add_nonneg_block(int length, std::string label) {
  if (length <= 0) throw Error(ErrorCode::kInvalidArgument, "block length must be positive");
  blocks_.push_back({ConeKind::kNonneg, length, false, std::move(label)});
  return num_blocks() - 1;
}

int ConicProgram::add_constraint(double rhs) {
  rhs_.push_back(rhs);
  rows_.emplace_back();
  return num_constraints() - 1;
}

void ConicProgram::check_entry(int block, int row, int col) const {
  if (block < 0 || block >= num_blocks()) throw Error(ErrorCode::kIndexOutOfRange, "block index");
  const BlockInfo& b = blocks_[block];
  if (row < 0 || col < 0 || row >= b.dim || col >= b.dim) {
    throw Error(ErrorCode::kIndexOutOfRange, "entry outside block " + b.label);
  }
  if (b.kind == ConeKind::kNonneg && row != col) {
    throw Error(ErrorCode::kInvalidArgument, "off-diagonal entry in nonnegative block " + b.label);
  }
}

void ConicProgram::add_entry(int constraint, int block, int row, int col, double value) {
  if (constraint < 0 || constraint >= num_constraints()) {
    throw Error(ErrorCode::kIndexOutOfRange, "constraint index");
  }
  check_entry(block, row, col);
  if (value == 0.0) return;
  rows_[constraint].push_back({block, std::min(row, col), std::max(row, col), value});
}

void ConicProgram::add_objective_entry(int block, int row, int col, double value) {
  check_entry(block, row, col);
  if (value == 0.0) return;
  objective_.push_back({block, std::min(row, col), std::max(row, col), value});
}

std::vector<Entry> ConicProgram::hermitian_entries(int block, const CMatrix& k, double scale) const {
  if (block < 0 || block >= num_blocks() || !blocks_[block].hermitian) {
    throw Error(ErrorCode::kInvalidArgument, "not a Hermitian block");
  }
  const int n = blocks_[block].dim / 2;
  if (k.rows() != n || k.cols() != n) throw Error(ErrorCode::kDimMismatch, "functional size");
  // Re tr(K H) = tr(K_h H) = (1/2) <embed(K_h), embed(H)>.
  CMatrix kh = (k + k.adjoint()) / 2.0;
  RMatrix e = real_embedding(kh) * (0.5 * scale);
  std::vector<Entry> out;
  for (int c = 0; c < 2 * n; ++c) {
    for (int r = 0; r <= c; ++r) {
      if (std::abs(e(r, c)) > 1e-15 * std::abs(scale)) out.push_back({block, r, c, e(r, c)});
    }
  }
  return out;
}

void ConicProgram::add_hermitian_functional(int constraint, int block, const CMatrix& k, double scale) {
  if (constraint < 0 || constraint >= num_constraints()) {
    throw Error(ErrorCode::kIndexOutOfRange, "constraint index");
  }
  auto e = hermitian_entries(block, k, scale);
  rows_[constraint].insert(rows_[constraint].end(), e.begin(), e.end());
}

void ConicProgram::add_hermitian_objective(int block, const CMatrix& k, double scale) {
  auto e = hermitian_entries(block, k, scale);
  objective_.insert(objective_.end(), e.begin(), e.end());
}

long long ConicProgram::scalar_variable_count() const {
  long long total = 0;
  for (const auto& b : blocks_) {
    if (b.kind == ConeKind::kNonneg) {
      total += b.dim;
    } else if (b.hermitian) {
      long long n = b.dim / 2;
      total += n * n;
    } else {
      total += static_cast<long long>(b.dim) * (b.dim + 1) / 2;
    }
  }
  return total;
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kInaccurate: return "inaccurate";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Solver internals

namespace {

struct SparseSym {
  std::vector<int> r, c;
  std::vector<double> v;

  double inner(const RMatrix& x) const {
    double s = 0.0;
    for (size_t k = 0; k < v.size(); ++k) {
      s += (r[k] == c[k]) ? v[k] * x(r[k], c[k]) : 2.0 * v[k] * x(r[k], c[k]);
    }
    return s;
  }
  void add_to(RMatrix& m, double scale) const {
    for (size_t k = 0; k < v.size(); ++k) {
      m(r[k], c[k]) += scale * v[k];
      if (r[k] != c[k]) m(c[k], r[k]) += scale * v[k];
    }
  }
  double frob_norm() const {
    double s = 0.0;
    for (size_t k = 0; k < v.size(); ++k) s += (r[k] == c[k] ? 1.0 : 2.0) * v[k] * v[k];
    return std::sqrt(s);
  }
};

struct Block {
  ConeKind kind;
  int n;
  std::vector<int> cons;
  std::vector<SparseSym> mats;
  RMatrix c;  // n x n, or n x 1 for kNonneg
  // kNonneg only: per-variable list of (local constraint slot, value)
  std::vector<std::vector<std::pair<int, double>>> by_var;
};

SparseSym merge(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseSym s;
  for (const auto& e : entries) {
    if (!s.v.empty() && s.r.back() == e.row && s.c.back() == e.col) {
      s.v.back() += e.value;
    } else {
      s.r.push_back(e.row);
      s.c.push_back(e.col);
      s.v.push_back(e.value);
    }
  }
  SparseSym out;
  for (size_t k = 0; k < s.v.size(); ++k) {
    if (s.v[k] != 0.0) {
      out.r.push_back(s.r[k]);
      out.c.push_back(s.c[k]);
      out.v.push_back(s.v[k]);
    }
  }
  return out;
}

std::vector<Block> compile(const ConicProgram& p) {
  const int nb = p.num_blocks();
  std::vector<Block> blocks(nb);
  for (int b = 0; b < nb; ++b) {
    blocks[b].kind = p.block(b).kind;
    blocks[b].n = p.block(b).dim;
    blocks[b].c = blocks[b].kind == ConeKind::kPsd ? RMatrix::Zero(blocks[b].n, blocks[b].n)
                                                   : RMatrix::Zero(blocks[b].n, 1);
  }
  for (const auto& e : p.objective_entries()) {
    Block& b = blocks[e.block];
    if (b.kind == ConeKind::kNonneg) {
      b.c(e.row, 0) += e.value;
    } else {
      b.c(e.row, e.col) += e.value;
      if (e.row != e.col) b.c(e.col, e.row) += e.value;
    }
  }
  std::vector<std::vector<Entry>> scratch(nb);
  for (int i = 0; i < p.num_constraints(); ++i) {
    for (const auto& e : p.constraint_entries(i)) scratch[e.block].push_back(e);
    for (int b = 0; b < nb; ++b) {
      if (scratch[b].empty()) continue;
      SparseSym s = merge(std::move(scratch[b]));
      scratch[b].clear();
      if (s.v.empty()) continue;
      blocks[b].cons.push_back(i);
      blocks[b].mats.push_back(std::move(s));
    }
  }
  for (auto& b : blocks) {
    if (b.kind != ConeKind::kNonneg) continue;
    b.by_var.assign(b.n, {});
    for (size_t j = 0; j < b.cons.size(); ++j) {
      const SparseSym& s = b.mats[j];
      for (size_t k = 0; k < s.v.size(); ++k) b.by_var[s.r[k]].push_back({static_cast<int>(j), s.v[k]});
    }
  }
  return blocks;
}

double block_inner(const Block& b, const RMatrix& x, const RMatrix& y) {
  return b.kind == ConeKind::kNonneg ? x.col(0).dot(y.col(0)) : (x.cwiseProduct(y)).sum();
}

void apply_a(const std::vector<Block>& blocks, const std::vector<RMatrix>& x, RVector& out) {
  out.setZero();
  for (size_t b = 0; b < blocks.size(); ++b) {
    const Block& bl = blocks[b];
    for (size_t j = 0; j < bl.cons.size(); ++j) {
      if (bl.kind == ConeKind::kNonneg) {
        const SparseSym& s = bl.mats[j];
        double acc = 0.0;
        for (size_t k = 0; k < s.v.size(); ++k) acc += s.v[k] * x[b](s.r[k], 0);
        out(bl.cons[j]) += acc;
      } else {
        out(bl.cons[j]) += bl.mats[j].inner(x[b]);
      }
    }
  }
}

RMatrix apply_at(const Block& bl, const RVector& y) {
  RMatrix m = bl.kind == ConeKind::kPsd ? RMatrix::Zero(bl.n, bl.n) : RMatrix::Zero(bl.n, 1);
  for (size_t j = 0; j < bl.cons.size(); ++j) {
    double yj = y(bl.cons[j]);
    if (yj == 0.0) continue;
    const SparseSym& s = bl.mats[j];
    if (bl.kind == ConeKind::kNonneg) {
      for (size_t k = 0; k < s.v.size(); ++k) m(s.r[k], 0) += yj * s.v[k];
    } else {
      s.add_to(m, yj);
    }
  }
  return m;
}

struct Scaling {
  RMatrix g, gi, w;  // PSD: X = G diag(lam) G^T, Z = G^-T diag(lam) G^-1, W = G G^T
  RVector lam;
};

bool nt_scaling(const RMatrix& x, const RMatrix& z, Scaling& s) {
  Eigen::LLT<RMatrix> lx(x), lz(z);
  if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
  RMatrix lxm = lx.matrixL();
  RMatrix lzm = lz.matrixL();
  Eigen::JacobiSVD<RMatrix> svd(lzm.transpose() * lxm, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RVector d = svd.singularValues();
  if (!(d.minCoeff() > 0.0)) return false;
  RVector dm = d.cwiseSqrt().cwiseInverse();
  s.lam = d;
  s.g = lxm * svd.matrixV() * dm.asDiagonal();
  s.gi = dm.asDiagonal() * svd.matrixU().transpose() * lzm.transpose();
  s.w = s.g * s.g.transpose();
  return true;
}

RMatrix sym(const RMatrix& m) { return 0.5 * (m + m.transpose()); }

double max_step_psd(const RVector& lam, const RMatrix& d) {
  RVector is = lam.cwiseSqrt().cwiseInverse();
  RMatrix m = is.asDiagonal() * sym(d) * is.asDiagonal();
  Eigen::SelfAdjointEigenSolver<RMatrix> es(m, Eigen::EigenvaluesOnly);
  double mn = es.eigenvalues()(0);
  return mn >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / mn;
}

double max_step_lp(const RMatrix& x, const RMatrix& d) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (d(i, 0) < 0.0) a = std::min(a, -x(i, 0) / d(i, 0));
  }
  return a;
}

double max_abs(const RVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

// ---------------------------------------------------------------------------

SdpSolution solve(const ConicProgram& program, const SolverOptions& options) {
  const std::vector<Block> blocks = compile(program);
  const int nb = static_cast<int>(blocks.size());
  const int m = program.num_constraints();
  RVector b(m);
  for (int i = 0; i < m; ++i) b(i) = program.rhs()[i];
  const double offset = program.objective_offset();

  double norm_c = 0.0;
  for (const auto& bl : blocks) norm_c = std::max(norm_c, bl.c.cwiseAbs().maxCoeff());
  const double norm_b = max_abs(b);

  std::vector<RMatrix> x(nb), z(nb);
  double total_dim = 0.0;
  for (int k = 0; k < nb; ++k) {
    const Block& bl = blocks[k];
    const double n = bl.n;
    double xi = std::max(10.0, std::sqrt(n));
    double eta = std::max(10.0, std::sqrt(n));
    double cn = bl.kind == ConeKind::kNonneg ? bl.c.norm() : bl.c.norm();
    eta = std::max(eta, cn);
    for (size_t j = 0; j < bl.cons.size(); ++j) {
      double an = bl.mats[j].frob_norm();
      xi = std::max(xi, n * (1.0 + std::abs(b(bl.cons[j]))) / (1.0 + an));
      eta = std::max(eta, an);
    }
    eta = std::max(eta, 1.0 + cn);
    if (bl.kind == ConeKind::kPsd) {
      x[k] = xi * RMatrix::Identity(bl.n, bl.n);
      z[k] = eta * RMatrix::Identity(bl.n, bl.n);
    } else {
      x[k] = RMatrix::Constant(bl.n, 1, xi);
      z[k] = RMatrix::Constant(bl.n, 1, eta);
    }
    total_dim += n;
  }
  RVector y = RVector::Zero(m);

  SdpSolution sol;
  RVector ax(m), rp(m), dy(m), rhs(m);
  std::vector<RMatrix> rd(nb), dx(nb), dz(nb), dxa(nb), dza(nb);
  std::vector<Scaling> sc(nb);
  RMatrix schur(m, m);

  auto residuals = [&](double& pobj, double& dobj, double& pinf, double& dinf) {
    apply_a(blocks, x, ax);
    rp = b - ax;
    pobj = offset;
    dinf = 0.0;
    for (int k = 0; k < nb; ++k) {
      pobj += block_inner(blocks[k], blocks[k].c, x[k]);
      rd[k] = blocks[k].c - z[k] - apply_at(blocks[k], y);
      if (rd[k].size()) dinf = std::max(dinf, rd[k].cwiseAbs().maxCoeff());
    }
    dobj = offset + b.dot(y);
    pinf = max_abs(rp);
  };

  int stall = 0;
  int iter = 0;
  double best_merit = std::numeric_limits<double>::infinity();
  std::vector<RMatrix> best_x, best_z;
  RVector best_y;
  double pobj = 0, dobj = 0, pinf = 0, dinf = 0;
  bool diverged = false;
  for (; iter <= options.max_iterations; ++iter) {
    residuals(pobj, dobj, pinf, dinf);
    double mu = 0.0;
    for (int k = 0; k < nb; ++k) mu += block_inner(blocks[k], x[k], z[k]);
    mu /= total_dim;
    const double rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double rel_p = pinf / (1.0 + norm_b);
    const double rel_d = dinf / (1.0 + norm_c);
    if (options.verbose) {
      std::fprintf(stderr, "it %3d  p %+.10e  d %+.10e  gap %.2e  pinf %.2e  dinf %.2e  mu %.2e\n", iter,
                   pobj, dobj, rel_gap, rel_p, rel_d, mu);
    }
    const double merit = std::max({rel_gap, rel_p, rel_d});
    if (merit < best_merit) {
      best_merit = merit;
      best_x = x;
      best_z = z;
      best_y = y;
    }
    if (merit <= options.tolerance) break;
    if (iter == options.max_iterations || stall >= 3) break;
    if (!std::isfinite(mu) || y.norm() > 1e12 || mu > 1e14) {
      diverged = true;
      break;
    }

    // Scaling and Schur complement.
    bool scaling_ok = true;
    schur.setZero();
    for (int k = 0; k < nb; ++k) {
      const Block& bl = blocks[k];
      if (bl.kind == ConeKind::kNonneg) {
        RVector d = x[k].col(0).cwiseQuotient(z[k].col(0));
        for (int v = 0; v < bl.n; ++v) {
          const auto& lst = bl.by_var[v];
          for (size_t p = 0; p < lst.size(); ++p) {
            const int ip = bl.cons[lst[p].first];
            for (size_t q = p; q < lst.size(); ++q) {
              const int iq = bl.cons[lst[q].first];
              double val = d(v) * lst[p].second * lst[q].second;
              schur(std::min(ip, iq), std::max(ip, iq)) += (ip == iq && p != q) ? 2.0 * val : val;
            }
          }
        }
        continue;
      }
      if (!nt_scaling(x[k], z[k], sc[k])) {
        scaling_ok = false;
        break;
      }
      const RMatrix& w = sc[k].w;
      const int nc = static_cast<int>(bl.cons.size());
      for (int j = 0; j < nc; ++j) {
        const SparseSym& aj = bl.mats[j];
        RMatrix t = RMatrix::Zero(bl.n, bl.n);  // W * A_j
        for (size_t e = 0; e < aj.v.size(); ++e) {
          t.col(aj.c[e]) += aj.v[e] * w.col(aj.r[e]);
          if (aj.r[e] != aj.c[e]) t.col(aj.r[e]) += aj.v[e] * w.col(aj.c[e]);
        }
        RMatrix bj = t * w;
        const int cj = bl.cons[j];
        for (int i = 0; i <= j; ++i) {
          double val = bl.mats[i].inner(bj);
          const int ci = bl.cons[i];
          schur(std::min(ci, cj), std::max(ci, cj)) += (ci == cj && i != j) ? 2.0 * val : val;
        }
      }
    }
    if (!scaling_ok) break;
    RMatrix full = schur.selfadjointView<Eigen::Upper>();
    Eigen::LLT<RMatrix> chol;
    double reg = 0.0;
    const double diag_scale = std::max(1e-300, full.diagonal().cwiseAbs().maxCoeff());
    for (int attempt = 0; attempt < 8; ++attempt) {
      chol.compute(full);
      if (chol.info() == Eigen::Success) break;
      reg = reg == 0.0 ? 1e-14 * diag_scale : reg * 100.0;
      full.diagonal().array() += reg;
    }
    if (chol.info() != Eigen::Success) break;

    // Predictor.
    rhs = rp;
    for (int k = 0; k < nb; ++k) {
      const Block& bl = blocks[k];
      RMatrix h;
      if (bl.kind == ConeKind::kNonneg) {
        h = -x[k] - (x[k].cwiseQuotient(z[k])).cwiseProduct(rd[k]);
      } else {
        h = -x[k] - sc[k].w * rd[k] * sc[k].w;
      }
      for (size_t j = 0; j < bl.cons.size(); ++j) {
        rhs(bl.cons[j]) -= bl.kind == ConeKind::kNonneg
                               ? [&] {
                                   double acc = 0.0;
                                   const SparseSym& s = bl.mats[j];
                                   for (size_t e = 0; e < s.v.size(); ++e) acc += s.v[e] * h(s.r[e], 0);
                                   return acc;
                                 }()
                               : bl.mats[j].inner(h);
      }
    }
    dy = chol.solve(rhs);
    double ap = 1.0, ad = 1.0;
    for (int k = 0; k < nb; ++k) {
      const Block& bl = blocks[k];
      dza[k] = rd[k] - apply_at(bl, dy);
      if (bl.kind == ConeKind::kNonneg) {
        dxa[k] = -x[k] - (x[k].cwiseQuotient(z[k])).cwiseProduct(dza[k]);
        ap = std::min(ap, max_step_lp(x[k], dxa[k]));
        ad = std::min(ad, max_step_lp(z[k], dza[k]));
      } else {
        dxa[k] = sym(-x[k] - sc[k].w * dza[k] * sc[k].w);
        ap = std::min(ap, max_step_psd(sc[k].lam, sc[k].gi * dxa[k] * sc[k].gi.transpose()));
        ad = std::min(ad, max_step_psd(sc[k].lam, sc[k].g.transpose() * dza[k] * sc[k].g));
      }
    }
    double mu_aff = 0.0;
    for (int k = 0; k < nb; ++k) {
      mu_aff += block_inner(blocks[k], x[k] + ap * dxa[k], z[k] + ad * dza[k]);
    }
    mu_aff /= total_dim;
    double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);
    const double target = sigma * mu;

    // Corrector.
    rhs = rp;
    std::vector<RMatrix> tpart(nb);
    for (int k = 0; k < nb; ++k) {
      const Block& bl = blocks[k];
      RMatrix h;
      if (bl.kind == ConeKind::kNonneg) {
        RMatrix r = (RMatrix::Constant(bl.n, 1, target) - x[k].cwiseProduct(z[k]) -
                     dxa[k].cwiseProduct(dza[k]))
                        .cwiseQuotient(z[k]);
        tpart[k] = r;
        h = r - (x[k].cwiseQuotient(z[k])).cwiseProduct(rd[k]);
        for (size_t j = 0; j < bl.cons.size(); ++j) {
          const SparseSym& s = bl.mats[j];
          double acc = 0.0;
          for (size_t e = 0; e < s.v.size(); ++e) acc += s.v[e] * h(s.r[e], 0);
          rhs(bl.cons[j]) -= acc;
        }
      } else {
        const Scaling& s = sc[k];
        RMatrix sx = s.gi * dxa[k] * s.gi.transpose();
        RMatrix sz = s.g.transpose() * dza[k] * s.g;
        RMatrix r = -sym(sx * sz);
        for (int i = 0; i < bl.n; ++i) r(i, i) += target - s.lam(i) * s.lam(i);
        RMatrix t(bl.n, bl.n);
        for (int i = 0; i < bl.n; ++i) {
          for (int j = 0; j < bl.n; ++j) t(i, j) = 2.0 * r(i, j) / (s.lam(i) + s.lam(j));
        }
        tpart[k] = sym(s.g * t * s.g.transpose());
        h = tpart[k] - s.w * rd[k] * s.w;
        for (size_t j = 0; j < bl.cons.size(); ++j) rhs(bl.cons[j]) -= bl.mats[j].inner(h);
      }
    }
    dy = chol.solve(rhs);
    auto directions = [&] {
      for (int k = 0; k < nb; ++k) {
        const Block& bl = blocks[k];
        dz[k] = rd[k] - apply_at(bl, dy);
        if (bl.kind == ConeKind::kNonneg) {
          dx[k] = tpart[k] - (x[k].cwiseQuotient(z[k])).cwiseProduct(dz[k]);
        } else {
          dx[k] = sym(tpart[k] - sc[k].w * dz[k] * sc[k].w);
        }
      }
    };
    directions();
    // Refine dy so that A(dx) matches the primal residual through the exact
    // operator rather than the factored Schur matrix.
    for (int pass = 0; pass < 3; ++pass) {
      apply_a(blocks, dx, ax);
      RVector err = rp - ax;
      if (max_abs(err) <= 1e-14 * (1.0 + max_abs(rp))) break;
      dy += chol.solve(err);
      directions();
    }
    ap = 1.0 / options.step_fraction;
    ad = 1.0 / options.step_fraction;
    for (int k = 0; k < nb; ++k) {
      const Block& bl = blocks[k];
      if (bl.kind == ConeKind::kNonneg) {
        ap = std::min(ap, max_step_lp(x[k], dx[k]));
        ad = std::min(ad, max_step_lp(z[k], dz[k]));
      } else {
        ap = std::min(ap, max_step_psd(sc[k].lam, sc[k].gi * dx[k] * sc[k].gi.transpose()));
        ad = std::min(ad, max_step_psd(sc[k].lam, sc[k].g.transpose() * dz[k] * sc[k].g));
      }
    }
    ap = std::min(1.0, options.step_fraction * ap);
    ad = std::min(1.0, options.step_fraction * ad);
    for (int k = 0; k < nb; ++k) {
      x[k] += ap * dx[k];
      z[k] += ad * dz[k];
    }
    y += ad * dy;
    stall = (ap < 1e-8 && ad < 1e-8) ? stall + 1 : 0;
  }

  if (!diverged && !best_x.empty()) {
    x = std::move(best_x);
    z = std::move(best_z);
    y = std::move(best_y);
  }
  residuals(pobj, dobj, pinf, dinf);
  sol.iterations = iter;
  sol.primal_objective = pobj;
  sol.dual_objective = dobj;
  sol.duality_gap = std::abs(pobj - dobj);
  sol.primal_infeasibility = pinf;
  sol.dual_infeasibility = dinf;
  if (!diverged && sol.duality_gap <= 1e-7 && pinf <= 1e-7 && dinf <= 1e-7) {
    sol.status = SolveStatus::kOptimal;
  } else if (diverged) {
    sol.status = SolveStatus::kInfeasible;
  } else {
    sol.status = SolveStatus::kInaccurate;
  }
  sol.x = std::move(x);
  sol.z = std::move(z);
  sol.y = std::move(y);
  return sol;
}

// ---------------------------------------------------------------------------

Residuals evaluate(const ConicProgram& program, const std::vector<RMatrix>& x, const RVector& y) {
  const int nb = program.num_blocks();
  if (static_cast<int>(x.size()) != nb || y.size() != program.num_constraints()) {
    throw Error(ErrorCode::kDimMismatch, "solution does not match program layout");
  }
  auto value = [&](const Entry& e) {
    const RMatrix& xb = x[e.block];
    if (program.block(e.block).kind == ConeKind::kNonneg) return e.value * xb(e.row, 0);
    double s = e.value * xb(e.row, e.col);
    if (e.row != e.col) s += e.value * xb(e.col, e.row);
    return s;
  };
  Residuals r;
  r.primal_objective = program.objective_offset();
  for (const auto& e : program.objective_entries()) r.primal_objective += value(e);
  r.dual_objective = program.objective_offset();
  std::vector<RMatrix> slack(nb);
  for (int k = 0; k < nb; ++k) {
    const BlockInfo& bi = program.block(k);
    slack[k] = bi.kind == ConeKind::kPsd ? RMatrix::Zero(bi.dim, bi.dim) : RMatrix::Zero(bi.dim, 1);
  }
  auto deposit = [&](const Entry& e, double scale) {
    RMatrix& s = slack[e.block];
    if (program.block(e.block).kind == ConeKind::kNonneg) {
      s(e.row, 0) += scale * e.value;
    } else {
      s(e.row, e.col) += scale * e.value;
      if (e.row != e.col) s(e.col, e.row) += scale * e.value;
    }
  };
  for (const auto& e : program.objective_entries()) deposit(e, 1.0);
  for (int i = 0; i < program.num_constraints(); ++i) {
    double lhs = 0.0;
    for (const auto& e : program.constraint_entries(i)) {
      lhs += value(e);
      deposit(e, -y(i));
    }
    r.primal_residual = std::max(r.primal_residual, std::abs(lhs - program.rhs()[i]));
    r.dual_objective += program.rhs()[i] * y(i);
  }
  r.min_primal_eig = std::numeric_limits<double>::infinity();
  r.min_dual_slack_eig = std::numeric_limits<double>::infinity();
  for (int k = 0; k < nb; ++k) {
    if (program.block(k).kind == ConeKind::kNonneg) {
      r.min_primal_eig = std::min(r.min_primal_eig, x[k].minCoeff());
      r.min_dual_slack_eig = std::min(r.min_dual_slack_eig, slack[k].minCoeff());
    } else {
      Eigen::SelfAdjointEigenSolver<RMatrix> ex(x[k], Eigen::EigenvaluesOnly);
      Eigen::SelfAdjointEigenSolver<RMatrix> es(slack[k], Eigen::EigenvaluesOnly);
      r.min_primal_eig = std::min(r.min_primal_eig, ex.eigenvalues()(0));
      r.min_dual_slack_eig = std::min(r.min_dual_slack_eig, es.eigenvalues()(0));
    }
  }
  return r;
}

}  // namespace qpc::sdp
