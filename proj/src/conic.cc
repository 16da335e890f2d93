// Copyright 2026 The green-cran Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gcran/conic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>

#include <Eigen/SparseCholesky>

namespace gcran {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "Optimal";
    case SolveStatus::kPrimalInfeasible:
      return "PrimalInfeasible";
    case SolveStatus::kUnbounded:
      return "Unbounded";
    case SolveStatus::kMaxIterations:
      return "MaxIterations";
  }
  return "Unknown";
}

void ConicProblem::audit() const {
  int total = 0;
  for (const Cone& cone : cones) {
    if (cone.size < 0) throw std::invalid_argument("cone with negative size");
    total += cone.dim();
  }
  if (total != num_rows()) {
    throw std::invalid_argument("cone dimensions (" + std::to_string(total) + ") do not match length of b (" +
                                std::to_string(num_rows()) + ")");
  }
  if (A.rows() != num_rows() || A.cols() != num_variables()) {
    throw std::invalid_argument("constraint matrix shape does not match b and c");
  }
  if (!c.allFinite() || !b.allFinite()) throw std::invalid_argument("non-finite problem data");
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      if (!std::isfinite(it.value())) throw std::invalid_argument("non-finite entry in A");
    }
  }
}

// ---------------------------------------------------------------------------
// ProblemBuilder

int ProblemBuilder::add_variables(std::string name, int count) {
  const int offset = num_variables();
  c_.resize(offset + count, 0.0);
  layout_.push_back({std::move(name), offset, count});
  return offset;
}

int ProblemBuilder::add_cone(Cone cone) {
  const int offset = num_rows();
  b_.resize(offset + cone.dim(), 0.0);
  cones_.push_back(cone);
  return offset;
}

void ProblemBuilder::add_a(int row, int col, double value) {
  if (value != 0.0) triplets_.emplace_back(row, col, value);
}

ConicProblem ProblemBuilder::build() const {
  ConicProblem p;
  p.c = Eigen::Map<const VectorXd>(c_.data(), static_cast<Eigen::Index>(c_.size()));
  p.b = Eigen::Map<const VectorXd>(b_.data(), static_cast<Eigen::Index>(b_.size()));
  p.A.resize(num_rows(), num_variables());
  p.A.setFromTriplets(triplets_.begin(), triplets_.end());
  p.A.makeCompressed();
  p.cones = cones_;
  p.layout = layout_;
  return p;
}

// ---------------------------------------------------------------------------
// Debug dump

namespace {

const char* cone_name(ConeKind kind) {
  switch (kind) {
    case ConeKind::kZero:
      return "ZERO";
    case ConeKind::kNonneg:
      return "NONNEG";
    case ConeKind::kPsd:
      return "PSD";
    case ConeKind::kHermitianPsd:
      return "HPSD";
  }
  return "?";
}

}  // namespace

void dump(const ConicProblem& problem, std::ostream& out) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  out << "conic-problem v1\n";
  out << "variables " << problem.num_variables() << "\n";
  for (const VariableBlock& block : problem.layout) {
    out << "block " << block.name << " " << block.offset << " " << block.size << "\n";
  }
  out << "rows " << problem.num_rows() << "\n";
  int row = 0;
  for (const Cone& cone : problem.cones) {
    out << "cone " << cone_name(cone.kind) << " " << cone.size << " " << row << " " << cone.dim() << "\n";
    row += cone.dim();
  }
  int nnz_c = 0;
  for (int j = 0; j < problem.num_variables(); ++j) nnz_c += problem.c(j) != 0.0;
  out << "c " << nnz_c << "\n";
  for (int j = 0; j < problem.num_variables(); ++j) {
    if (problem.c(j) != 0.0) out << j << " " << problem.c(j) << "\n";
  }
  int nnz_b = 0;
  for (int i = 0; i < problem.num_rows(); ++i) nnz_b += problem.b(i) != 0.0;
  out << "b " << nnz_b << "\n";
  for (int i = 0; i < problem.num_rows(); ++i) {
    if (problem.b(i) != 0.0) out << i << " " << problem.b(i) << "\n";
  }
  out << "A " << problem.A.nonZeros() << "\n";
  for (int k = 0; k < problem.A.outerSize(); ++k) {
    for (SpMat::InnerIterator it(problem.A, k); it; ++it) {
      out << it.row() << " " << it.col() << " " << it.value() << "\n";
    }
  }
  out.flags(flags);
  out.precision(precision);
}

// ---------------------------------------------------------------------------
// Cone projections

namespace {

// Projects svec(S) of a side-n block onto the PSD cone in place.
template <int N>
void project_psd_fixed(double* data) {
  using Mat = Eigen::Matrix<double, N, N>;
  Mat m;
  int k = 0;
  for (int j = 0; j < N; ++j) {
    m(j, j) = data[k++];
    for (int i = j + 1; i < N; ++i) {
      m(i, j) = data[k++] / kSqrt2;
      m(j, i) = m(i, j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(m);
  const auto& lambda = eig.eigenvalues();
  if (lambda(0) >= 0.0) return;
  Mat out = Mat::Zero();
  if (lambda(N - 1) > 0.0) {
    for (int i = 0; i < N; ++i) {
      if (lambda(i) > 0.0) out.noalias() += lambda(i) * eig.eigenvectors().col(i) * eig.eigenvectors().col(i).transpose();
    }
  }
  k = 0;
  for (int j = 0; j < N; ++j) {
    data[k++] = out(j, j);
    for (int i = j + 1; i < N; ++i) data[k++] = kSqrt2 * out(i, j);
  }
}

void project_psd_2(double* data) {
  // [[a, b], [b, d]] with svec (a, sqrt2 b, d).
  const double a = data[0];
  const double b = data[1] / kSqrt2;
  const double d = data[2];
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), b);
  const double lo = mean - radius;
  const double hi = mean + radius;
  if (lo >= 0.0) return;
  if (hi <= 0.0) {
    data[0] = data[1] = data[2] = 0.0;
    return;
  }
  // Rank one: hi * u u' with u the top eigenvector.
  double ux, uy;
  if (radius == 0.0) {
    ux = 1.0;
    uy = 0.0;
  } else {
    ux = b;
    uy = hi - a;
    if (std::abs(ux) + std::abs(uy) < 1e-300) {
      ux = hi - d;
      uy = b;
    }
    const double nrm = std::hypot(ux, uy);
    ux /= nrm;
    uy /= nrm;
  }
  data[0] = hi * ux * ux;
  data[1] = kSqrt2 * hi * ux * uy;
  data[2] = hi * uy * uy;
}

class PsdProjector {
 public:
  explicit PsdProjector(int n) : n_(n), eig_(n), m_(n, n), out_(n, n) {}

  void project(double* data) {
    const int n = n_;
    int k = 0;
    for (int j = 0; j < n; ++j) {
      m_(j, j) = data[k++];
      for (int i = j + 1; i < n; ++i) {
        m_(i, j) = data[k++] / kSqrt2;
      }
    }
    eig_.compute(m_, Eigen::ComputeEigenvectors);
    const VectorXd& lambda = eig_.eigenvalues();
    if (lambda(0) >= 0.0) return;
    int negatives = 0;
    while (negatives < n && lambda(negatives) < 0.0) ++negatives;
    const MatrixXd& u = eig_.eigenvectors();
    if (negatives == n) {
      std::fill(data, data + svec_dim(n), 0.0);
      return;
    }
    if (negatives <= n - negatives) {
      // S - sum over negative eigenpairs.
      out_.triangularView<Eigen::Lower>() = m_;
      for (int i = 0; i < negatives; ++i) {
        out_.selfadjointView<Eigen::Lower>().rankUpdate(u.col(i), -lambda(i));
      }
    } else {
      out_.setZero();
      for (int i = negatives; i < n; ++i) {
        out_.selfadjointView<Eigen::Lower>().rankUpdate(u.col(i), lambda(i));
      }
    }
    k = 0;
    for (int j = 0; j < n; ++j) {
      data[k++] = out_(j, j);
      for (int i = j + 1; i < n; ++i) data[k++] = kSqrt2 * out_(i, j);
    }
  }

 private:
  int n_;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig_;
  MatrixXd m_;
  MatrixXd out_;
};

// Projects hvec(H) of a side-n block onto the Hermitian PSD cone in place.
class HermitianProjector {
 public:
  explicit HermitianProjector(int n) : n_(n), eig_(n), m_(n, n), out_(n, n) {}

  void project(double* data) {
    const int n = n_;
    int k = 0;
    for (int j = 0; j < n; ++j) {
      m_(j, j) = data[k++];
      for (int i = j + 1; i < n; ++i) {
        m_(i, j) = std::complex<double>(data[k], data[k + 1]) / kSqrt2;
        k += 2;
      }
    }
    eig_.compute(m_, Eigen::ComputeEigenvectors);
    const VectorXd& lambda = eig_.eigenvalues();
    if (lambda(0) >= 0.0) return;
    int negatives = 0;
    while (negatives < n && lambda(negatives) < 0.0) ++negatives;
    if (negatives == n) {
      std::fill(data, data + hvec_dim(n), 0.0);
      return;
    }
    const Eigen::MatrixXcd& u = eig_.eigenvectors();
    if (negatives <= n - negatives) {
      out_.triangularView<Eigen::Lower>() = m_;
      for (int i = 0; i < negatives; ++i) out_.selfadjointView<Eigen::Lower>().rankUpdate(u.col(i), -lambda(i));
    } else {
      out_.setZero();
      for (int i = negatives; i < n; ++i) out_.selfadjointView<Eigen::Lower>().rankUpdate(u.col(i), lambda(i));
    }
    k = 0;
    for (int j = 0; j < n; ++j) {
      data[k++] = out_(j, j).real();
      for (int i = j + 1; i < n; ++i) {
        data[k++] = kSqrt2 * out_(i, j).real();
        data[k++] = kSqrt2 * out_(i, j).imag();
      }
    }
  }

 private:
  int n_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig_;
  Eigen::MatrixXcd m_;
  Eigen::MatrixXcd out_;
};

class ConeProjector {
 public:
  explicit ConeProjector(const std::vector<Cone>& cones) : cones_(cones) {
    for (const Cone& cone : cones_) {
      projectors_.push_back(cone.kind == ConeKind::kPsd && cone.size > 4 ? std::make_unique<PsdProjector>(cone.size)
                                                                           : nullptr);
      hermitian_.push_back(cone.kind == ConeKind::kHermitianPsd && cone.size > 1
                               ? std::make_unique<HermitianProjector>(cone.size)
                               : nullptr);
    }
  }

  // Projects onto K (dual = false) or K* (dual = true).
  void project(double* v, bool dual) {
    int offset = 0;
    for (size_t c = 0; c < cones_.size(); ++c) {
      const Cone& cone = cones_[c];
      double* block = v + offset;
      switch (cone.kind) {
        case ConeKind::kZero:
          if (!dual) std::fill(block, block + cone.size, 0.0);
          break;
        case ConeKind::kNonneg:
          for (int i = 0; i < cone.size; ++i) block[i] = std::max(block[i], 0.0);
          break;
        case ConeKind::kPsd:
          switch (cone.size) {
            case 0:
              break;
            case 1:
              block[0] = std::max(block[0], 0.0);
              break;
            case 2:
              project_psd_2(block);
              break;
            case 3:
              project_psd_fixed<3>(block);
              break;
            case 4:
              project_psd_fixed<4>(block);
              break;
            default:
              projectors_[c]->project(block);
          }
          break;
        case ConeKind::kHermitianPsd:
          if (cone.size == 1) {
            block[0] = std::max(block[0], 0.0);
          } else if (cone.size > 1) {
            hermitian_[c]->project(block);
          }
          break;
      }
      offset += cone.dim();
    }
  }

 private:
  std::vector<Cone> cones_;
  std::vector<std::unique_ptr<PsdProjector>> projectors_;
  std::vector<std::unique_ptr<HermitianProjector>> hermitian_;
};

}  // namespace

void project_onto_cones(const std::vector<Cone>& cones, Eigen::Ref<VectorXd> v, bool dual) {
  ConeProjector projector(cones);
  projector.project(v.data(), dual);
}

// ---------------------------------------------------------------------------
// Solver

namespace {

constexpr double kMinScale = 1e-4;
constexpr double kMaxScale = 1e4;
constexpr double kMinDualScale = 1e-6;
constexpr double kMaxDualScale = 1e6;
constexpr double kRescaleFactor = 3.0;
constexpr int kMinRescaleIters = 50;

struct Equilibration {
  VectorXd row;  // D
  VectorXd col;  // E
};

Equilibration ruiz(const SpMat& a, const std::vector<Cone>& cones, int passes) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  Equilibration eq{VectorXd::Ones(m), VectorXd::Ones(n)};
  SpMat work = a;
  for (int pass = 0; pass < passes; ++pass) {
    VectorXd row_norm = VectorXd::Zero(m);
    VectorXd col_norm = VectorXd::Zero(n);
    for (int k = 0; k < work.outerSize(); ++k) {
      for (SpMat::InnerIterator it(work, k); it; ++it) {
        const double v = std::abs(it.value());
        row_norm(it.row()) = std::max(row_norm(it.row()), v);
        col_norm(it.col()) = std::max(col_norm(it.col()), v);
      }
    }
    // PSD blocks must be scaled uniformly to stay inside the cone.
    int offset = 0;
    for (const Cone& cone : cones) {
      const int d = cone.dim();
      if (cone.is_matrix() && d > 0) {
        const double block = row_norm.segment(offset, d).maxCoeff();
        row_norm.segment(offset, d).setConstant(block);
      }
      offset += d;
    }
    VectorXd dr(m), dc(n);
    for (int i = 0; i < m; ++i) {
      dr(i) = row_norm(i) > 0.0 ? std::clamp(1.0 / std::sqrt(row_norm(i)), kMinScale, kMaxScale) : 1.0;
    }
    for (int j = 0; j < n; ++j) {
      dc(j) = col_norm(j) > 0.0 ? std::clamp(1.0 / std::sqrt(col_norm(j)), kMinScale, kMaxScale) : 1.0;
    }
    work = dr.asDiagonal() * work * dc.asDiagonal();
    eq.row.array() *= dr.array();
    eq.col.array() *= dc.array();
  }
  for (int i = 0; i < m; ++i) eq.row(i) = std::clamp(eq.row(i), kMinScale, kMaxScale);
  for (int j = 0; j < n; ++j) eq.col(j) = std::clamp(eq.col(j), kMinScale, kMaxScale);
  return eq;
}

// Handles problems without decision variables: feasible iff b in K.
ConicSolution solve_constant(const ConicProblem& p, const ConicSettings& settings) {
  ConicSolution sol;
  sol.x.resize(0);
  sol.s = p.b;
  sol.y = VectorXd::Zero(p.num_rows());
  VectorXd projected = p.b;
  project_onto_cones(p.cones, projected, false);
  const double violation = (projected - p.b).norm();
  if (violation <= settings.tol * (1.0 + p.b.norm())) {
    sol.status = SolveStatus::kOptimal;
    sol.s = projected;
    sol.residuals.primal = violation / (1.0 + p.b.norm());
    return sol;
  }
  // y = Pi_{K*}(-b) separates b from K: y'b = -|Pi_{K*}(-b)|^2 < 0.
  VectorXd y = -p.b;
  project_onto_cones(p.cones, y, true);
  const double by = p.b.dot(y);
  sol.status = SolveStatus::kPrimalInfeasible;
  sol.certificate = y / (-by);
  sol.certificate_residual = 0.0;
  sol.residuals.primal = violation / (1.0 + p.b.norm());
  return sol;
}

class HsdeSolver {
 public:
  HsdeSolver(const ConicProblem& p, const ConicSettings& settings)
      : p_(p), settings_(settings), n_(p.num_variables()), m_(p.num_rows()), projector_(p.cones) {
    if (settings_.equilibrate) {
      eq_ = ruiz(p.A, p.cones, settings_.ruiz_passes);
    } else {
      eq_ = {VectorXd::Ones(m_), VectorXd::Ones(n_)};
    }
    a_ = eq_.row.asDiagonal() * p.A * eq_.col.asDiagonal();
    VectorXd bh = eq_.row.cwiseProduct(p.b);
    VectorXd ch = eq_.col.cwiseProduct(p.c);
    scale_b_ = bh.norm() > 1e-12 ? bh.norm() : 1.0;
    scale_c_ = ch.norm() > 1e-12 ? ch.norm() : 1.0;
    b_ = bh / scale_b_;
    c_ = ch / scale_c_;
    rho_x_ = settings_.rho_x;
    scale_ = settings_.scale;
    rho_y_ = 1.0 / scale_;
    factor();
    b_norm_ = p.b.norm();
    c_norm_ = p.c.norm();
  }

  ConicSolution run(const WarmStart* warm) {
    const int d = n_ + m_ + 1;
    const double alpha = settings_.relaxation;

    // Initial (u, v): cold start u = v = (0, 0, 1).
    VectorXd u0 = VectorXd::Zero(d);
    VectorXd v0 = VectorXd::Zero(d);
    u0(d - 1) = 1.0;
    v0(d - 1) = 1.0;
    if (warm != nullptr && warm->x.size() == n_ && warm->y.size() == m_ && warm->s.size() == m_) {
      // Map into the scaled space: x = E sb x~, y = D sc y~, s = D^{-1} sb s~.
      u0.head(n_) = warm->x.cwiseQuotient(eq_.col) / scale_b_;
      u0.segment(n_, m_) = warm->y.cwiseQuotient(eq_.row) / scale_c_;
      v0.segment(n_, m_) = warm->s.cwiseProduct(eq_.row) / scale_b_;
      v0(d - 1) = 0.0;
    }
    // First step uses (u0, v0) directly since q0 = u0 - R^{-1} v0 alone can
    // be the trivial fixed point.
    VectorXd rinv_v0 = v0;
    rinv_v0.head(n_) /= rho_x_;
    rinv_v0.segment(n_, m_) /= rho_y_;
    VectorXd q = u0 - rinv_v0;
    VectorXd w = u0 + rinv_v0;
    VectorXd ut(d);
    linear_step(w, ut);
    q += alpha * (ut - u0);

    VectorXd tq(d), g(d);
    apply_t(q, tq);
    g = tq - q;

    const int mem = std::max(0, settings_.anderson_memory);
    MatrixXd s_hist(d, std::max(mem, 1)), y_hist(d, std::max(mem, 1));
    MatrixXd gram = MatrixXd::Zero(std::max(mem, 1), std::max(mem, 1));
    int stored = 0;
    VectorXd q_new(d), tq_new(d), g_new(d), q_aa(d), tq_aa(d), g_aa(d);

    ConicSolution sol;
    sol.equilibrated = settings_.equilibrate;
    int iter = 0;
    int last_rescale = 0;
    for (; iter < settings_.max_iters; ++iter) {
      if (iter % std::max(1, settings_.check_interval) == 0) {
        if (check(q, &sol)) {
          sol.iterations = iter;
          return sol;
        }
        if (settings_.adaptive_scale && have_residuals_ && iter - last_rescale >= kMinRescaleIters) {
          const double ratio = std::sqrt(std::max(last_primal_, 1e-300) / std::max(last_dual_, 1e-300));
          if (ratio > kRescaleFactor || ratio < 1.0 / kRescaleFactor) {
            rescale(q, std::clamp(scale_ * ratio, kMinDualScale, kMaxDualScale));
            apply_t(q, tq);
            g = tq - q;
            stored = 0;
            last_rescale = iter;
          }
        }
      }
      bool accepted = false;
      if (mem > 0 && stored > 0) {
        const Eigen::Index k = stored;
        MatrixXd gk = gram.topLeftCorner(k, k);
        VectorXd rhs = y_hist.leftCols(k).transpose() * g;
        const double reg = 1e-10 * std::max(gk.diagonal().maxCoeff(), 1e-300);
        gk.diagonal().array() += reg;
        VectorXd gamma = gk.ldlt().solve(rhs);
        if (gamma.allFinite()) {
          q_aa = q + g - (s_hist.leftCols(k) + y_hist.leftCols(k)) * gamma;
          apply_t(q_aa, tq_aa);
          g_aa = tq_aa - q_aa;
          if (g_aa.allFinite() && g_aa.norm() <= g.norm()) {
            q_new = q_aa;
            tq_new = tq_aa;
            g_new = g_aa;
            accepted = true;
          }
        }
        if (!accepted && settings_.anderson_reset) stored = 0;
      }
      if (!accepted) {
        q_new = tq;
        apply_t(q_new, tq_new);
        g_new = tq_new - q_new;
      }
      if (mem > 0) {
        if (stored == mem) {
          // Drop the oldest pair; columns stay ordered oldest first.
          for (int j = 1; j < mem; ++j) {
            s_hist.col(j - 1) = s_hist.col(j);
            y_hist.col(j - 1) = y_hist.col(j);
          }
          gram.topLeftCorner(mem - 1, mem - 1) = gram.bottomRightCorner(mem - 1, mem - 1).eval();
          --stored;
        }
        s_hist.col(stored) = q_new - q;
        y_hist.col(stored) = g_new - g;
        for (int j = 0; j <= stored; ++j) {
          const double v = y_hist.col(stored).dot(y_hist.col(j));
          gram(stored, j) = v;
          gram(j, stored) = v;
        }
        ++stored;
      }
      q.swap(q_new);
      tq.swap(tq_new);
      g.swap(g_new);
    }
    check(q, &sol);
    if (sol.status == SolveStatus::kOptimal || sol.status == SolveStatus::kPrimalInfeasible ||
        sol.status == SolveStatus::kUnbounded) {
      sol.iterations = iter;
      return sol;
    }
    sol.status = SolveStatus::kMaxIterations;
    sol.iterations = iter;
    return sol;
  }

 private:
  // Changes the dual metric keeping the current (u, v) pair.
  void rescale(VectorXd& q, double new_scale) {
    project_u(q, u_);
    const VectorXd vy = rho_y_ * (u_.segment(n_, m_) - q.segment(n_, m_));
    scale_ = new_scale;
    rho_y_ = 1.0 / scale_;
    factor();
    q.segment(n_, m_) = u_.segment(n_, m_) - vy / rho_y_;
  }

  void factor() {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(n_ + m_ + a_.nonZeros()));
    for (int j = 0; j < n_; ++j) trip.emplace_back(j, j, rho_x_);
    for (int i = 0; i < m_; ++i) trip.emplace_back(n_ + i, n_ + i, -rho_y_);
    for (int k = 0; k < a_.outerSize(); ++k) {
      for (SpMat::InnerIterator it(a_, k); it; ++it) {
        trip.emplace_back(n_ + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
      }
    }
    SpMat kkt(n_ + m_, n_ + m_);
    kkt.setFromTriplets(trip.begin(), trip.end());
    if (!analyzed_) {
      ldlt_.analyzePattern(kkt);
      analyzed_ = true;
    }
    ldlt_.factorize(kkt);
    if (ldlt_.info() != Eigen::Success) throw std::runtime_error("conic solve: KKT factorization failed");
    // g = M^{-1} h with h = (c, b).
    VectorXd rhs(n_ + m_);
    rhs << c_, -b_;
    const VectorXd g = ldlt_.solve(rhs);
    gx_ = g.head(n_);
    gy_ = g.tail(m_);
    denom_ = 1.0 + c_.dot(gx_) + b_.dot(gy_);
  }

  // u~ = (R + Q)^{-1} R w with R = diag(rho_x I, rho_y I, 1).
  void linear_step(const VectorXd& w, VectorXd& out) {
    rhs_.resize(n_ + m_);
    rhs_.head(n_) = rho_x_ * w.head(n_);
    rhs_.tail(m_) = -rho_y_ * w.segment(n_, m_);
    z_ = ldlt_.solve(rhs_);
    out.resize(n_ + m_ + 1);
    const double tau = (w(n_ + m_) + c_.dot(z_.head(n_)) + b_.dot(z_.tail(m_))) / denom_;
    out.head(n_) = z_.head(n_) - tau * gx_;
    out.segment(n_, m_) = z_.tail(m_) - tau * gy_;
    out(n_ + m_) = tau;
  }

  void project_u(const VectorXd& q, VectorXd& u) {
    u = q;
    projector_.project(u.data() + n_, true);
    u(n_ + m_) = std::max(u(n_ + m_), 0.0);
  }

  // T(q) = q + alpha (R(2 Pi(q) - q) - Pi(q)).
  void apply_t(const VectorXd& q, VectorXd& out) {
    project_u(q, u_);
    w_ = 2.0 * u_ - q;
    linear_step(w_, ut_);
    out = q + settings_.relaxation * (ut_ - u_);
  }

  // Evaluates termination criteria at q; fills `sol` when done.
  bool check(const VectorXd& q, ConicSolution* sol) {
    project_u(q, u_);
    const double tau = u_(n_ + m_);
    VectorXd ux = u_.head(n_);
    VectorXd uy = u_.segment(n_, m_);
    VectorXd vy = rho_y_ * (uy - q.segment(n_, m_));

    // Directions in the original space (up to positive scaling).
    VectorXd x_dir = eq_.col.cwiseProduct(ux) * scale_b_;
    VectorXd s_dir = vy.cwiseQuotient(eq_.row) * scale_b_;
    VectorXd y_dir = eq_.row.cwiseProduct(uy) * scale_c_;

    if (tau > 1e-300) {
      VectorXd x = x_dir / tau;
      VectorXd s = s_dir / tau;
      VectorXd y = y_dir / tau;
      const double cx = p_.c.dot(x);
      const double by = p_.b.dot(y);
      Residuals r;
      r.primal = (p_.A * x + s - p_.b).norm() / (1.0 + b_norm_);
      r.dual = (p_.A.transpose() * y + p_.c).norm() / (1.0 + c_norm_);
      r.gap = std::abs(cx + by) / (1.0 + std::abs(cx) + std::abs(by));
      sol->x = x;
      sol->y = y;
      sol->s = s;
      sol->residuals = r;
      last_primal_ = r.primal;
      last_dual_ = r.dual;
      have_residuals_ = true;
      sol->objective = cx;
      if (settings_.verbose) {
        std::fprintf(stderr, "conic: tau %.3e primal %.3e dual %.3e gap %.3e scale %.3e obj %.9e\n", tau, r.primal,
                     r.dual, r.gap, scale_, cx);
      }
      if (r.primal <= settings_.tol && r.dual <= settings_.tol && r.gap <= settings_.tol) {
        sol->status = SolveStatus::kOptimal;
        return true;
      }
    }
    const double by = p_.b.dot(y_dir);
    if (by < 0.0) {
      VectorXd cert = y_dir / (-by);
      const double res = (p_.A.transpose() * cert).norm();
      if (res <= settings_.infeasibility_tol) {
        sol->status = SolveStatus::kPrimalInfeasible;
        sol->certificate = cert;
        sol->certificate_residual = res;
        return true;
      }
    }
    const double cx = p_.c.dot(x_dir);
    if (cx < 0.0) {
      VectorXd cert = x_dir / (-cx);
      const double res = (p_.A * cert + s_dir / (-cx)).norm();
      if (res <= settings_.infeasibility_tol) {
        sol->status = SolveStatus::kUnbounded;
        sol->certificate = cert;
        sol->certificate_residual = res;
        return true;
      }
    }
    return false;
  }

  const ConicProblem& p_;
  ConicSettings settings_;
  int n_, m_;
  ConeProjector projector_;
  Equilibration eq_;
  SpMat a_;
  VectorXd b_, c_;
  double scale_b_ = 1.0, scale_c_ = 1.0;
  double b_norm_ = 0.0, c_norm_ = 0.0;
  Eigen::SimplicialLDLT<SpMat> ldlt_;
  bool analyzed_ = false;
  double scale_ = 1.0;
  double last_primal_ = 0.0, last_dual_ = 0.0;
  bool have_residuals_ = false;
  VectorXd gx_, gy_;
  double denom_ = 1.0;
  double rho_x_ = 1.0, rho_y_ = 1.0;
  VectorXd rhs_, z_, u_, w_, ut_;
};

}  // namespace

ConicSolution solve(const ConicProblem& problem, const ConicSettings& settings, const WarmStart* warm) {
  problem.audit();
  if (problem.num_variables() == 0) return solve_constant(problem, settings);
  HsdeSolver solver(problem, settings);
  return solver.run(warm);
}

}  // namespace gcran
