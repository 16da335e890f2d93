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

// Embedded cone-program solver over zero, nonnegative, real PSD and complex
// Hermitian PSD cones.
//
// Problems are held in the standard form
//
//   minimize    c'x
//   subject to  b - A x = s,  s in K = K_1 x ... x K_p
//
// with dual  maximize -b'y  s.t.  A'y + c = 0,  y in K*.  The zero cone's
// dual is the free cone; the other cones are self-dual.
//
// Real PSD blocks of side n use the scaled lower-triangular vectorization
// svec(S): entries S(i, j) with i >= j, column-major, off-diagonal entries
// multiplied by sqrt(2), so that svec(S)'svec(T) = Tr(S T).
//
// Hermitian PSD blocks of side n use hvec(H), n^2 reals: column by column,
// H(j, j) followed by sqrt(2) Re H(i, j), sqrt(2) Im H(i, j) for i > j, so
// that hvec(G)'hvec(H) = Re Tr(G H).
//
// The solver is an operator-splitting (Douglas-Rachford / ADMM) iteration on
// the homogeneous self-dual embedding with over-relaxation, type-II Anderson
// acceleration and Ruiz equilibration.  One sparse quasi-definite LDL'
// factorization is done per solve; each iteration costs one pair of
// triangular solves plus one dense eigendecomposition per PSD block
// (O(n^3) for side n; a Hermitian block costs one complex n x n
// eigendecomposition rather than a real 2n x 2n one).

#ifndef GCRAN_CONIC_H_
#define GCRAN_CONIC_H_

#include <complex>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace gcran {

enum class ConeKind { kZero, kNonneg, kPsd, kHermitianPsd };

struct Cone {
  ConeKind kind;
  // Number of rows for kZero / kNonneg, matrix side for the PSD kinds.
  int size;

  int dim() const {
    switch (kind) {
      case ConeKind::kPsd:
        return size * (size + 1) / 2;
      case ConeKind::kHermitianPsd:
        return size * size;
      default:
        return size;
    }
  }
  bool is_matrix() const { return kind == ConeKind::kPsd || kind == ConeKind::kHermitianPsd; }
};

// Named contiguous range of the decision vector.  Only used for debugging
// dumps and layout checks; the solver ignores it.
struct VariableBlock {
  std::string name;
  int offset;
  int size;
};

struct ConicProblem {
  Eigen::VectorXd c;
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  std::vector<Cone> cones;
  std::vector<VariableBlock> layout;

  int num_variables() const { return static_cast<int>(c.size()); }
  int num_rows() const { return static_cast<int>(b.size()); }

  // Throws std::invalid_argument when cone dimensions do not tile b, the
  // objective length differs from the column count, or data contain NaN.
  void audit() const;
};

enum class SolveStatus { kOptimal, kPrimalInfeasible, kUnbounded, kMaxIterations };

const char* to_string(SolveStatus status);

struct Residuals {
  double primal = 0.0;  // |Ax + s - b| / (1 + |b|)
  double dual = 0.0;    // |A'y + c| / (1 + |c|)
  double gap = 0.0;     // |c'x + b'y| / (1 + |c'x| + |b'y|)
};

struct ConicSettings {
  double tol = 1e-7;
  int max_iters = 50000;
  // Normalized certificate residual accepted for infeasibility/unboundedness.
  double infeasibility_tol = 1e-6;
  bool equilibrate = true;
  int ruiz_passes = 10;
  double relaxation = 1.5;
  // Splitting metric diag(rho_x I, I / scale, 1); any positive choice has the
  // same fixed points.
  double rho_x = 1e-3;
  double scale = 0.1;
  // Rebalances primal and dual residuals by adjusting `scale` during the solve.
  bool adaptive_scale = true;
  // Print residuals at every check to stderr.
  bool verbose = false;
  int anderson_memory = 10;
  // Clear the Anderson history whenever an extrapolated step is rejected.
  bool anderson_reset = false;
  int check_interval = 5;
};

struct ConicSolution {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd s;
  SolveStatus status = SolveStatus::kMaxIterations;
  Residuals residuals;
  double objective = 0.0;
  int iterations = 0;
  bool equilibrated = false;
  // kPrimalInfeasible: y in K* with b'y = -1 and A'y ~ 0.
  // kUnbounded:        x with c'x = -1 and -Ax in K (approximately).
  // Empty otherwise.
  Eigen::VectorXd certificate;
  double certificate_residual = 0.0;
};

// Optional warm start; vectors must match the problem dimensions.
struct WarmStart {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd s;
};

ConicSolution solve(const ConicProblem& problem, const ConicSettings& settings = {},
                    const WarmStart* warm = nullptr);

// Projection onto a product of cones (for y the dual cone is used when
// `dual` is set, which only differs for zero cones).
void project_onto_cones(const std::vector<Cone>& cones, Eigen::Ref<Eigen::VectorXd> v, bool dual);

// Human-readable dump: layout, cones and the constraint matrix in triplet form.
void dump(const ConicProblem& problem, std::ostream& out);

// Incremental assembly of a ConicProblem.  Rows are laid out in the order
// cones are added.
class ProblemBuilder {
 public:
  int add_variables(std::string name, int count);
  int add_cone(Cone cone);

  void add_a(int row, int col, double value);
  void set_b(int row, double value) { b_[row] = value; }
  void add_c(int col, double value) { c_[col] += value; }

  int num_variables() const { return static_cast<int>(c_.size()); }
  int num_rows() const { return static_cast<int>(b_.size()); }

  ConicProblem build() const;

 private:
  std::vector<double> c_;
  std::vector<double> b_;
  std::vector<Cone> cones_;
  std::vector<VariableBlock> layout_;
  std::vector<Eigen::Triplet<double>> triplets_;
};

// ---------------------------------------------------------------------------
// Symmetric / Hermitian matrix utilities.

inline constexpr double kSqrt2 = 1.41421356237309504880;

inline int svec_dim(int n) { return n * (n + 1) / 2; }

// Position of entry (i, j), i >= j, inside svec of an n x n matrix.
inline int svec_index(int n, int i, int j) { return j * n - j * (j - 1) / 2 + (i - j); }

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> svec(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const int n = static_cast<int>(m.rows());
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(svec_dim(n));
  int k = 0;
  for (int j = 0; j < n; ++j) {
    v(k++) = m(j, j);
    for (int i = j + 1; i < n; ++i) v(k++) = Scalar(kSqrt2) * m(i, j);
  }
  return v;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> smat(
    const Eigen::MatrixBase<Derived>& v, int n) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(n, n);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    m(j, j) = v(k++);
    for (int i = j + 1; i < n; ++i) {
      m(i, j) = v(k++) / Scalar(kSqrt2);
      m(j, i) = m(i, j);
    }
  }
  return m;
}

inline int hvec_dim(int n) { return n * n; }

// Position of H(j, j) inside hvec of an n x n matrix.  For i > j,
// sqrt(2) Re H(i, j) sits at hvec_index(n, j) + 2 (i - j) - 1 and the
// imaginary part right after it.
inline int hvec_index(int n, int j) { return 2 * j * n - j * j; }

template <typename Derived>
Eigen::VectorXd hvec(const Eigen::MatrixBase<Derived>& h) {
  const int n = static_cast<int>(h.rows());
  Eigen::VectorXd v(hvec_dim(n));
  int k = 0;
  for (int j = 0; j < n; ++j) {
    v(k++) = std::real(h(j, j));
    for (int i = j + 1; i < n; ++i) {
      v(k++) = kSqrt2 * std::real(h(i, j));
      v(k++) = kSqrt2 * std::imag(h(i, j));
    }
  }
  return v;
}

template <typename Derived>
Eigen::MatrixXcd hmat(const Eigen::MatrixBase<Derived>& v, int n) {
  Eigen::MatrixXcd h(n, n);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    h(j, j) = v(k++);
    for (int i = j + 1; i < n; ++i) {
      h(i, j) = std::complex<double>(v(k), v(k + 1)) / kSqrt2;
      h(j, i) = std::conj(h(i, j));
      k += 2;
    }
  }
  return h;
}

// Nearest PSD matrix in Frobenius norm: negative eigenvalues clamped to zero.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> project_psd(
    const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Mat> eig(Mat(s.derived()), Eigen::ComputeEigenvectors);
  const auto& lambda = eig.eigenvalues();
  const auto& u = eig.eigenvectors();
  Mat out = Mat::Zero(s.rows(), s.cols());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > 0) out.noalias() += lambda(i) * u.col(i) * u.col(i).adjoint();
  }
  return out;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& h, double tol = 1e-12) {
  if (h.rows() != h.cols()) return false;
  const double scale = std::max(1.0, static_cast<double>(h.cwiseAbs().maxCoeff()));
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

// Real symmetric embedding [[Re H, -Im H], [Im H, Re H]] of a Hermitian H.
// PSD iff H is PSD; every eigenvalue of H appears twice.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar::value_type, Eigen::Dynamic, Eigen::Dynamic> hermitian_embed(
    const Eigen::MatrixBase<Derived>& h) {
  using Real = typename Derived::Scalar::value_type;
  if (!is_hermitian(h)) throw std::invalid_argument("hermitian_embed: input is not Hermitian");
  const Eigen::Index n = h.rows();
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> e(2 * n, 2 * n);
  e.topLeftCorner(n, n) = h.real();
  e.bottomRightCorner(n, n) = h.real();
  e.topRightCorner(n, n) = -h.imag();
  e.bottomLeftCorner(n, n) = h.imag();
  return e;
}

// Inverse of hermitian_embed for matrices that only approximately carry the
// embedding structure: diagonal blocks are averaged and the off-diagonal
// blocks antisymmetrized, i.e. the orthogonal projection onto the structure.
template <typename Derived>
Eigen::Matrix<std::complex<typename Derived::Scalar>, Eigen::Dynamic, Eigen::Dynamic> hermitian_unembed(
    const Eigen::MatrixBase<Derived>& e) {
  using Real = typename Derived::Scalar;
  const Eigen::Index n = e.rows() / 2;
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> re =
      Real(0.5) * (e.topLeftCorner(n, n) + e.bottomRightCorner(n, n));
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> im =
      Real(0.5) * (e.bottomLeftCorner(n, n) - e.topRightCorner(n, n));
  Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> h(n, n);
  h.real() = Real(0.5) * (re + re.transpose());
  h.imag() = Real(0.5) * (im - im.transpose());
  return h;
}

}  // namespace gcran

#endif  // GCRAN_CONIC_H_
