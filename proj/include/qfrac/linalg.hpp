// Dense symmetric linear algebra used throughout qfrac.
//
// Everything here works on small dense matrices (n up to a few hundred).
// The eigensolver is a cyclic Jacobi iteration; pseudoinverse application
// and range tests are built on top of the spectral decomposition with a
// scale-relative rank cutoff.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qfrac {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Convergence threshold for Jacobi sweeps, relative to the Frobenius norm.
inline constexpr double kJacobiTol = 1e-12;
/// Eigenvalues with |lambda| <= kRankTol * max(1, |M|) count as zero.
inline constexpr double kRankTol = 1e-10;
/// Residual threshold for consistency / range membership.
inline constexpr double kLinTol = 1e-8;

/// Real symmetric matrix. The input is symmetrized on construction, so
/// entries (i, j) and (j, i) are bitwise identical afterwards.
class SymMatrix {
 public:
  SymMatrix() : m_(Matrix::Zero(1, 1)) {}

  explicit SymMatrix(const Matrix& m) {
    if (m.rows() != m.cols()) {
      throw std::invalid_argument("SymMatrix: matrix is not square");
    }
    if (m.rows() < 1) {
      throw std::invalid_argument("SymMatrix: dimension must be at least 1");
    }
    m_ = 0.5 * (m + m.transpose());
  }

  static SymMatrix zero(int n) { return SymMatrix(Matrix::Zero(n, n)); }
  static SymMatrix identity(int n) { return SymMatrix(Matrix::Identity(n, n)); }
  static SymMatrix diagonal(const Vector& d) {
    return SymMatrix(Matrix(d.asDiagonal()));
  }
  /// Single nonzero entry `value` at the bottom-right corner.
  static SymMatrix corner(int n, double value = 1.0) {
    Matrix m = Matrix::Zero(n, n);
    m(n - 1, n - 1) = value;
    return SymMatrix(m);
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  /// Frobenius norm.
  double norm() const { return m_.norm(); }

  Vector operator*(const Vector& x) const { return m_ * x; }

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    check_same(a, b);
    return SymMatrix(a.m_ + b.m_);
  }
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    check_same(a, b);
    return SymMatrix(a.m_ - b.m_);
  }
  friend SymMatrix operator*(double s, const SymMatrix& a) {
    return SymMatrix(s * a.m_);
  }
  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.m_ == b.m_;
  }

 private:
  static void check_same(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim()) {
      throw std::invalid_argument("SymMatrix: dimension mismatch");
    }
  }

  Matrix m_;
};

/// Spectral decomposition M = V diag(values) V^T, eigenvalues ascending.
struct EigenDecomp {
  Vector values;
  Matrix vectors;  // column i pairs with values(i)
};

inline double rank_tolerance(const SymMatrix& m) {
  return kRankTol * std::max(1.0, m.norm());
}

/// Full eigendecomposition by cyclic Jacobi rotations.
///
/// Ordering is deterministic: ascending eigenvalues, and each eigenvector is
/// flipped so its largest-magnitude entry is positive (the first such entry
/// on ties).
inline EigenDecomp sym_eigen(const SymMatrix& sym) {
  const int n = sym.dim();
  Matrix a = sym.matrix();
  Matrix v = Matrix::Identity(n, n);
  const double scale = a.norm();

  for (int sweep = 0; sweep < 100 && scale > 0.0; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
    }
    if (std::sqrt(off) <= kJacobiTol * scale) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i) < a(j, j); });

  EigenDecomp out{Vector(n), Matrix(n, n)};
  for (int k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    Vector col = v.col(order[k]);
    Eigen::Index imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    if (col(imax) < 0.0) col = -col;
    out.vectors.col(k) = col;
  }
  return out;
}

inline double min_eig(const SymMatrix& m) {
  if (m.dim() == 1) return m(0, 0);
  return sym_eigen(m).values(0);
}

/// Orthonormal basis (as columns) of the eigenvectors whose eigenvalues have
/// magnitude at most `tol`. Zero columns when M is nonsingular at that level.
inline Matrix null_space(const SymMatrix& m, double tol) {
  const EigenDecomp e = sym_eigen(m);
  std::vector<int> keep;
  for (int i = 0; i < m.dim(); ++i) {
    if (std::abs(e.values(i)) <= tol) keep.push_back(i);
  }
  Matrix basis(m.dim(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    basis.col(static_cast<Eigen::Index>(k)) = e.vectors.col(keep[k]);
  }
  return basis;
}

inline Matrix null_space(const SymMatrix& m) {
  return null_space(m, rank_tolerance(m));
}

struct PinvResult {
  Vector solution;
  bool consistent = false;
};

/// Least-norm solution of M x = rhs via the Moore-Penrose inverse.
/// `consistent` reports whether the residual is within kLinTol*(1+|rhs|).
inline PinvResult pinv_apply(const SymMatrix& m, const Vector& rhs,
                             double rank_tol, double lin_tol = kLinTol) {
  if (rhs.size() != m.dim()) {
    throw std::invalid_argument("pinv_apply: dimension mismatch");
  }
  const EigenDecomp e = sym_eigen(m);
  Vector x = Vector::Zero(m.dim());
  for (int i = 0; i < m.dim(); ++i) {
    if (std::abs(e.values(i)) <= rank_tol) continue;
    x += e.vectors.col(i) * (e.vectors.col(i).dot(rhs) / e.values(i));
  }
  const double residual = (m.matrix() * x - rhs).norm();
  return {x, residual <= lin_tol * (1.0 + rhs.norm())};
}

inline PinvResult pinv_apply(const SymMatrix& m, const Vector& rhs) {
  return pinv_apply(m, rhs, rank_tolerance(m));
}

/// True iff w lies in the column space of M, i.e. its component along the
/// numerical null space is below kLinTol*(1+|w|).
inline bool range_contains(const SymMatrix& m, const Vector& w, double rank_tol,
                           double lin_tol = kLinTol) {
  if (w.size() != m.dim()) {
    throw std::invalid_argument("range_contains: dimension mismatch");
  }
  const Matrix nb = null_space(m, rank_tol);
  if (nb.cols() == 0) return true;
  return (nb.transpose() * w).norm() <= lin_tol * (1.0 + w.norm());
}

inline bool range_contains(const SymMatrix& m, const Vector& w) {
  return range_contains(m, w, rank_tolerance(m));
}

}  // namespace qfrac
