// Quadratic forms q(x) = x^T A x + 2 b^T x + c and the fractional program
// built from them.
//
// NOTE the factor 2 on the linear term. Every routine in the library, and
// the JSON instance format, uses this convention.

#pragma once

#include "qfrac/linalg.hpp"

#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qfrac {

/// A real number or one of the two infinities, ordered as the reals.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : v_(v) {}  // NOLINT: implicit by design of use

  static constexpr ExtendedReal neg_inf() {
    return ExtendedReal(-std::numeric_limits<double>::infinity());
  }
  static constexpr ExtendedReal pos_inf() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  constexpr double value() const { return v_; }
  bool is_finite() const { return std::isfinite(v_); }
  bool is_neg_inf() const { return std::isinf(v_) && v_ < 0; }
  bool is_pos_inf() const { return std::isinf(v_) && v_ > 0; }

  friend constexpr auto operator<=>(ExtendedReal a, ExtendedReal b) {
    return a.v_ <=> b.v_;
  }
  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) {
    return a.v_ == b.v_;
  }

 private:
  double v_ = 0.0;
};

inline std::string to_string(ExtendedReal x) {
  if (x.is_neg_inf()) return "-inf";
  if (x.is_pos_inf()) return "+inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x.value());
  return buf;
}

/// Level-set membership tolerance used by find_level_point and feasibility
/// checks.
inline double feas_tolerance(double level) {
  return 1e-8 * (1.0 + std::abs(level));
}

struct QuadraticForm {
  SymMatrix A;
  Vector b;
  double c = 0.0;

  QuadraticForm() : A(SymMatrix::zero(1)), b(Vector::Zero(1)) {}
  QuadraticForm(SymMatrix a, Vector lin, double constant)
      : A(std::move(a)), b(std::move(lin)), c(constant) {
    if (b.size() != A.dim()) {
      throw std::invalid_argument("QuadraticForm: b has wrong length");
    }
  }

  static QuadraticForm zero(int n) {
    return {SymMatrix::zero(n), Vector::Zero(n), 0.0};
  }
  static QuadraticForm constant(int n, double c) {
    return {SymMatrix::zero(n), Vector::Zero(n), c};
  }

  int dim() const { return A.dim(); }

  friend QuadraticForm operator+(const QuadraticForm& p,
                                 const QuadraticForm& q) {
    return {p.A + q.A, p.b + q.b, p.c + q.c};
  }
  friend QuadraticForm operator-(const QuadraticForm& p,
                                 const QuadraticForm& q) {
    return {p.A - q.A, p.b - q.b, p.c - q.c};
  }
  friend QuadraticForm operator*(double s, const QuadraticForm& q) {
    return {s * q.A, s * q.b, s * q.c};
  }
  friend bool operator==(const QuadraticForm& p, const QuadraticForm& q) {
    return p.A == q.A && p.b == q.b && p.c == q.c;
  }
};

inline double evaluate(const QuadraticForm& q, const Vector& x) {
  if (x.size() != q.dim()) {
    throw std::invalid_argument("evaluate: dimension mismatch");
  }
  return x.dot(q.A.matrix() * x) + 2.0 * q.b.dot(x) + q.c;
}

inline Vector gradient(const QuadraticForm& q, const Vector& x) {
  return 2.0 * (q.A.matrix() * x + q.b);
}

/// Bordered matrix [[A, b], [b^T, c]] with (x,1)^T M (x,1) = q(x).
inline SymMatrix homogenize(const QuadraticForm& q) {
  const int n = q.dim();
  Matrix m(n + 1, n + 1);
  m.topLeftCorner(n, n) = q.A.matrix();
  m.topRightCorner(n, 1) = q.b;
  m.bottomLeftCorner(1, n) = q.b.transpose();
  m(n, n) = q.c;
  return SymMatrix(m);
}

/// q'(x) = q(x + offset).
inline QuadraticForm shift(const QuadraticForm& q, const Vector& offset) {
  if (offset.size() != q.dim()) {
    throw std::invalid_argument("shift: dimension mismatch");
  }
  return {q.A, q.A.matrix() * offset + q.b, evaluate(q, offset)};
}

/// z -> q(origin + basis * z), a form in basis.cols() variables.
inline QuadraticForm restrict_affine(const QuadraticForm& q,
                                     const Vector& origin,
                                     const Matrix& basis) {
  const Matrix& a = q.A.matrix();
  return {SymMatrix(basis.transpose() * a * basis),
          basis.transpose() * (a * origin + q.b), evaluate(q, origin)};
}

/// Global minimizer -A^+ b when q is bounded below, otherwise nothing.
inline std::optional<Vector> minimizer(const QuadraticForm& q) {
  const double tol = rank_tolerance(q.A);
  if (min_eig(q.A) < -tol) return std::nullopt;
  const PinvResult r = pinv_apply(q.A, -q.b, tol);
  if (!r.consistent) return std::nullopt;
  return r.solution;
}

/// (inf q, sup q) over all of R^n.
inline std::pair<ExtendedReal, ExtendedReal> inf_sup(const QuadraticForm& q) {
  ExtendedReal lo = ExtendedReal::neg_inf();
  ExtendedReal hi = ExtendedReal::pos_inf();
  if (const auto x = minimizer(q)) lo = evaluate(q, *x);
  if (const auto x = minimizer(-1.0 * q)) hi = evaluate(q, *x);
  return {lo, hi};
}

namespace detail {

// Roots of alpha s^2 + 2 beta s + gamma = 0, smaller magnitude first.
inline std::vector<double> scalar_quadratic_roots(double alpha, double beta,
                                                  double gamma, double scale) {
  std::vector<double> roots;
  if (std::abs(alpha) <= 1e-14 * scale) {
    if (std::abs(beta) > 1e-300) roots.push_back(-gamma / (2.0 * beta));
    return roots;
  }
  double disc = beta * beta - alpha * gamma;
  if (disc < 0.0) {
    if (disc < -1e-14 * (beta * beta + std::abs(alpha * gamma))) return roots;
    disc = 0.0;
  }
  const double qq = -(beta + (beta >= 0.0 ? 1.0 : -1.0) * std::sqrt(disc));
  if (qq == 0.0) {
    roots.push_back(0.0);
    return roots;
  }
  double r1 = qq / alpha;
  double r2 = gamma / qq;
  if (std::abs(r2) < std::abs(r1)) std::swap(r1, r2);
  roots.push_back(r1);
  roots.push_back(r2);
  return roots;
}

}  // namespace detail

/// A point x with |q(x) - level| <= feas_tolerance(level), or nothing when
/// level lies outside [inf q, sup q].
///
/// Searches along the eigen-directions of A by decreasing |eigenvalue|, then
/// along the null-space part of b and the direction of the stationary point.
/// The first direction on which the scalar quadratic has a root wins; of its
/// two roots the one closer to the origin is taken.
inline std::optional<Vector> find_level_point(const QuadraticForm& q,
                                              double level) {
  const int n = q.dim();
  const double tol = feas_tolerance(level);
  const double q0 = q.c;
  if (std::abs(q0 - level) <= tol) return Vector::Zero(n);

  const auto [lo, hi] = inf_sup(q);
  if (level < lo.value() - tol || level > hi.value() + tol) return std::nullopt;

  const EigenDecomp e = sym_eigen(q.A);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return std::abs(e.values(i)) > std::abs(e.values(j));
  });

  std::vector<Vector> dirs;
  for (int i : order) dirs.push_back(e.vectors.col(i));
  const Matrix nb = null_space(q.A);
  if (nb.cols() > 0) {
    Vector p = nb * (nb.transpose() * q.b);
    if (p.norm() > 1e-14) dirs.push_back(p / p.norm());
  }
  {
    const PinvResult st = pinv_apply(q.A, -q.b);
    if (st.solution.norm() > 1e-14) dirs.push_back(st.solution);
  }

  const double scale = 1.0 + q.A.norm() + q.b.norm() + std::abs(q.c);
  std::optional<Vector> best;
  double best_res = std::numeric_limits<double>::infinity();
  for (const Vector& v : dirs) {
    const double alpha = v.dot(q.A.matrix() * v);
    const double beta = q.b.dot(v);
    for (double s : detail::scalar_quadratic_roots(alpha, beta, q0 - level,
                                                   scale * v.squaredNorm())) {
      const Vector x = s * v;
      const double res = std::abs(evaluate(q, x) - level);
      if (res <= tol) return x;
      if (res < best_res) {
        best_res = res;
        best = x;
      }
      break;  // only the smaller-magnitude root
    }
  }

  // Newton polish of the closest candidate.
  if (best) {
    Vector x = *best;
    for (int it = 0; it < 50; ++it) {
      const double r = evaluate(q, x) - level;
      if (std::abs(r) <= tol) return x;
      const Vector gr = gradient(q, x);
      const double g2 = gr.squaredNorm();
      if (g2 < 1e-300) break;
      x -= (r / g2) * gr;
    }
  }
  return std::nullopt;
}

/// inf { f1/f2 : u <= g <= v }; g absent means unconstrained.
struct FractionalProblem {
  QuadraticForm f1;
  QuadraticForm f2;
  std::optional<QuadraticForm> g;
  ExtendedReal u = ExtendedReal::neg_inf();
  ExtendedReal v = ExtendedReal::pos_inf();

  int dim() const { return f1.dim(); }

  /// Throws std::invalid_argument when the invariants are violated.
  void validate() const {
    if (f2.dim() != f1.dim() || (g && g->dim() != f1.dim())) {
      throw std::invalid_argument("FractionalProblem: dimension mismatch");
    }
    if (u.is_pos_inf() || v.is_neg_inf()) {
      throw std::invalid_argument("FractionalProblem: u must be < +inf and v > -inf");
    }
    if (u > v) throw std::invalid_argument("FractionalProblem: u > v");
  }

  bool constrained() const {
    return g.has_value() && (u.is_finite() || v.is_finite());
  }

  /// Membership in X to the given absolute slack.
  bool feasible(const Vector& x, double slack) const {
    if (!constrained()) return true;
    const double gx = evaluate(*g, x);
    if (u.is_finite() && gx < u.value() - slack) return false;
    if (v.is_finite() && gx > v.value() + slack) return false;
    return true;
  }

  double ratio(const Vector& x) const {
    return evaluate(f1, x) / evaluate(f2, x);
  }
};

/// The same instance expressed in coordinates y = x - offset, i.e. every
/// form is replaced by q(y + offset).
inline FractionalProblem translate(const FractionalProblem& p,
                                   const Vector& offset) {
  FractionalProblem out = p;
  out.f1 = shift(p.f1, offset);
  out.f2 = shift(p.f2, offset);
  if (p.g) out.g = shift(*p.g, offset);
  return out;
}

}  // namespace qfrac
