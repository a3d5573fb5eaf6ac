// Three-valued checkers for the structural assumptions the solver relies on.
//
// Each checker answers holds / fails / unknown. `unknown` means none of the
// implemented sufficient tests decided the question; it is never a guess.

#pragma once

#include "qfrac/linalg.hpp"
#include "qfrac/lmi.hpp"
#include "qfrac/model.hpp"

#include <Eigen/Eigenvalues>

#include <string>
#include <utility>
#include <variant>

namespace qfrac {

enum class Verdict { holds, fails, unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::unknown: return "unknown";
  }
  return "?";
}

using ScalarPair = std::pair<double, double>;
using Witness = std::variant<std::monostate, Vector, ScalarPair, Matrix>;

struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::unknown;
  Witness witness;
  std::string note;

  bool holds() const { return verdict == Verdict::holds; }
  const Vector* vector_witness() const { return std::get_if<Vector>(&witness); }
  const ScalarPair* pair_witness() const { return std::get_if<ScalarPair>(&witness); }
  const Matrix* matrix_witness() const { return std::get_if<Matrix>(&witness); }
};

/// inf g < u <= v < sup g (primal Slater condition for the two-sided set).
inline CheckResult check_assumption_a(const QuadraticForm& g, ExtendedReal u,
                                      ExtendedReal v) {
  CheckResult r{"assumption_a", Verdict::holds, {}, ""};
  const auto [lo, hi] = inf_sup(g);
  r.witness = ScalarPair{lo.value(), hi.value()};
  if (u > hi || v < lo) {
    r.verdict = Verdict::fails;
    r.note = "constraint set is empty: [u, v] misses the range of g";
    return r;
  }
  const bool lower_ok = u.is_finite() && lo.value() < u.value() - feas_tolerance(u.value());
  const bool upper_ok = v.is_finite() && v.value() + feas_tolerance(v.value()) < hi.value();
  if (lower_ok && upper_ok) {
    r.note = "inf g = " + to_string(lo) + " < u and v < sup g = " + to_string(hi);
    return r;
  }
  r.verdict = Verdict::fails;
  if (!lower_ok && !upper_ok) {
    r.note = "both sides vacuous or degenerate: u <= inf g and sup g <= v";
  } else if (!lower_ok) {
    r.note = "lower side collapses: u <= inf g = " + to_string(lo) +
             "; constraint reduces to g <= v";
  } else {
    r.note = "upper side collapses: sup g = " + to_string(hi) +
             " <= v; constraint reduces to u <= g";
  }
  return r;
}

/// Constraint qualification for h(x) = x^T B x + 2 d^T x = 0: some zeta with
/// h(zeta) = 0 such that x^T B x = 0 implies (B zeta + d)^T x = 0.
///
/// Decided for definite B (always), semidefinite B (iff d in range B) and,
/// sufficiently, for indefinite B with a zero of h solving B zeta = -d.
inline CheckResult check_assumption_b(const QuadraticForm& h) {
  if (std::abs(h.c) > feas_tolerance(0.0)) {
    throw std::invalid_argument("check_assumption_b: h(0) must be 0; shift the form first");
  }
  CheckResult r{"assumption_b", Verdict::unknown, {}, ""};
  const int n = h.dim();
  const EigenDecomp e = sym_eigen(h.A);
  const double tol = rank_tolerance(h.A);
  const double lo = e.values(0);
  const double hi = e.values(n - 1);

  if (lo > tol || hi < -tol) {
    r.verdict = Verdict::holds;
    r.witness = Vector(Vector::Zero(n));
    r.note = "B is definite";
    return r;
  }
  if (lo >= -tol || hi <= tol) {
    if (range_contains(h.A, h.b)) {
      r.verdict = Verdict::holds;
      r.witness = Vector(Vector::Zero(n));
      r.note = "B is semidefinite and d lies in range(B)";
    } else {
      r.verdict = Verdict::fails;
      r.note = "B is semidefinite and d is not in range(B)";
    }
    return r;
  }

  const PinvResult z = pinv_apply(h.A, -h.b);
  if (!z.consistent) {
    r.note = "B is indefinite and B zeta = -d has no solution";
    return r;
  }
  const double hz = evaluate(h, z.solution);
  if (std::abs(hz) <= feas_tolerance(0.0) * (1.0 + z.solution.squaredNorm())) {
    r.verdict = Verdict::holds;
    r.witness = z.solution;
    r.note = "B is indefinite; zeta solves B zeta = -d with h(zeta) = 0";
  } else {
    r.note = "B is indefinite; the solution of B zeta = -d is off the level set";
  }
  return r;
}

/// Exists eta >= 0 with M(f2) + eta * [[L^T L, 0], [0, -rho]] positive
/// definite. `gram` is L^T L.
inline CheckResult check_assumption_c(const QuadraticForm& f2,
                                      const SymMatrix& gram, double rho,
                                      const LmiOptions& opts = {}) {
  if (!(rho > 0.0)) throw std::invalid_argument("check_assumption_c: rho must be positive");
  if (gram.dim() != f2.dim()) {
    throw std::invalid_argument("check_assumption_c: dimension mismatch");
  }
  const int n = f2.dim();
  Matrix m2 = Matrix::Zero(n + 1, n + 1);
  m2.topLeftCorner(n, n) = gram.matrix();
  m2(n, n) = -rho;
  const AffinePencil p(homogenize(f2), SymMatrix::zero(n + 1), SymMatrix(m2),
                       MuDomain::nonnegative);
  const InnerMax best = max_inner(p, 0.0, opts);
  const double strict = 1e-8 * p.scale();

  CheckResult r{"assumption_c", Verdict::fails, {}, ""};
  r.witness = Vector(Vector::Constant(1, *best.mu));
  if (best.value > strict) {
    r.verdict = Verdict::holds;
    r.note = "bordered matrix is positive definite at eta = " + to_string(*best.mu);
  } else {
    r.note = "max over eta >= 0 of the smallest eigenvalue is " +
             to_string(best.value) + " (not > 0)";
  }
  return r;
}

namespace detail {

inline bool is_diagonal(const Matrix& m, double tol) {
  const Matrix off = m - Matrix(m.diagonal().asDiagonal());
  return off.cwiseAbs().maxCoeff() <= tol * (1.0 + m.cwiseAbs().maxCoeff());
}

inline bool diagonalizes(const Matrix& c, const SymMatrix& p, const SymMatrix& q) {
  Eigen::JacobiSVD<Matrix> svd(c);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) <= 1e-10 * s(0)) return false;
  return is_diagonal(c.transpose() * p.matrix() * c, 1e-8) &&
         is_diagonal(c.transpose() * q.matrix() * c, 1e-8);
}

// Congruence from a definite `def`: C0 = V |D|^{-1/2}, then rotate by the
// eigenvectors of C0^T other C0.
inline Matrix congruence_from_definite(const SymMatrix& def, const SymMatrix& other) {
  const EigenDecomp e = sym_eigen(def);
  const Matrix c0 = e.vectors * e.values.cwiseAbs().cwiseSqrt().cwiseInverse().asDiagonal();
  const EigenDecomp f = sym_eigen(SymMatrix(c0.transpose() * other.matrix() * c0));
  return c0 * f.vectors;
}

// For nonsingular q: eigenbasis of q^{-1} p (real, complete), with each
// eigenspace rotated so q is diagonal on it.
inline std::optional<Matrix> congruence_from_pencil(const SymMatrix& p, const SymMatrix& q) {
  const int n = p.dim();
  const Matrix m = q.matrix().lu().solve(p.matrix());
  Eigen::EigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) return std::nullopt;
  const Eigen::VectorXcd ev = es.eigenvalues();
  for (int i = 0; i < n; ++i) {
    if (std::abs(ev(i).imag()) > 1e-9 * (1.0 + std::abs(ev(i)))) return std::nullopt;
  }
  const Matrix x = es.eigenvectors().real();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return ev(i).real() < ev(j).real(); });
  Matrix c(n, n);
  int filled = 0;
  for (int k = 0; k < n;) {
    int end = k + 1;
    const double lam = ev(order[k]).real();
    while (end < n && std::abs(ev(order[end]).real() - lam) <= 1e-8 * (1.0 + std::abs(lam))) ++end;
    Matrix group(n, end - k);
    for (int j = k; j < end; ++j) group.col(j - k) = x.col(order[j]);
    Eigen::HouseholderQR<Matrix> qr(group);
    Matrix basis = qr.householderQ() * Matrix::Identity(n, end - k);
    const EigenDecomp f = sym_eigen(SymMatrix(basis.transpose() * q.matrix() * basis));
    c.middleCols(filled, end - k) = basis * f.vectors;
    filled += end - k;
    k = end;
  }
  return c;
}

// Closed-form decision for n <= 2. Returns a witness, a disproof note, or
// nothing when the dimension is larger.
inline std::optional<CheckResult> sdc_small(const SymMatrix& p, const SymMatrix& q) {
  const int n = p.dim();
  CheckResult r{"sdc", Verdict::holds, {}, ""};
  if (n == 1) {
    r.witness = Matrix(Matrix::Identity(1, 1));
    r.note = "1x1 matrices";
    return r;
  }
  if (n != 2) return std::nullopt;

  auto nonsingular = [](const SymMatrix& a) {
    return std::abs(a.matrix().determinant()) > 1e-12 * std::max(1.0, a.matrix().squaredNorm());
  };
  for (int pass = 0; pass < 2; ++pass) {
    const SymMatrix& a = pass == 0 ? p : q;
    const SymMatrix& b = pass == 0 ? q : p;
    if (!nonsingular(b)) continue;
    const Matrix m = b.matrix().inverse() * a.matrix();
    const double tr = m.trace();
    const double det = m.determinant();
    const double disc = tr * tr - 4.0 * det;
    const double scale = 1.0 + tr * tr + std::abs(det);
    if (disc < -1e-10 * scale) {
      r.verdict = Verdict::fails;
      r.note = "not SDC: the pencil has complex eigenvalues";
      return r;
    }
    const Matrix dev = m - 0.5 * tr * Matrix::Identity(2, 2);
    if (std::abs(disc) <= 1e-10 * scale && dev.norm() > 1e-8 * (1.0 + m.norm())) {
      r.verdict = Verdict::fails;
      r.note = "not SDC: the pencil has a defective double eigenvalue (shared isotropic direction)";
      return r;
    }
    return std::nullopt;
  }

  // Both singular: columns from the two null spaces.
  const Matrix np = null_space(p);
  const Matrix nq = null_space(q);
  std::vector<Matrix> candidates;
  if (np.cols() > 0 && nq.cols() > 0) {
    Matrix c(2, 2);
    c.col(0) = nq.col(0);
    c.col(1) = np.col(0);
    candidates.push_back(c);
  }
  candidates.push_back(sym_eigen(p).vectors);
  candidates.push_back(sym_eigen(q).vectors);
  for (const Matrix& c : candidates) {
    if (diagonalizes(c, p, q)) {
      r.witness = c;
      r.note = "both matrices singular (rank <= 1)";
      return r;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Simultaneous diagonalization via congruence of a symmetric pair.
///
/// Sufficient ladder: a definite member; a nonsingular member Q with Q^{-1}P
/// real-diagonalizable; both diagonal. `fails` comes only from the closed
/// form for n <= 2.
inline CheckResult check_sdc(const SymMatrix& p, const SymMatrix& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("check_sdc: dimension mismatch");
  const int n = p.dim();
  CheckResult r{"sdc", Verdict::holds, {}, ""};

  for (int pass = 0; pass < 2; ++pass) {
    const SymMatrix& a = pass == 0 ? p : q;
    const SymMatrix& b = pass == 0 ? q : p;
    const EigenDecomp e = sym_eigen(a);
    const double tol = rank_tolerance(a);
    if (e.values(0) > tol || e.values(n - 1) < -tol) {
      const Matrix c = detail::congruence_from_definite(a, b);
      if (detail::diagonalizes(c, p, q)) {
        r.witness = c;
        r.note = pass == 0 ? "first matrix is definite" : "second matrix is definite";
        return r;
      }
    }
  }

  for (int pass = 0; pass < 2; ++pass) {
    const SymMatrix& a = pass == 0 ? p : q;
    const SymMatrix& b = pass == 0 ? q : p;
    if (null_space(b).cols() > 0) continue;
    if (const auto c = detail::congruence_from_pencil(a, b)) {
      if (detail::diagonalizes(*c, p, q)) {
        r.witness = *c;
        r.note = "nonsingular member with a real eigenbasis for the pencil";
        return r;
      }
    }
  }

  if (detail::is_diagonal(p.matrix(), 0.0) && detail::is_diagonal(q.matrix(), 0.0)) {
    r.witness = Matrix(Matrix::Identity(n, n));
    r.note = "both matrices are diagonal";
    return r;
  }

  if (auto small = detail::sdc_small(p, q)) return *small;

  r.verdict = Verdict::unknown;
  r.note = "no sufficient condition applies";
  return r;
}

/// f2 > 0 on { g <= 0 }, decided through
///   max delta  s.t.  M(f2) - delta*E + eta*M(g) >= 0,  eta >= 0,
/// which is exact when A2 and B are SDC. Requires a Slater point of g.
inline CheckResult check_well_defined(const QuadraticForm& f2,
                                      const QuadraticForm& g,
                                      const LmiOptions& opts = {}) {
  if (f2.dim() != g.dim()) throw std::invalid_argument("check_well_defined: dimension mismatch");
  const auto [glo, ghi] = inf_sup(g);
  if (!(glo.value() < 0.0)) {
    throw std::invalid_argument("check_well_defined: g has no Slater point (inf g >= 0)");
  }
  CheckResult r{"well_defined", Verdict::unknown, {}, ""};
  const CheckResult sdc = check_sdc(f2.A, g.A);
  if (!sdc.holds()) {
    r.note = "A2 and B are not known to be SDC (" + std::string(to_string(sdc.verdict)) +
             "); the LMI characterization is inapplicable";
    return r;
  }

  const int n1 = f2.dim() + 1;
  const AffinePencil p(homogenize(f2), SymMatrix::corner(n1, -1.0), homogenize(g),
                       MuDomain::nonnegative);
  const LmiSolution s = sup_lambda(p, 0.0, opts);
  const double tol = opts.psd_threshold(p);
  if (s.status == LmiStatus::infeasible) {
    r.verdict = Verdict::fails;
    r.note = "no delta, eta >= 0 makes the bordered matrix PSD";
    return r;
  }
  if (s.status == LmiStatus::unbounded_above) {
    r.note = "delta unbounded above (degenerate instance)";
    return r;
  }
  const double delta = s.lambda_star.value();
  r.witness = ScalarPair{delta, s.mu_star.value_or(0.0)};
  if (delta > tol) {
    r.verdict = Verdict::holds;
    r.note = "f2 >= delta = " + to_string(delta) + " on the feasible set";
  } else if (delta <= 0.0) {
    r.verdict = Verdict::fails;
    r.note = "largest certified delta is " + to_string(delta) + " <= 0";
  } else {
    r.note = "largest certified delta is within tolerance of 0";
  }
  return r;
}

}  // namespace qfrac
