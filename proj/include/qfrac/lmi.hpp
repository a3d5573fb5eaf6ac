// Scalar LMI engine.
//
// Every semidefinite program the solver needs has the shape
//
//     maximize  s   subject to   M0 + s*M1 + mu*M2 >= 0   (PSD),
//
// with at most one auxiliary scalar mu that is either free or restricted to
// mu >= 0. The map (s, mu) -> lambda_min(M0 + s*M1 + mu*M2) is jointly
// concave, so the inner problem over mu is a concave scalar maximization
// (bracketing + golden section) and the feasible set in s is an interval
// (located by doubling, then bisection).

#pragma once

#include "qfrac/linalg.hpp"
#include "qfrac/model.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace qfrac {

enum class MuDomain { absent, free, nonnegative };

inline const char* to_string(MuDomain d) {
  switch (d) {
    case MuDomain::absent: return "absent";
    case MuDomain::free: return "free";
    case MuDomain::nonnegative: return "nonnegative";
  }
  return "?";
}

/// M0 + s*M1 + mu*M2. M2 is present iff the mu-domain is not `absent`.
class AffinePencil {
 public:
  AffinePencil(SymMatrix m0, SymMatrix m1)
      : m0_(std::move(m0)), m1_(std::move(m1)), domain_(MuDomain::absent) {
    if (m0_.dim() != m1_.dim()) {
      throw std::invalid_argument("AffinePencil: block dimension mismatch");
    }
  }

  AffinePencil(SymMatrix m0, SymMatrix m1, SymMatrix m2, MuDomain domain)
      : m0_(std::move(m0)), m1_(std::move(m1)), m2_(std::move(m2)),
        domain_(domain) {
    if (domain == MuDomain::absent) {
      throw std::invalid_argument("AffinePencil: M2 given with absent mu-domain");
    }
    if (m0_.dim() != m1_.dim() || m0_.dim() != m2_->dim()) {
      throw std::invalid_argument("AffinePencil: block dimension mismatch");
    }
  }

  int dim() const { return m0_.dim(); }
  MuDomain domain() const { return domain_; }
  bool has_mu() const { return domain_ != MuDomain::absent; }
  const SymMatrix& m0() const { return m0_; }
  const SymMatrix& m1() const { return m1_; }
  const std::optional<SymMatrix>& m2() const { return m2_; }

  Matrix at(double s, std::optional<double> mu) const {
    Matrix m = m0_.matrix() + s * m1_.matrix();
    if (mu) m += *mu * m2_->matrix();
    return m;
  }

  /// 1 + |M0| + |M1| + |M2|, the scale for absolute PSD tolerances.
  double scale() const {
    return 1.0 + m0_.norm() + m1_.norm() + (m2_ ? m2_->norm() : 0.0);
  }

 private:
  SymMatrix m0_;
  SymMatrix m1_;
  std::optional<SymMatrix> m2_;
  MuDomain domain_;
};

struct LmiOptions {
  double tol_psd = 1e-8;     // relative to AffinePencil::scale()
  double tol_lambda = 1e-9;  // bisection width, relative to 1+|s|
  double tol_mu = 1e-9;      // golden-section width, relative to 1+|mu|
  double lambda_cap = 1e8;
  double mu_cap = 1e8;
  int max_bisections = 200;
  /// Absolute PSD tolerance overriding tol_psd * scale(). Used when several
  /// pencils of one problem must share the same acceptance threshold.
  std::optional<double> psd_abs;

  double psd_threshold(const AffinePencil& p) const {
    return psd_abs ? *psd_abs : tol_psd * p.scale();
  }

  /// Options derived from a single user tolerance (CLI --tol).
  static LmiOptions from_tolerance(double tol) {
    LmiOptions o;
    o.tol_psd = tol;
    o.tol_lambda = 0.1 * tol;
    o.tol_mu = 0.1 * tol;
    return o;
  }
};

enum class LmiStatus { attained, sup_only, infeasible, unbounded_above, mu_escaped };

inline const char* to_string(LmiStatus s) {
  switch (s) {
    case LmiStatus::attained: return "attained";
    case LmiStatus::sup_only: return "sup_only";
    case LmiStatus::infeasible: return "infeasible";
    case LmiStatus::unbounded_above: return "unbounded_above";
    case LmiStatus::mu_escaped: return "mu_escaped";
  }
  return "?";
}

struct LmiSolution {
  ExtendedReal lambda_star = ExtendedReal::neg_inf();
  std::optional<double> mu_star;
  LmiStatus status = LmiStatus::infeasible;
  /// lambda_min of the pencil at (lambda_star, mu_star); NaN when infeasible.
  double certificate_min_eig = std::numeric_limits<double>::quiet_NaN();
  int evaluations = 0;
};

/// lambda_min(M0 + s*M1 + mu*M2).
inline double pencil_value(const AffinePencil& p, double s,
                           std::optional<double> mu) {
  if (mu.has_value() != p.has_mu()) {
    throw std::invalid_argument("pencil_value: mu arity does not match the pencil");
  }
  return min_eig(SymMatrix(p.at(s, mu)));
}

namespace detail {

struct ConcaveMax {
  double x = 0.0;
  double value = -std::numeric_limits<double>::infinity();
  bool at_cap = false;
  bool stopped = false;  // reached the early-stop target
};

// Maximizes a concave scalar function on [lo, hi] starting from `start`.
// Expands a bracket by doubling steps, then runs golden section. Increases
// smaller than noise(x) are treated as flat. With `target`, returns as soon
// as a value >= target is seen.
template <class F, class Noise>
ConcaveMax maximize_concave(F&& f, double start, double lo, double hi,
                            double tol_x, Noise&& noise,
                            std::optional<double> target = std::nullopt) {
  ConcaveMax best;
  auto eval = [&](double x) {
    const double v = f(x);
    if (v > best.value) {
      best.value = v;
      best.x = x;
    }
    if (target && v >= *target) best.stopped = true;
    return v;
  };

  const double x0 = std::clamp(start, lo, hi);
  const double f0 = eval(x0);
  if (best.stopped) return best;

  double h = 1.0;
  double a = x0, b = x0, c = x0, fb = f0;
  const double xr = std::min(hi, x0 + h);
  const double xl = std::max(lo, x0 - h);
  const double fr = xr > x0 ? eval(xr) : -std::numeric_limits<double>::infinity();
  if (best.stopped) return best;
  double fl = -std::numeric_limits<double>::infinity();
  int dir = 0;
  if (fr > f0 + noise(x0)) {
    dir = +1;
  } else {
    fl = xl < x0 ? eval(xl) : -std::numeric_limits<double>::infinity();
    if (best.stopped) return best;
    if (fl > f0 + noise(x0)) dir = -1;
  }

  if (dir == 0) {
    a = xl;
    c = xr;
  } else {
    a = x0;
    b = dir > 0 ? xr : xl;
    fb = dir > 0 ? fr : fl;
    for (;;) {
      h *= 2.0;
      double next = b + dir * h;
      const double bound = dir > 0 ? hi : lo;
      const bool clipped = dir > 0 ? next >= bound : next <= bound;
      if (clipped) next = bound;
      const double fn = eval(next);
      if (best.stopped) return best;
      if (fn > fb + noise(b)) {
        if (clipped) {
          best.at_cap = true;
          return best;
        }
        a = b;
        b = next;
        fb = fn;
        continue;
      }
      c = next;
      break;
    }
    if (a > c) std::swap(a, c);
  }

  // Golden section on [a, c].
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = c - kInvPhi * (c - a);
  double x2 = a + kInvPhi * (c - a);
  double f1 = eval(x1);
  if (best.stopped) return best;
  double f2 = eval(x2);
  if (best.stopped) return best;
  for (int it = 0; it < 300; ++it) {
    if (c - a <= tol_x * (1.0 + std::abs(0.5 * (a + c)))) break;
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (c - a);
      f2 = eval(x2);
    } else {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - kInvPhi * (c - a);
      f1 = eval(x1);
    }
    if (best.stopped) return best;
  }
  return best;
}

}  // namespace detail

struct InnerMax {
  std::optional<double> mu;
  double value = 0.0;
  bool escaped = false;
};

/// max over mu in the pencil's domain (intersected with [-mu_cap, mu_cap])
/// of pencil_value(p, s, mu). `escaped` flags a maximizer on the artificial
/// cap.
inline InnerMax max_inner(const AffinePencil& p, double s,
                          const LmiOptions& opts = {}) {
  if (!p.has_mu()) return {std::nullopt, pencil_value(p, s, std::nullopt), false};

  const double lo = p.domain() == MuDomain::free ? -opts.mu_cap : 0.0;
  const double hi = opts.mu_cap;
  const double base = p.m0().norm() + std::abs(s) * p.m1().norm();
  const double slope = p.m2()->norm();
  auto noise = [&](double mu) { return 1e-13 * (1.0 + base + std::abs(mu) * slope); };
  auto phi = [&](double mu) { return pencil_value(p, s, mu); };

  const detail::ConcaveMax r =
      detail::maximize_concave(phi, 0.0, lo, hi, opts.tol_mu, noise);
  const double edge = opts.tol_mu * (1.0 + opts.mu_cap);
  const bool on_cap = r.at_cap || r.x >= hi - edge ||
                      (p.domain() == MuDomain::free && r.x <= lo + edge);
  return {r.x, r.value, on_cap};
}

/// sup { s : max_inner(p, s).value >= -tol_psd }.
///
/// Starting from `hint`, the search walks upward (doubling) while feasible,
/// otherwise downward toward the maximizer of the concave function
/// s -> max_inner(p, s).value until a feasible s appears, then bisects the
/// boundary to tol_lambda.
inline LmiSolution sup_lambda(const AffinePencil& p, double hint = 0.0,
                              const LmiOptions& opts = {}) {
  const double tol_psd = opts.psd_threshold(p);
  const double cap = opts.lambda_cap;
  LmiSolution out;
  auto psi = [&](double s) {
    ++out.evaluations;
    return max_inner(p, s, opts).value;
  };
  auto feasible = [&](double s) { return psi(s) >= -tol_psd; };

  double lo, hi;
  double start = std::clamp(std::isfinite(hint) ? hint : 0.0, -cap, cap);
  if (feasible(start)) {
    lo = start;
    double step = 1.0;
    for (;;) {
      double cand = lo + step;
      if (cand >= cap) {
        if (feasible(cap)) {
          out.lambda_star = ExtendedReal::pos_inf();
          out.status = LmiStatus::unbounded_above;
          return out;
        }
        hi = cap;
        break;
      }
      if (!feasible(cand)) {
        hi = cand;
        break;
      }
      lo = cand;
      step *= 2.0;
    }
  } else {
    auto noise = [&](double s) { return 1e-13 * (1.0 + std::abs(s)) * p.scale(); };
    const detail::ConcaveMax r = detail::maximize_concave(
        psi, start, -cap, cap, opts.tol_lambda, noise, -tol_psd);
    if (!r.stopped) {
      out.status = LmiStatus::infeasible;
      return out;
    }
    lo = r.x;
    // Smallest infeasible point above lo: the start when lo < start, else
    // double upward.
    if (lo < start) {
      hi = start;
    } else {
      double step = 1.0;
      for (;;) {
        double cand = lo + step;
        if (cand >= cap) {
          if (feasible(cap)) {
            out.lambda_star = ExtendedReal::pos_inf();
            out.status = LmiStatus::unbounded_above;
            return out;
          }
          hi = cap;
          break;
        }
        if (!feasible(cand)) {
          hi = cand;
          break;
        }
        lo = cand;
        step *= 2.0;
      }
    }
  }

  bool converged = false;
  for (int it = 0; it < opts.max_bisections; ++it) {
    if (hi - lo <= opts.tol_lambda * (1.0 + std::abs(lo))) {
      converged = true;
      break;
    }
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  // Tighten: the boundary found above sits where psi = -tol_psd, which on a
  // shallow psi can be far above the root. Bisect again against a threshold
  // 100x smaller when a point meeting it exists just below.
  double boundary = -tol_psd;
  if (converged) {
    const double strict = -0.01 * tol_psd;
    const double v_lo = psi(lo);
    if (v_lo < strict) {
      double a = lo, va = v_lo;
      bool found = false;
      for (double d = opts.tol_lambda * (1.0 + std::abs(lo)); d <= 1e-3 * (1.0 + std::abs(lo));
           d *= 2.0) {
        const double cand = lo - d;
        const double v = psi(cand);
        if (v >= strict) {
          a = cand;
          found = true;
          break;
        }
        if (v <= va) break;
        va = v;
      }
      if (found) {
        double b = lo;
        while (b - a > opts.tol_lambda * (1.0 + std::abs(a))) {
          const double mid = 0.5 * (a + b);
          if (psi(mid) >= strict) {
            a = mid;
          } else {
            b = mid;
          }
        }
        lo = a;
        boundary = strict;
      }
    }
  }

  const InnerMax at = max_inner(p, lo, opts);
  out.lambda_star = lo;
  out.mu_star = at.mu;
  out.certificate_min_eig = at.value;

  const double probe = lo + 10.0 * opts.tol_lambda * (1.0 + std::abs(lo));
  const bool boundary_certified = max_inner(p, probe, opts).value < boundary;
  if (at.escaped) {
    out.status = LmiStatus::mu_escaped;
  } else if (!converged || !boundary_certified) {
    out.status = LmiStatus::sup_only;
  } else {
    out.status = LmiStatus::attained;
  }
  return out;
}

/// sup { nu : exists mu in domain, M0 - nu*E + mu*M2 >= 0 } where E has a
/// single 1 in the bottom-right corner. This is the optimal value of the
/// quadratic subproblem whose homogenized objective is M0.
inline LmiSolution sup_nu(const AffinePencil& p, double hint = 0.0,
                          const LmiOptions& opts = {}) {
  const SymMatrix expected = SymMatrix::corner(p.dim(), -1.0);
  if (!(p.m1() == expected)) {
    throw std::invalid_argument("sup_nu: M1 must be -E (bottom-right corner)");
  }
  return sup_lambda(p, hint, opts);
}

/// Pencil of the parametric subproblem at fixed lambda: M(f1 - lambda f2)
/// - nu*E + mu*M(constraint).
inline AffinePencil parametric_pencil(const QuadraticForm& f1,
                                      const QuadraticForm& f2, double lambda,
                                      const QuadraticForm* constraint,
                                      MuDomain domain) {
  const SymMatrix m0 = homogenize(f1 - lambda * f2);
  const SymMatrix e = SymMatrix::corner(m0.dim(), -1.0);
  if (constraint == nullptr) return {m0, e};
  return {m0, e, homogenize(*constraint), domain};
}

/// Endpoints of { mu in domain : pencil_value(p, s, mu) >= target }. The
/// set is an interval by concavity; an end equal to the domain bound means
/// the set reaches the cap. When even the best mu misses the target, both
/// ends equal that best mu.
inline std::pair<double, double> mu_interval(const AffinePencil& p, double s,
                                             double target,
                                             const LmiOptions& opts = {}) {
  if (!p.has_mu()) throw std::invalid_argument("mu_interval: pencil has no mu");
  const InnerMax best = max_inner(p, s, opts);
  const double m = *best.mu;
  if (best.value < target) return {m, m};
  auto ok = [&](double mu) { return pencil_value(p, s, mu) >= target; };
  const double lo_bound = p.domain() == MuDomain::free ? -opts.mu_cap : 0.0;
  const double hi_bound = opts.mu_cap;

  auto edge = [&](double inside, double outside) {
    if (ok(outside)) return outside;
    for (int it = 0; it < 200; ++it) {
      if (std::abs(outside - inside) <= 1e-3 * opts.tol_mu * (1.0 + std::abs(inside))) break;
      const double mid = 0.5 * (inside + outside);
      (ok(mid) ? inside : outside) = mid;
    }
    return inside;
  };
  return {edge(m, lo_bound), edge(m, hi_bound)};
}

}  // namespace qfrac
