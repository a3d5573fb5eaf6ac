// Decision tree for inf f1/f2 over u <= g <= v: unconstrained, one-sided,
// equality and two-sided instances, with attainment verdicts and recovery
// of optimal points.

#pragma once

#include "qfrac/checks.hpp"
#include "qfrac/lmi.hpp"
#include "qfrac/model.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qfrac {

/// The feasible set is empty (or the requested level set is).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Attainment { attained, unattained, unbounded_below, unknown };
enum class SolveCase {
  unconstrained,
  interior_case1,
  lower_boundary_case2,
  upper_boundary_case3,
  one_sided,
  equality
};
enum class Certification { exact, lower_bound_only };
enum class ConstraintKind { none, equality, inequality };

inline const char* to_string(Attainment a) {
  switch (a) {
    case Attainment::attained: return "attained";
    case Attainment::unattained: return "unattained";
    case Attainment::unbounded_below: return "unbounded_below";
    case Attainment::unknown: return "unknown";
  }
  return "?";
}

inline const char* to_string(SolveCase c) {
  switch (c) {
    case SolveCase::unconstrained: return "unconstrained";
    case SolveCase::interior_case1: return "interior_case1";
    case SolveCase::lower_boundary_case2: return "lower_boundary_case2";
    case SolveCase::upper_boundary_case3: return "upper_boundary_case3";
    case SolveCase::one_sided: return "one_sided";
    case SolveCase::equality: return "equality";
  }
  return "?";
}

inline const char* to_string(Certification c) {
  return c == Certification::exact ? "exact" : "lower_bound_only";
}

/// Intermediate quantities of a solve, kept for reporting and testing.
struct SolveTrace {
  std::optional<ExtendedReal> case1_lambda;
  std::optional<ExtendedReal> case1_f;
  std::optional<ExtendedReal> lambda_lower;
  std::optional<ExtendedReal> lambda_upper;
  std::optional<ExtendedReal> f_lower;
  std::optional<ExtendedReal> f_upper;
  std::optional<ExtendedReal> f_at_lambda_star;
  std::optional<ScalarPair> eta_interval;
  bool rq_shaped = false;
  std::optional<bool> unique_multiplier;
  std::vector<std::string> notes;
};

struct SolveReport {
  ExtendedReal lambda_star = ExtendedReal::neg_inf();
  Attainment attainment = Attainment::unknown;
  std::vector<Vector> solutions;
  std::optional<double> multiplier_mu;
  SolveCase case_tag = SolveCase::unconstrained;
  std::vector<CheckResult> diagnostics;
  Certification certified = Certification::exact;
  SolveTrace trace;
};

struct SolverOptions {
  LmiOptions lmi;
  /// |f(lambda*)| below tol_attain * (1 + |lambda*|) counts as zero.
  double tol_attain = 1e-6;
  /// lambda_1 and lambda_2 tie when within tie_band * (1 + |lambda_1|).
  double tie_band = 1e-7;
  /// Eigenvalues of the optimal pencil below null_tol * (1 + |N|) span its
  /// null space during recovery.
  double null_tol = 1e-6;
  /// Width below which the eta-interval counts as a single point.
  double unique_tol = 1e-6;

  static SolverOptions from_tolerance(double tol) {
    SolverOptions o;
    o.lmi = LmiOptions::from_tolerance(tol);
    o.tol_attain = 100.0 * tol;
    o.null_tol = 100.0 * tol;
    o.unique_tol = 100.0 * tol;
    return o;
  }
};

/// f1, f2 and h(x) = x^T B x + 2 d^T x expressed around a point of the level
/// set; original coordinates are x = y + shift_applied.
struct EqualityProblem {
  QuadraticForm f1;
  QuadraticForm f2;
  QuadraticForm h;
  Vector shift_applied;
};

/// Shifts the level set {g = level} to pass through the origin. Throws
/// InfeasibleError when it is empty.
inline EqualityProblem make_equality_problem(const QuadraticForm& f1,
                                             const QuadraticForm& f2,
                                             const QuadraticForm& g,
                                             double level) {
  const auto x0 = find_level_point(g, level);
  if (!x0) throw InfeasibleError("level set {g = " + to_string(level) + "} is empty");
  EqualityProblem ep{shift(f1, *x0), shift(f2, *x0),
                     shift(g - QuadraticForm::constant(g.dim(), level), *x0), *x0};
  ep.h.c = 0.0;
  return ep;
}

namespace detail {

inline double objective_tol(const SolverOptions& o, double lambda) {
  return o.tol_attain * (1.0 + std::abs(lambda));
}

inline double ratio_hint(const QuadraticForm& f1, const QuadraticForm& f2,
                         const Vector& x) {
  const double d = evaluate(f2, x);
  return d > 0.0 ? evaluate(f1, x) / d : 0.0;
}

/// {origin + directions * z} parametrizing the t = 1 slice of a null space.
struct AffineSet {
  Vector origin;
  Matrix directions;
};

inline std::optional<AffineSet> pencil_solution_set(const SymMatrix& n_mat,
                                                    double null_tol) {
  const int n = n_mat.dim() - 1;
  const Matrix y = null_space(n_mat, null_tol * (1.0 + n_mat.norm()));
  const int k = static_cast<int>(y.cols());
  if (k == 0) return std::nullopt;
  const Vector t = y.row(n).transpose();
  const double tn = t.norm();
  if (tn <= 1e-8) return std::nullopt;
  const Vector c0 = t / (tn * tn);
  AffineSet out;
  const Vector y0 = y * c0;
  out.origin = y0.head(n) / y0(n);
  // Orthonormal complement of t inside R^k.
  const Matrix z = null_space(SymMatrix(t * t.transpose() / (tn * tn)), 0.5);
  out.directions = y.topRows(n) * z;
  return out;
}

/// Points z with r(z) = level: stationary and origin candidates, both
/// roots along every eigen-direction, and find_level_point.
inline std::vector<Vector> level_candidates(const QuadraticForm& r,
                                            double level) {
  std::vector<Vector> out;
  const int m = r.dim();
  const double tol = feas_tolerance(level);
  if (std::abs(r.c - level) <= tol) out.push_back(Vector::Zero(m));
  const EigenDecomp e = sym_eigen(r.A);
  std::vector<Vector> dirs;
  for (int i = 0; i < m; ++i) dirs.push_back(e.vectors.col(i));
  const double scale = 1.0 + r.A.norm() + r.b.norm() + std::abs(r.c);
  for (const Vector& v : dirs) {
    const double alpha = v.dot(r.A.matrix() * v);
    const double beta = r.b.dot(v);
    for (double s : scalar_quadratic_roots(alpha, beta, r.c - level, scale)) {
      out.push_back(s * v);
    }
  }
  if (auto x = find_level_point(r, level)) out.push_back(*x);
  return out;
}

inline void push_distinct(std::vector<Vector>& pts, const Vector& x) {
  for (const Vector& p : pts) {
    if ((p - x).norm() <= 1e-6 * (1.0 + x.norm())) return;
  }
  pts.push_back(x);
}

}  // namespace detail

/// Optimal points of inf f1 - lambda f2 subject to the constraint, read off
/// the null space of N = M(f1) - lambda M(f2) + mu M(constraint). Returns the
/// distinct verified points found; empty when none.
inline std::vector<Vector> recover_solution(double lambda,
                                            std::optional<double> mu,
                                            const QuadraticForm& f1,
                                            const QuadraticForm& f2,
                                            const QuadraticForm* constraint,
                                            ConstraintKind kind,
                                            const SolverOptions& opts = {}) {
  if (kind != ConstraintKind::none && constraint == nullptr) {
    throw std::invalid_argument("recover_solution: constraint missing");
  }
  const QuadraticForm obj = f1 - lambda * f2;
  SymMatrix n_mat = homogenize(obj);
  const double m = mu.value_or(0.0);
  if (kind != ConstraintKind::none) n_mat = n_mat + m * homogenize(*constraint);
  const double psd_slack = opts.null_tol * (1.0 + n_mat.norm());
  if (min_eig(n_mat) < -psd_slack) {
    throw std::logic_error("recover_solution: optimal pencil is not PSD");
  }

  std::vector<Vector> out;
  const auto set = detail::pencil_solution_set(n_mat, opts.null_tol);
  if (!set) return out;

  std::vector<Vector> cands;
  const bool on_level =
      kind == ConstraintKind::equality ||
      (kind == ConstraintKind::inequality && m > opts.lmi.tol_mu * 10.0);
  if (kind == ConstraintKind::none || set->directions.cols() == 0) {
    cands.push_back(set->origin);
  } else {
    const QuadraticForm r =
        restrict_affine(*constraint, set->origin, set->directions);
    std::vector<Vector> zs = detail::level_candidates(r, 0.0);
    if (!on_level) {
      if (r.c <= feas_tolerance(0.0)) zs.insert(zs.begin(), Vector::Zero(r.dim()));
      if (auto zm = minimizer(r)) zs.push_back(*zm);
    }
    for (const Vector& z : zs) cands.push_back(set->origin + set->directions * z);
  }

  for (const Vector& x : cands) {
    const double fx = evaluate(obj, x);
    const double scale = 1.0 + std::abs(evaluate(f1, x)) +
                         std::abs(lambda) * std::abs(evaluate(f2, x));
    if (fx > opts.tol_attain * scale) continue;
    if (kind != ConstraintKind::none) {
      const double cx = evaluate(*constraint, x);
      const double ftol = 100.0 * feas_tolerance(0.0) * (1.0 + x.squaredNorm());
      if (kind == ConstraintKind::equality && std::abs(cx) > ftol) continue;
      if (kind == ConstraintKind::inequality && cx > ftol) continue;
    }
    detail::push_distinct(out, x);
  }
  return out;
}

/// f(lambda) = inf { f1 - lambda f2 : constraint } through its dual pencil.
/// -inf when the subproblem is unbounded below, +inf when the dual pencil
/// stays feasible up to the cap.
inline ExtendedReal parametric_value(const QuadraticForm& f1,
                                     const QuadraticForm& f2,
                                     const QuadraticForm* constraint,
                                     ConstraintKind kind, double lambda,
                                     const LmiOptions& opts = {},
                                     double hint = 0.0) {
  const MuDomain dom = kind == ConstraintKind::none       ? MuDomain::absent
                       : kind == ConstraintKind::equality ? MuDomain::free
                                                          : MuDomain::nonnegative;
  const AffinePencil p = parametric_pencil(
      f1, f2, lambda, kind == ConstraintKind::none ? nullptr : constraint, dom);
  const LmiSolution s = sup_nu(p, hint, opts);
  return s.lambda_star;
}

namespace detail {

// Pencil threshold for all f(lambda) evaluations of one instance: that of
// the lambda-pencil, so that f(lambda*) is judged at the same PSD level as
// lambda* itself.
inline LmiOptions shared_threshold(const AffinePencil& lam, const LmiOptions& o) {
  LmiOptions out = o;
  out.psd_abs = o.psd_threshold(lam);
  return out;
}

inline void classify(SolveReport& r, double f, std::vector<Vector> sols,
                     const SolverOptions& opts) {
  const double lam = r.lambda_star.value();
  if (f > detail::objective_tol(opts, lam)) {
    r.attainment = Attainment::unattained;
  } else if (!sols.empty()) {
    r.attainment = Attainment::attained;
    r.solutions = std::move(sols);
  } else {
    r.attainment = Attainment::unknown;
    r.trace.notes.push_back("f(lambda*) = 0 but no optimal point was recovered");
  }
}

}  // namespace detail

inline SolveReport solve_unconstrained(const QuadraticForm& f1,
                                       const QuadraticForm& f2,
                                       const SolverOptions& opts = {}) {
  SolveReport r;
  r.case_tag = SolveCase::unconstrained;
  const AffinePencil pen(homogenize(f1), -1.0 * homogenize(f2));
  const Vector x0 = Vector::Zero(f1.dim());
  const LmiSolution s = sup_lambda(pen, detail::ratio_hint(f1, f2, x0), opts.lmi);
  if (s.status == LmiStatus::infeasible) {
    r.lambda_star = ExtendedReal::neg_inf();
    r.attainment = Attainment::unbounded_below;
    return r;
  }
  if (s.status == LmiStatus::unbounded_above) {
    r.lambda_star = ExtendedReal::pos_inf();
    r.attainment = Attainment::unknown;
    r.trace.notes.push_back("pencil feasible up to the cap: f2 is not positive");
    return r;
  }
  r.lambda_star = s.lambda_star;
  const double lam = s.lambda_star.value();
  const LmiOptions shared = detail::shared_threshold(pen, opts.lmi);
  const ExtendedReal f = parametric_value(f1, f2, nullptr, ConstraintKind::none,
                                          lam, shared, evaluate(f1 - lam * f2, x0));
  r.trace.f_at_lambda_star = f;
  if (!f.is_finite()) {
    r.attainment = Attainment::unknown;
    r.trace.notes.push_back("f(lambda*) is not finite");
    return r;
  }
  detail::classify(r, f.value(),
                   recover_solution(lam, std::nullopt, f1, f2, nullptr,
                                    ConstraintKind::none, opts),
                   opts);
  return r;
}

/// inf f1/f2 over {h = 0} with h(0) = 0. Solutions are reported in the
/// original coordinates (shift_applied added back).
inline SolveReport solve_equality(const EqualityProblem& ep,
                                  const SolverOptions& opts = {}) {
  if (std::abs(ep.h.c) > feas_tolerance(0.0)) {
    throw std::invalid_argument("solve_equality: h(0) must vanish");
  }
  SolveReport r;
  r.case_tag = SolveCase::equality;
  const CheckResult b = check_assumption_b(ep.h);
  r.certified = b.holds() ? Certification::exact : Certification::lower_bound_only;
  r.diagnostics.push_back(b);

  const AffinePencil pen(homogenize(ep.f1), -1.0 * homogenize(ep.f2),
                         homogenize(ep.h), MuDomain::free);
  const Vector x0 = Vector::Zero(ep.f1.dim());
  const LmiSolution s = sup_lambda(pen, detail::ratio_hint(ep.f1, ep.f2, x0), opts.lmi);
  if (s.status == LmiStatus::infeasible) {
    r.lambda_star = ExtendedReal::neg_inf();
    r.attainment = Attainment::unbounded_below;
    return r;
  }
  if (s.status == LmiStatus::unbounded_above) {
    r.lambda_star = ExtendedReal::pos_inf();
    r.attainment = Attainment::unknown;
    r.trace.notes.push_back("pencil feasible up to the cap: f2 is not positive");
    return r;
  }
  r.lambda_star = s.lambda_star;
  r.multiplier_mu = s.mu_star;
  const double lam = s.lambda_star.value();
  const LmiOptions shared = detail::shared_threshold(pen, opts.lmi);
  const ExtendedReal f =
      parametric_value(ep.f1, ep.f2, &ep.h, ConstraintKind::equality, lam, shared,
                       evaluate(ep.f1 - lam * ep.f2, x0));
  r.trace.f_at_lambda_star = f;
  if (s.status == LmiStatus::mu_escaped) {
    r.attainment = Attainment::unknown;
    r.trace.notes.push_back("multiplier escaped to the cap; attainment undecided");
    return r;
  }
  if (!f.is_finite()) {
    r.attainment = Attainment::unknown;
    r.trace.notes.push_back("f(lambda*) is not finite");
    return r;
  }
  std::vector<Vector> sols;
  if (f.value() <= detail::objective_tol(opts, lam)) {
    for (const Vector& y : recover_solution(lam, s.mu_star, ep.f1, ep.f2, &ep.h,
                                            ConstraintKind::equality, opts)) {
      sols.push_back(y + ep.shift_applied);
    }
  }
  detail::classify(r, f.value(), std::move(sols), opts);
  return r;
}

namespace detail {

/// {eta >= 0 : M(f1 - lambda f2) + eta M(g) >= -eps} evaluated slightly
/// below lambda*, where the set is a proper interval of small tolerance.
inline ScalarPair eta_probe(const AffinePencil& pen, double lam,
                            const LmiOptions& o) {
  const double eps = 1e-6 * o.psd_threshold(pen);
  double kappa = 10.0 * o.tol_lambda * (1.0 + std::abs(lam));
  for (int it = 0; it < 60; ++it) {
    if (max_inner(pen, lam - kappa, o).value >= -0.5 * eps) break;
    kappa *= 2.0;
  }
  return mu_interval(pen, lam - kappa, -eps, o);
}

inline bool rq_shaped(const QuadraticForm& g) {
  return g.b.norm() <= 1e-12 * (1.0 + g.A.norm()) &&
         min_eig(g.A) >= -rank_tolerance(g.A) && g.c < 0.0;
}

}  // namespace detail

/// inf f1/f2 over {g <= 0}.
inline SolveReport solve_one_sided(const QuadraticForm& f1,
                                   const QuadraticForm& f2,
                                   const QuadraticForm& g,
                                   const SolverOptions& opts = {}) {
  const int n = f1.dim();
  const auto [glo, ghi] = inf_sup(g);
  const double ftol = feas_tolerance(0.0);
  if (glo.value() >= -ftol) {
    if (glo.value() > ftol) throw InfeasibleError("constraint g <= 0 has no feasible point");
    // {g <= 0} = argmin g = x0 + null(B).
    const Vector x0 = *minimizer(g);
    const Matrix w = null_space(g.A);
    SolveReport r;
    if (w.cols() == 0) {
      r.lambda_star = evaluate(f1, x0) / evaluate(f2, x0);
      r.attainment = Attainment::attained;
      r.solutions = {x0};
    } else {
      r = solve_unconstrained(restrict_affine(f1, x0, w), restrict_affine(f2, x0, w),
                              opts);
      for (Vector& z : r.solutions) z = x0 + w * z;
    }
    r.case_tag = SolveCase::one_sided;
    r.trace.notes.push_back(
        "no Slater point: reduced to an unconstrained problem over {Bx + d = 0}");
    return r;
  }

  SolveReport r;
  r.case_tag = SolveCase::one_sided;
  r.trace.rq_shaped = detail::rq_shaped(g);
  const Vector xf = g.c <= 0.0 ? Vector::Zero(n) : *find_level_point(g, 0.0);
  const AffinePencil pen(homogenize(f1), -1.0 * homogenize(f2), homogenize(g),
                         MuDomain::nonnegative);
  const LmiSolution s = sup_lambda(pen, detail::ratio_hint(f1, f2, xf), opts.lmi);
  if (s.status == LmiStatus::infeasible) {
    r.lambda_star = ExtendedReal::neg_inf();
    r.attainment = Attainment::unbounded_below;
    return r;
  }
  if (s.status == LmiStatus::unbounded_above) {
    r.lambda_star = ExtendedReal::pos_inf();
    r.attainment = Attainment::unknown;
    r.trace.notes.push_back("pencil feasible up to the cap: f2 is not positive");
    return r;
  }
  r.lambda_star = s.lambda_star;
  r.multiplier_mu = s.mu_star;
  const double lam = s.lambda_star.value();
  const LmiOptions shared = detail::shared_threshold(pen, opts.lmi);
  const ExtendedReal f =
      parametric_value(f1, f2, &g, ConstraintKind::inequality, lam, shared,
                       evaluate(f1 - lam * f2, xf));
  r.trace.f_at_lambda_star = f;

  const ScalarPair eta = detail::eta_probe(pen, lam, opts.lmi);
  r.trace.eta_interval = eta;
  const bool unique = eta.second - eta.first <= opts.unique_tol;
  r.trace.unique_multiplier = unique;

  if (s.status == LmiStatus::mu_escaped || !f.is_finite()) {
    r.attainment = Attainment::unknown;
    r.trace.notes.push_back("multiplier escaped or f(lambda*) not finite");
    return r;
  }
  std::vector<Vector> sols;
  if (f.value() <= detail::objective_tol(opts, lam)) {
    sols = recover_solution(lam, s.mu_star, f1, f2, &g, ConstraintKind::inequality,
                            opts);
  }
  detail::classify(r, f.value(), std::move(sols), opts);
  if (r.trace.rq_shaped) {
    const bool by_uniqueness = unique;
    const bool by_f = r.attainment != Attainment::unattained;
    r.trace.notes.push_back(std::string("uniqueness verdict: ") +
                            (by_uniqueness ? "attained" : "unattained"));
    if (by_uniqueness != by_f) {
      r.trace.notes.push_back("uniqueness verdict disagrees with f(lambda*) test");
    }
  }
  return r;
}

namespace detail {

inline void add_well_defined(SolveReport& r, const QuadraticForm& f2,
                             const QuadraticForm& g_le0) {
  try {
    r.diagnostics.push_back(check_well_defined(f2, g_le0));
  } catch (const std::exception& e) {
    r.diagnostics.push_back({"well_defined", Verdict::unknown, {}, e.what()});
  }
}

// Case 1: stationary points of f1 - lambda_hat f2 inside X.
inline std::optional<SolveReport> try_case1(const FractionalProblem& p,
                                            const Vector& xf,
                                            const SolverOptions& opts,
                                            SolveTrace& trace) {
  const QuadraticForm& g = *p.g;
  const AffinePencil pen(homogenize(p.f1), -1.0 * homogenize(p.f2));
  const LmiSolution s = sup_lambda(pen, ratio_hint(p.f1, p.f2, xf), opts.lmi);
  if (s.status == LmiStatus::infeasible) {
    trace.case1_lambda = ExtendedReal::neg_inf();
    return std::nullopt;
  }
  if (s.status == LmiStatus::unbounded_above) return std::nullopt;
  const double lam = s.lambda_star.value();
  trace.case1_lambda = lam;
  const LmiOptions shared = shared_threshold(pen, opts.lmi);
  const ExtendedReal f = parametric_value(p.f1, p.f2, nullptr, ConstraintKind::none,
                                          lam, shared, evaluate(p.f1 - lam * p.f2, xf));
  trace.case1_f = f;
  if (!f.is_finite() || std::abs(f.value()) > objective_tol(opts, lam)) return std::nullopt;

  const auto set = pencil_solution_set(homogenize(p.f1 - lam * p.f2), opts.null_tol);
  if (!set) return std::nullopt;
  const double u = p.u.is_finite() ? p.u.value() : -std::numeric_limits<double>::infinity();
  const double v = p.v.is_finite() ? p.v.value() : std::numeric_limits<double>::infinity();

  std::vector<Vector> cands;
  if (set->directions.cols() == 0) {
    cands.push_back(set->origin);
  } else {
    const QuadraticForm r = restrict_affine(g, set->origin, set->directions);
    const auto [lo, hi] = inf_sup(r);
    const double a = std::max(u, lo.value());
    const double b = std::min(v, hi.value());
    if (a > b + feas_tolerance(b)) return std::nullopt;
    const double g0 = r.c;
    std::vector<double> levels{std::clamp(g0, a, std::max(a, b))};
    if (std::isfinite(a)) levels.push_back(a);
    if (std::isfinite(b)) levels.push_back(b);
    for (double level : levels) {
      if (auto z = find_level_point(r, level)) {
        cands.push_back(set->origin + set->directions * *z);
      }
    }
  }
  std::vector<Vector> sols;
  for (const Vector& x : cands) {
    const double gx = evaluate(g, x);
    if (gx < u - 100.0 * feas_tolerance(u) || gx > v + 100.0 * feas_tolerance(v)) continue;
    const double fx = evaluate(p.f1 - lam * p.f2, x);
    const double scale = 1.0 + std::abs(evaluate(p.f1, x)) +
                         std::abs(lam) * std::abs(evaluate(p.f2, x));
    if (std::abs(fx) > opts.tol_attain * scale) continue;
    push_distinct(sols, x);
  }
  if (sols.empty()) return std::nullopt;
  SolveReport r;
  r.lambda_star = lam;
  r.attainment = Attainment::attained;
  r.solutions = std::move(sols);
  r.case_tag = SolveCase::interior_case1;
  r.trace.f_at_lambda_star = f;
  return r;
}

}  // namespace detail

/// Full decision tree for inf { f1/f2 : u <= g <= v }. Throws
/// InfeasibleError when X is empty and std::invalid_argument on malformed
/// instances.
inline SolveReport solve(const FractionalProblem& p, const SolverOptions& opts = {}) {
  p.validate();
  if (!p.constrained()) {
    SolveReport r = solve_unconstrained(p.f1, p.f2, opts);
    if (p.g) r.trace.notes.push_back("g given with u = -inf and v = +inf: ignored");
    return r;
  }
  const QuadraticForm& g = *p.g;
  const int n = p.dim();
  const auto [glo, ghi] = inf_sup(g);
  const CheckResult a = check_assumption_a(g, p.u, p.v);
  const double u = p.u.value();
  const double v = p.v.value();
  if (u > ghi.value() + feas_tolerance(u) || v < glo.value() - feas_tolerance(v)) {
    throw InfeasibleError("feasible set {u <= g <= v} is empty");
  }

  const bool lower_vacuous = !p.u.is_finite() || p.u <= glo;
  const bool upper_vacuous = !p.v.is_finite() || p.v >= ghi;
  const QuadraticForm le_v = g - QuadraticForm::constant(n, p.v.value());
  const QuadraticForm le_u = QuadraticForm::constant(n, p.u.value()) - g;

  SolveReport r;
  if (lower_vacuous && upper_vacuous) {
    r = solve_unconstrained(p.f1, p.f2, opts);
    r.trace.notes.push_back("both sides of the constraint are vacuous");
  } else if (lower_vacuous) {
    r = solve_one_sided(p.f1, p.f2, le_v, opts);
    detail::add_well_defined(r, p.f2, le_v);
  } else if (upper_vacuous) {
    r = solve_one_sided(p.f1, p.f2, le_u, opts);
    detail::add_well_defined(r, p.f2, le_u);
  } else if (std::abs(p.v.value() - p.u.value()) <= feas_tolerance(p.u.value())) {
    r = solve_equality(make_equality_problem(p.f1, p.f2, g, p.u.value()), opts);
  } else {
    SolveTrace trace;
    const Vector xf = *find_level_point(g, p.u.value());
    if (auto c1 = detail::try_case1(p, xf, opts, trace)) {
      r = std::move(*c1);
      r.trace.case1_lambda = trace.case1_lambda;
      r.trace.case1_f = trace.case1_f;
    } else {
      const SolveReport lo =
          solve_equality(make_equality_problem(p.f1, p.f2, g, p.u.value()), opts);
      const SolveReport hi =
          solve_equality(make_equality_problem(p.f1, p.f2, g, p.v.value()), opts);
      trace.lambda_lower = lo.lambda_star;
      trace.lambda_upper = hi.lambda_star;
      trace.f_lower = lo.trace.f_at_lambda_star;
      trace.f_upper = hi.trace.f_at_lambda_star;
      for (CheckResult c : lo.diagnostics) {
        c.name += "(lower)";
        r.diagnostics.push_back(c);
      }
      for (CheckResult c : hi.diagnostics) {
        c.name += "(upper)";
        r.diagnostics.push_back(c);
      }
      if (lo.certified != Certification::exact || hi.certified != Certification::exact) {
        r.certified = Certification::lower_bound_only;
      }
      if (lo.lambda_star.is_neg_inf() || hi.lambda_star.is_neg_inf()) {
        r.lambda_star = ExtendedReal::neg_inf();
        r.attainment = Attainment::unbounded_below;
        r.case_tag = lo.lambda_star.is_neg_inf() ? SolveCase::lower_boundary_case2
                                                 : SolveCase::upper_boundary_case3;
      } else {
        const double l1 = lo.lambda_star.value();
        const double l2 = hi.lambda_star.value();
        const bool tie = std::abs(l1 - l2) <= opts.tie_band * (1.0 + std::abs(l1));
        const SolveReport* pick = l1 <= l2 ? &lo : &hi;
        if (tie) {
          const bool a1 = lo.attainment == Attainment::attained;
          const bool a2 = hi.attainment == Attainment::attained;
          pick = (!a1 && a2) ? &hi : &lo;
          r.lambda_star = std::min(lo.lambda_star, hi.lambda_star);
          if (a1 || a2) {
            r.attainment = Attainment::attained;
            if (a1) r.solutions = lo.solutions;
            if (a2) {
              for (const Vector& x : hi.solutions) detail::push_distinct(r.solutions, x);
            }
          } else if (lo.attainment == Attainment::unknown ||
                     hi.attainment == Attainment::unknown) {
            r.attainment = Attainment::unknown;
          } else {
            r.attainment = Attainment::unattained;
          }
        } else {
          r.lambda_star = pick->lambda_star;
          r.attainment = pick->attainment;
          r.solutions = pick->solutions;
        }
        r.case_tag = pick == &lo ? SolveCase::lower_boundary_case2
                                 : SolveCase::upper_boundary_case3;
        r.multiplier_mu = pick->multiplier_mu;
        trace.f_at_lambda_star = pick->trace.f_at_lambda_star;
        for (const std::string& s : pick->trace.notes) trace.notes.push_back(s);
      }
      r.trace = std::move(trace);
    }
    if (p.v.is_finite()) detail::add_well_defined(r, p.f2, le_v);
  }
  r.diagnostics.insert(r.diagnostics.begin(), a);
  return r;
}

/// One named structural check on an instance: "a", "b", "c", "sdc" or
/// "welldef". Throws std::invalid_argument when the check does not apply.
inline CheckResult check_instance(const FractionalProblem& p, const std::string& which,
                                  const LmiOptions& opts = {}) {
  p.validate();
  if (!p.constrained()) {
    throw std::invalid_argument("check: instance has no active constraint");
  }
  const QuadraticForm& g = *p.g;
  const int n = p.dim();
  const bool two_sided = p.u.is_finite() && p.v.is_finite();
  const QuadraticForm le0 = p.v.is_finite()
                                ? g - QuadraticForm::constant(n, p.v.value())
                                : QuadraticForm::constant(n, p.u.value()) - g;
  if (which == "a") return check_assumption_a(g, p.u, p.v);
  if (which == "b") {
    CheckResult last;
    for (const auto& [bound, side] : {std::pair{p.u, "lower"}, std::pair{p.v, "upper"}}) {
      if (!bound.is_finite()) continue;
      last = check_assumption_b(make_equality_problem(p.f1, p.f2, g, bound.value()).h);
      last.name += std::string("(") + side + ")";
      if (!last.holds()) return last;
    }
    return last;
  }
  if (which == "c") {
    if (two_sided || !detail::rq_shaped(le0)) {
      throw std::invalid_argument(
          "check c: needs a single constraint of the form x^T G x <= rho with G >= 0, rho > 0");
    }
    return check_assumption_c(p.f2, le0.A, -le0.c, opts);
  }
  if (which == "sdc") return check_sdc(p.f2.A, g.A);
  if (which == "welldef") {
    CheckResult r = check_well_defined(p.f2, le0, opts);
    if (two_sided && r.verdict == Verdict::fails) {
      r.verdict = Verdict::unknown;
      r.note += " (decided on {g <= v}, a superset of the two-sided set)";
    }
    return r;
  }
  throw std::invalid_argument("check: unknown assumption '" + which +
                              "' (expected a, b, c, sdc or welldef)");
}

}  // namespace qfrac
