// Brute-force references: grid sampling of f1/f2 over a box, and a
// root-finding Dinkelbach iteration on the parametric value f(lambda).

#pragma once

#include "qfrac/model.hpp"
#include "qfrac/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace qfrac {

struct GridSpec {
  double box_halfwidth = 1.0;
  int points_per_axis = 101;
  double feasibility_tol = 1e-8;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;

  void validate() const {
    if (points_per_axis < 2) throw std::invalid_argument("GridSpec: points_per_axis must be >= 2");
    if (!(box_halfwidth > 0.0)) throw std::invalid_argument("GridSpec: box_halfwidth must be > 0");
  }
};

class NoFeasibleSample : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridResult {
  double value = std::numeric_limits<double>::infinity();
  Vector argmin;
  std::int64_t feasible_samples = 0;
};

namespace detail {

inline bool is_equality(const FractionalProblem& p) {
  return p.constrained() && p.u.is_finite() && p.v.is_finite() && p.u == p.v;
}

inline Vector grid_point(const GridSpec& s, int n, std::int64_t idx) {
  Vector x(n);
  const double h = 2.0 * s.box_halfwidth / (s.points_per_axis - 1);
  for (int i = n - 1; i >= 0; --i) {
    x(i) = -s.box_halfwidth + h * static_cast<double>(idx % s.points_per_axis);
    idx /= s.points_per_axis;
  }
  return x;
}

// Newton steps along the gradient toward {g = level}; nothing when the
// gradient is too small or the iteration does not land.
inline std::optional<Vector> project_to_level(const QuadraticForm& g, double level,
                                              Vector x, double tol) {
  for (int it = 0; it < 8; ++it) {
    const double r = evaluate(g, x) - level;
    if (std::abs(r) <= tol) return x;
    const Vector gr = gradient(g, x);
    if (gr.norm() < 1e-6) return std::nullopt;
    x -= (r / gr.squaredNorm()) * gr;
  }
  if (std::abs(evaluate(g, x) - level) <= tol) return x;
  return std::nullopt;
}

// The sample associated with grid index idx, if it is feasible.
inline std::optional<Vector> grid_sample(const FractionalProblem& p, const GridSpec& s,
                                         std::int64_t idx) {
  Vector x = grid_point(s, p.dim(), idx);
  if (is_equality(p)) return project_to_level(*p.g, p.u.value(), x, s.feasibility_tol);
  if (!p.feasible(x, s.feasibility_tol)) return std::nullopt;
  return x;
}

inline std::int64_t grid_size(const GridSpec& s, int n) {
  std::int64_t total = 1;
  for (int i = 0; i < n; ++i) total *= s.points_per_axis;
  return total;
}

}  // namespace detail

/// Minimum of f1/f2 over the feasible grid points of [-R, R]^n (equality
/// instances are sampled by projecting each grid point onto the level set).
/// Points with f2 <= 0 are skipped. Ties go to the lexicographically first
/// grid point. Throws NoFeasibleSample when nothing feasible is found.
inline GridResult grid_infimum(const FractionalProblem& p, const GridSpec& spec) {
  spec.validate();
  p.validate();
  const std::int64_t total = detail::grid_size(spec, p.dim());
  unsigned workers = spec.threads ? spec.threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, 64));

  struct Partial {
    double value = std::numeric_limits<double>::infinity();
    std::int64_t index = -1;
    Vector x;
    std::int64_t count = 0;
  };
  std::vector<Partial> parts(workers);
  auto run = [&](unsigned w) {
    const std::int64_t begin = total * w / workers;
    const std::int64_t end = total * (w + 1) / workers;
    Partial& out = parts[w];
    for (std::int64_t i = begin; i < end; ++i) {
      const auto x = detail::grid_sample(p, spec, i);
      if (!x) continue;
      const double d = evaluate(p.f2, *x);
      if (!(d > 0.0)) continue;
      ++out.count;
      const double r = evaluate(p.f1, *x) / d;
      if (r < out.value) {
        out.value = r;
        out.index = i;
        out.x = *x;
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }

  GridResult best;
  std::int64_t best_index = -1;
  for (const Partial& part : parts) {
    best.feasible_samples += part.count;
    if (part.index < 0) continue;
    if (part.value < best.value || (part.value == best.value && part.index < best_index)) {
      best.value = part.value;
      best.argmin = part.x;
      best_index = part.index;
    }
  }
  if (best_index < 0) throw NoFeasibleSample("grid_infimum: no feasible sample");
  return best;
}

/// Up to max_count feasible grid samples, taken at an even stride through
/// all feasible ones.
inline std::vector<Vector> sample_feasible(const FractionalProblem& p,
                                           const GridSpec& spec,
                                           std::size_t max_count) {
  spec.validate();
  const std::int64_t total = detail::grid_size(spec, p.dim());
  std::vector<Vector> all;
  for (std::int64_t i = 0; i < total; ++i) {
    if (auto x = detail::grid_sample(p, spec, i)) all.push_back(std::move(*x));
  }
  if (all.size() <= max_count) return all;
  std::vector<Vector> out;
  out.reserve(max_count);
  for (std::size_t k = 0; k < max_count; ++k) {
    out.push_back(all[k * all.size() / max_count]);
  }
  return out;
}

struct DinkelbachResult {
  double root = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

inline double root_tolerance(double lambda) { return 1e-8 * (1.0 + std::abs(lambda)); }

/// Root of the nonincreasing function f by bracketing from lambda_init and
/// Illinois-safeguarded regula falsi (bisection when an end is -inf).
/// Throws std::runtime_error when f stays -inf below lambda_init, when
/// no sign change is found, when f jumps over zero, or after 100
/// evaluations.
inline DinkelbachResult dinkelbach(const std::function<ExtendedReal(double)>& f_eval,
                                   double lambda_init, int max_iter = 100) {
  DinkelbachResult out;
  auto f = [&](double l) {
    if (++out.iterations > max_iter) throw std::runtime_error("dinkelbach: iteration cap exceeded");
    return f_eval(l).value();
  };
  const double f0 = f(lambda_init);
  if (std::isnan(f0)) throw std::runtime_error("dinkelbach: f(lambda_init) is NaN");
  if (std::abs(f0) <= root_tolerance(lambda_init)) {
    out.root = lambda_init;
    out.residual = f0;
    return out;
  }

  double a, fa, b, fb;
  double step = 1.0;
  if (f0 > 0.0) {
    a = lambda_init;
    fa = f0;
    for (;;) {
      b = a + step;
      fb = f(b);
      if (std::abs(fb) <= root_tolerance(b) && std::isfinite(fb)) {
        out.root = b;
        out.residual = fb;
        return out;
      }
      if (fb < 0.0) break;
      if (std::isinf(fb)) throw std::runtime_error("dinkelbach: f is +inf (no root)");
      a = b;
      fa = fb;
      step *= 2.0;
    }
  } else {
    b = lambda_init;
    fb = f0;
    for (;;) {
      a = b - step;
      fa = f(a);
      if (std::isinf(fa) && std::abs(a) > 1e12) {
        throw std::runtime_error("dinkelbach: f is -inf below lambda_init (unbounded)");
      }
      if (std::abs(fa) <= root_tolerance(a)) {
        out.root = a;
        out.residual = fa;
        return out;
      }
      if (fa > 0.0) break;
      b = a;
      fb = fa;
      step *= 2.0;
    }
  }

  int side = 0;
  for (;;) {
    double c;
    if (std::isfinite(fa) && std::isfinite(fb) && fa != fb) {
      c = (a * fb - b * fa) / (fb - fa);
      if (!(c > a && c < b)) c = 0.5 * (a + b);
    } else {
      c = 0.5 * (a + b);
    }
    const double fc = f(c);
    if (std::isfinite(fc) && std::abs(fc) <= root_tolerance(c)) {
      out.root = c;
      out.residual = fc;
      return out;
    }
    if (b - a <= 1e-13 * (1.0 + std::abs(c))) {
      throw std::runtime_error("dinkelbach: f jumps over zero (no root)");
    }
    if (fc > 0.0) {
      a = c;
      fa = fc;
      if (side == 1 && std::isfinite(fb)) fb *= 0.5;
      side = 1;
    } else {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    }
  }
}

/// f(lambda) for the instance's constraint (none, g <= 0 or g = 0).
inline std::function<ExtendedReal(double)> parametric_evaluator(
    QuadraticForm f1, QuadraticForm f2, std::optional<QuadraticForm> constraint,
    ConstraintKind kind, LmiOptions opts = {}) {
  return [=](double lambda) {
    return parametric_value(f1, f2, constraint ? &*constraint : nullptr, kind, lambda, opts);
  };
}

}  // namespace qfrac
