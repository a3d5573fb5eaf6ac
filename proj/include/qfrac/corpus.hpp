// The worked examples of the method as built-in instances, each with the
// values a correct solver must reproduce.

#pragma once

#include "qfrac/model.hpp"
#include "qfrac/solver.hpp"

#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qfrac {

struct Expectation {
  std::optional<ExtendedReal> lambda_star;
  std::optional<Attainment> attainment;
  std::optional<SolveCase> case_tag;
  std::optional<Certification> certified;
  std::optional<double> f_at_lambda_star;
  std::optional<double> case1_lambda;
  std::optional<double> lambda_lower;
  std::optional<double> lambda_upper;
  std::optional<double> f_lower;
  std::optional<double> f_upper;
  /// Every listed point must be within tol of some reported solution.
  std::vector<Vector> solutions_contain;
  /// (coordinate, value) that every reported solution must have.
  std::optional<std::pair<int, double>> solutions_coordinate;
  std::optional<double> max_eta_width;
  /// (assumption, verdict) pairs run through check_instance.
  std::vector<std::pair<std::string, Verdict>> checks;
  std::optional<double> welldef_delta_min;
  double tol = 1e-6;
};

struct CorpusEntry {
  std::string name;
  std::string description;
  FractionalProblem problem;
  Expectation expect;
};

namespace detail {

inline QuadraticForm form(int n, std::vector<double> diag,
                          std::vector<std::pair<std::pair<int, int>, double>> off,
                          std::vector<double> b, double c) {
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = diag[static_cast<std::size_t>(i)];
  for (const auto& [ij, v] : off) {
    a(ij.first, ij.second) = v;
    a(ij.second, ij.first) = v;
  }
  Vector bv(n);
  for (int i = 0; i < n; ++i) bv(i) = b[static_cast<std::size_t>(i)];
  return {SymMatrix(a), bv, c};
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace detail

inline std::vector<CorpusEntry> corpus() {
  using detail::form;
  using detail::vec;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<CorpusEntry> out;

  // (x1^2 + 1)/(x2^2 + 1) over x1^2 + 2 x3 - 1 <= 0.
  const FractionalProblem rq_like{form(3, {1, 0, 0}, {}, {0, 0, 0}, 1),
                                  form(3, {0, 1, 0}, {}, {0, 0, 0}, 1),
                                  form(3, {1, 0, 0}, {}, {0, 0, 1}, -1), -inf, 0.0};
  {
    CorpusEntry e{"ex3_1", "infimum 0 approached as x2 -> inf; f(0) = 1 > 0", rq_like, {}};
    e.expect.lambda_star = 0.0;
    e.expect.attainment = Attainment::unattained;
    e.expect.case_tag = SolveCase::one_sided;
    e.expect.f_at_lambda_star = 1.0;
    out.push_back(e);
  }
  {
    CorpusEntry e{"ex3_2", "(x1^2 + x3^2 + 2 x3)/(x2^2 + 1) over 0 <= x3^2 + 2 x3 <= 3",
                  {form(3, {1, 0, 1}, {}, {0, 0, 1}, 0), form(3, {0, 1, 0}, {}, {0, 0, 0}, 1),
                   form(3, {0, 0, 1}, {}, {0, 0, 1}, 0), 0.0, 3.0},
                  {}};
    e.expect.lambda_star = 0.0;
    e.expect.attainment = Attainment::attained;
    e.expect.case_tag = SolveCase::lower_boundary_case2;
    e.expect.case1_lambda = -1.0;
    e.expect.lambda_lower = 0.0;
    e.expect.lambda_upper = 0.0;
    e.expect.f_lower = 0.0;
    e.expect.f_upper = 3.0;
    e.expect.solutions_contain = {vec({0, 0, 0}), vec({0, 0, -2})};
    out.push_back(e);
  }
  {
    CorpusEntry e{"ex3_3", "2 x2/(x2^2 + 1) over 0 <= x2^2 + 2 x1 <= 2",
                  {form(2, {0, 0}, {}, {0, 1}, 0), form(2, {0, 1}, {}, {0, 0}, 1),
                   form(2, {0, 1}, {}, {1, 0}, 0), 0.0, 2.0},
                  {}};
    e.expect.lambda_star = -1.0;
    e.expect.attainment = Attainment::attained;
    e.expect.case_tag = SolveCase::interior_case1;
    e.expect.solutions_coordinate = std::pair{1, -1.0};
    e.expect.checks = {{"b", Verdict::fails}};
    out.push_back(e);
  }
  {
    CorpusEntry e{"ex4_1", "same instance; the LMI optimum (lambda, eta) = (0, 0) is unique",
                  rq_like, {}};
    e.expect.lambda_star = 0.0;
    e.expect.attainment = Attainment::unattained;
    e.expect.case_tag = SolveCase::one_sided;
    e.expect.f_at_lambda_star = 1.0;
    e.expect.max_eta_width = 1e-6;
    out.push_back(e);
  }
  {
    CorpusEntry e{"ex5_1", "(x1^2 + x2^2 + 5)/x1^2 over 1 - 2 x1 x2 <= 0; not SDC",
                  {form(2, {1, 1}, {}, {0, 0}, 5), form(2, {1, 0}, {}, {0, 0}, 0),
                   form(2, {0, 0}, {{{0, 1}, -1}}, {0, 0}, 1), -inf, 0.0},
                  {}};
    e.expect.lambda_star = 1.0;
    e.expect.attainment = Attainment::unattained;
    e.expect.case_tag = SolveCase::one_sided;
    e.expect.checks = {{"sdc", Verdict::fails}, {"welldef", Verdict::unknown}};
    out.push_back(e);
  }
  {
    CorpusEntry e{"ex5_2", "(x1^2 + x2^2 + x3)/(x1^2 + 1) over x1^2 + x2^2 <= 1",
                  {form(3, {1, 1, 0}, {}, {0, 0, 0.5}, 0), form(3, {1, 0, 0}, {}, {0, 0, 0}, 1),
                   form(3, {1, 1, 0}, {}, {0, 0, 0}, 0), -inf, 1.0},
                  {}};
    e.expect.lambda_star = ExtendedReal::neg_inf();
    e.expect.attainment = Attainment::unbounded_below;
    e.expect.checks = {{"c", Verdict::fails}, {"welldef", Verdict::holds}};
    e.expect.welldef_delta_min = 1.0 - 1e-6;
    out.push_back(e);
  }
  {
    CorpusEntry e{"rem3_4",
                  "(x1^2 + x3^2 + 2)/(x1^2 + x3^2 + 1) over x1^2 - x2^2 + 2 x1 + 2 x2 = 0",
                  {form(3, {1, 0, 1}, {}, {0, 0, 0}, 2), form(3, {1, 0, 1}, {}, {0, 0, 0}, 1),
                   form(3, {1, -1, 0}, {}, {1, 1, 0}, 0), 0.0, 0.0},
                  {}};
    e.expect.lambda_star = 1.0;
    e.expect.attainment = Attainment::unattained;
    e.expect.case_tag = SolveCase::equality;
    e.expect.certified = Certification::exact;
    e.expect.checks = {{"b", Verdict::holds}};
    out.push_back(e);
  }
  return out;
}

inline std::optional<CorpusEntry> find_corpus_entry(const std::string& name) {
  for (CorpusEntry& e : corpus()) {
    if (e.name == name) return e;
  }
  return std::nullopt;
}

/// Mismatches between a solve report (plus checks) and the expectation;
/// empty when everything matches.
inline std::vector<std::string> compare_expectation(const CorpusEntry& e,
                                                    const SolveReport& r,
                                                    const LmiOptions& lmi = {}) {
  std::vector<std::string> bad;
  const Expectation& x = e.expect;
  auto fmt = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::string(buf);
  };
  auto near = [&](const char* what, std::optional<ExtendedReal> got, double want) {
    if (!got) {
      bad.push_back(std::string(what) + ": not reported");
    } else if (!got->is_finite() || std::abs(got->value() - want) > x.tol) {
      bad.push_back(std::string(what) + " = " + to_string(*got) + ", expected " + fmt(want));
    }
  };
  if (x.lambda_star) {
    if (x.lambda_star->is_finite()) {
      near("lambda*", r.lambda_star, x.lambda_star->value());
    } else if (!(r.lambda_star == *x.lambda_star)) {
      bad.push_back("lambda* = " + to_string(r.lambda_star) + ", expected " +
                    to_string(*x.lambda_star));
    }
  }
  if (x.attainment && r.attainment != *x.attainment) {
    bad.push_back(std::string("attainment = ") + to_string(r.attainment) + ", expected " +
                  to_string(*x.attainment));
  }
  if (x.case_tag && r.case_tag != *x.case_tag) {
    bad.push_back(std::string("case = ") + to_string(r.case_tag) + ", expected " +
                  to_string(*x.case_tag));
  }
  if (x.certified && r.certified != *x.certified) {
    bad.push_back(std::string("certified = ") + to_string(r.certified) + ", expected " +
                  to_string(*x.certified));
  }
  if (x.f_at_lambda_star) near("f(lambda*)", r.trace.f_at_lambda_star, *x.f_at_lambda_star);
  if (x.case1_lambda) near("case-1 lambda", r.trace.case1_lambda, *x.case1_lambda);
  if (x.lambda_lower) near("lambda_1", r.trace.lambda_lower, *x.lambda_lower);
  if (x.lambda_upper) near("lambda_2", r.trace.lambda_upper, *x.lambda_upper);
  if (x.f_lower) near("f(lambda_1)", r.trace.f_lower, *x.f_lower);
  if (x.f_upper) near("f(lambda_2)", r.trace.f_upper, *x.f_upper);
  for (const Vector& want : x.solutions_contain) {
    bool found = false;
    for (const Vector& s : r.solutions) found = found || (s - want).norm() <= x.tol;
    if (!found) bad.push_back("no reported solution near the expected point");
  }
  if (x.solutions_coordinate) {
    const auto [i, v] = *x.solutions_coordinate;
    if (r.solutions.empty()) bad.push_back("no solutions reported");
    for (const Vector& s : r.solutions) {
      if (std::abs(s(i) - v) > x.tol) {
        bad.push_back("solution coordinate " + std::to_string(i) + " = " + fmt(s(i)) +
                      ", expected " + fmt(v));
      }
    }
  }
  if (x.max_eta_width) {
    if (!r.trace.eta_interval) {
      bad.push_back("eta interval not reported");
    } else if (r.trace.eta_interval->second - r.trace.eta_interval->first > *x.max_eta_width) {
      bad.push_back("eta interval width " +
                    fmt(r.trace.eta_interval->second - r.trace.eta_interval->first) +
                    " exceeds " + fmt(*x.max_eta_width));
    }
  }
  for (const auto& [which, verdict] : x.checks) {
    const CheckResult c = check_instance(e.problem, which, lmi);
    if (c.verdict != verdict) {
      bad.push_back("check " + which + " = " + to_string(c.verdict) + ", expected " +
                    to_string(verdict));
    }
    if (which == "welldef" && x.welldef_delta_min) {
      const ScalarPair* w = c.pair_witness();
      if (!w || w->first < *x.welldef_delta_min) {
        bad.push_back("well-definedness margin below " + fmt(*x.welldef_delta_min));
      }
    }
  }
  return bad;
}

}  // namespace qfrac
