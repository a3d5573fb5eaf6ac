// JSON instance and report formats.
//
// Instance:
//   {"n": 2,
//    "f1": {"A": [[1,0],[0,1]], "b": [0,0], "c": 1},
//    "f2": {...}, "g": {...} | null, "u": 0 | null, "v": 3 | null}
// Each form is x^T A x + 2 b^T x + c. A may also be a flat row-major array
// of n*n numbers. null u (v) stands for -inf (+inf); the strings "-inf" and
// "+inf" are accepted as well.

#pragma once

#include "qfrac/checks.hpp"
#include "qfrac/model.hpp"
#include "qfrac/solver.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfrac {

inline constexpr const char* kVersion = "1.0.0";

/// Rejected input; the message names the offending field.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Json = nlohmann::json;

namespace detail {

inline Json real_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0 ? "-inf" : "+inf";
  return x;
}

inline double real_from_json(const Json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "+inf" || s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InputError(field + ": expected a number");
}

inline double finite_from_json(const Json& j, const std::string& field) {
  if (!j.is_number()) throw InputError(field + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw InputError(field + ": must be finite");
  return x;
}

inline Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(real_to_json(v(i)));
  return a;
}

inline Vector vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw InputError(field + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) =
        real_from_json(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i)));
  return rows;
}

inline Matrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw InputError(field + ": expected an array of rows");
  if (j.empty()) return Matrix(0, 0);
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string row = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != cols) throw InputError(row + ": ragged matrix");
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          real_from_json(j[i][k], row + "[" + std::to_string(k) + "]");
    }
  }
  return m;
}

inline Matrix read_square(const Json& j, int n, const std::string& field) {
  if (!j.is_array()) throw InputError(field + ": expected an array");
  Matrix m(n, n);
  const auto un = static_cast<std::size_t>(n);
  if (j.size() == un * un && !j.empty() && !j[0].is_array()) {
    for (std::size_t k = 0; k < un * un; ++k) {
      m(static_cast<Eigen::Index>(k / un), static_cast<Eigen::Index>(k % un)) =
          finite_from_json(j[k], field + "[" + std::to_string(k) + "]");
    }
    return m;
  }
  if (j.size() != un) {
    throw InputError(field + ": dimension mismatch, expected " + std::to_string(n) + " rows");
  }
  for (std::size_t i = 0; i < un; ++i) {
    const std::string row = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != un) {
      throw InputError(row + ": dimension mismatch, expected " + std::to_string(n) + " entries");
    }
    for (std::size_t k = 0; k < un; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          finite_from_json(j[i][k], row + "[" + std::to_string(k) + "]");
    }
  }
  return m;
}

inline QuadraticForm form_from_json(const Json& j, int n, const std::string& field) {
  if (!j.is_object()) throw InputError(field + ": expected an object with A, b, c");
  if (!j.contains("A")) throw InputError(field + ".A: missing");
  const Matrix a = read_square(j["A"], n, field + ".A");
  const double amax = a.cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      if (std::abs(a(i, k) - a(k, i)) > 1e-12 * std::max(1.0, amax)) {
        throw InputError(field + ".A: matrix is not symmetric (entries (" +
                         std::to_string(i) + "," + std::to_string(k) + ") and (" +
                         std::to_string(k) + "," + std::to_string(i) + ") differ)");
      }
    }
  }
  Vector b = Vector::Zero(n);
  if (j.contains("b")) {
    if (!j["b"].is_array()) throw InputError(field + ".b: expected an array");
    if (j["b"].size() != static_cast<std::size_t>(n)) {
      throw InputError(field + ".b: dimension mismatch, expected " + std::to_string(n) +
                       " entries");
    }
    for (int i = 0; i < n; ++i) {
      b(i) = finite_from_json(j["b"][static_cast<std::size_t>(i)],
                              field + ".b[" + std::to_string(i) + "]");
    }
  }
  const double c = j.contains("c") ? finite_from_json(j["c"], field + ".c") : 0.0;
  return {SymMatrix(a), b, c};
}

inline Json form_to_json(const QuadraticForm& q) {
  return {{"A", matrix_to_json(q.A.matrix())}, {"b", vector_to_json(q.b)}, {"c", q.c}};
}

inline ExtendedReal bound_from_json(const Json& root, const char* key, double missing) {
  if (!root.contains(key) || root[key].is_null()) return missing;
  const double x = real_from_json(root[key], key);
  if (std::isnan(x)) throw InputError(std::string(key) + ": must not be nan");
  return x;
}

}  // namespace detail

/// Parses and validates an instance. Warnings (g ignored when both bounds
/// are null) are appended to `warnings` when given.
inline FractionalProblem parse_instance(const std::string& text,
                                        std::vector<std::string>* warnings = nullptr) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw InputError("instance: expected a JSON object");
  if (!root.contains("n") || !root["n"].is_number_integer() || root["n"].get<int>() < 1) {
    throw InputError("n: expected a positive integer");
  }
  const int n = root["n"].get<int>();
  for (const char* key : {"f1", "f2"}) {
    if (!root.contains(key)) throw InputError(std::string(key) + ": missing");
  }
  FractionalProblem p;
  p.f1 = detail::form_from_json(root["f1"], n, "f1");
  p.f2 = detail::form_from_json(root["f2"], n, "f2");
  if (root.contains("g") && !root["g"].is_null()) {
    p.g = detail::form_from_json(root["g"], n, "g");
  }
  p.u = detail::bound_from_json(root, "u", -std::numeric_limits<double>::infinity());
  p.v = detail::bound_from_json(root, "v", std::numeric_limits<double>::infinity());
  if (p.u.is_pos_inf()) throw InputError("u: must be below +inf");
  if (p.v.is_neg_inf()) throw InputError("v: must be above -inf");
  if (p.u > p.v) {
    throw InputError("u > v: lower bound " + to_string(p.u) + " exceeds upper bound " +
                     to_string(p.v));
  }
  if (!p.g && (p.u.is_finite() || p.v.is_finite())) {
    throw InputError("g: bounds u/v given but g is null");
  }
  if (p.g && !p.constrained() && warnings) {
    warnings->push_back("g is present but u and v are both null: g is ignored");
  }
  return p;
}

inline Json instance_to_json(const FractionalProblem& p) {
  Json j;
  j["n"] = p.dim();
  j["linear_term"] = "2*b^T x";
  j["f1"] = detail::form_to_json(p.f1);
  j["f2"] = detail::form_to_json(p.f2);
  j["g"] = p.g ? detail::form_to_json(*p.g) : Json(nullptr);
  j["u"] = p.u.is_finite() ? Json(p.u.value()) : Json(nullptr);
  j["v"] = p.v.is_finite() ? Json(p.v.value()) : Json(nullptr);
  return j;
}

/// Instance text, one form per line; doubles are printed so that parsing
/// restores them exactly.
inline std::string emit_instance(const FractionalProblem& p) {
  auto form = [](const QuadraticForm& q) {
    std::string a = "[";
    for (int i = 0; i < q.dim(); ++i) {
      if (i) a += ", ";
      a += Json(detail::vector_to_json(q.A.matrix().row(i))).dump();
    }
    a += "]";
    return std::string("{\"A\": ") + a + ", \"b\": " + detail::vector_to_json(q.b).dump() +
           ", \"c\": " + Json(q.c).dump() + "}";
  };
  auto bound = [](ExtendedReal x) {
    return x.is_finite() ? Json(x.value()).dump() : std::string("null");
  };
  std::string out = "{\n";
  out += "  \"n\": " + std::to_string(p.dim()) + ",\n";
  out += "  \"linear_term\": \"2*b^T x\",\n";
  out += "  \"f1\": " + form(p.f1) + ",\n";
  out += "  \"f2\": " + form(p.f2) + ",\n";
  out += "  \"g\": " + (p.g ? form(*p.g) : std::string("null")) + ",\n";
  out += "  \"u\": " + bound(p.u) + ",\n";
  out += "  \"v\": " + bound(p.v) + "\n}";
  return out;
}

struct ReportMeta {
  std::string version = kVersion;
  double tolerance = 1e-8;
  double wall_time_s = 0.0;
};

namespace detail {

inline Json witness_to_json(const Witness& w) {
  if (const auto* v = std::get_if<Vector>(&w)) return {{"kind", "vector"}, {"value", vector_to_json(*v)}};
  if (const auto* p = std::get_if<ScalarPair>(&w)) {
    return {{"kind", "pair"}, {"value", {real_to_json(p->first), real_to_json(p->second)}}};
  }
  if (const auto* m = std::get_if<Matrix>(&w)) return {{"kind", "matrix"}, {"value", matrix_to_json(*m)}};
  return {{"kind", "none"}};
}

inline Witness witness_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "vector") return vector_from_json(j.at("value"), "witness");
  if (kind == "pair") {
    return ScalarPair{real_from_json(j.at("value").at(0), "witness"),
                      real_from_json(j.at("value").at(1), "witness")};
  }
  if (kind == "matrix") return matrix_from_json(j.at("value"), "witness");
  return std::monostate{};
}

template <class E, std::size_t N>
E enum_from_string(const std::string& s, const E (&all)[N], const char* field) {
  for (E e : all) {
    if (s == to_string(e)) return e;
  }
  throw InputError(std::string(field) + ": unknown value '" + s + "'");
}

inline Json opt_real(const std::optional<ExtendedReal>& x) {
  return x ? real_to_json(x->value()) : Json(nullptr);
}

inline std::optional<ExtendedReal> opt_real_from(const Json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return real_from_json(j[key], key);
}

}  // namespace detail

inline Json check_to_json(const CheckResult& c) {
  return {{"name", c.name},
          {"verdict", to_string(c.verdict)},
          {"note", c.note},
          {"witness", detail::witness_to_json(c.witness)}};
}

inline CheckResult check_from_json(const Json& j) {
  static constexpr Verdict kAll[] = {Verdict::holds, Verdict::fails, Verdict::unknown};
  CheckResult c;
  c.name = j.at("name").get<std::string>();
  c.verdict = detail::enum_from_string(j.at("verdict").get<std::string>(), kAll, "verdict");
  c.note = j.at("note").get<std::string>();
  c.witness = detail::witness_from_json(j.at("witness"));
  return c;
}

inline Json report_to_json(const SolveReport& r, const ReportMeta& meta = {}) {
  using detail::opt_real;
  using detail::real_to_json;
  Json j;
  j["version"] = meta.version;
  j["tolerance"] = meta.tolerance;
  j["wall_time_s"] = meta.wall_time_s;
  j["lambda_star"] = real_to_json(r.lambda_star.value());
  j["attainment"] = to_string(r.attainment);
  j["case"] = to_string(r.case_tag);
  j["certified"] = to_string(r.certified);
  j["multiplier_mu"] = r.multiplier_mu ? real_to_json(*r.multiplier_mu) : Json(nullptr);
  j["solutions"] = Json::array();
  for (const Vector& x : r.solutions) j["solutions"].push_back(detail::vector_to_json(x));
  j["diagnostics"] = Json::array();
  for (const CheckResult& c : r.diagnostics) j["diagnostics"].push_back(check_to_json(c));
  const SolveTrace& t = r.trace;
  Json tr;
  tr["case1_lambda"] = opt_real(t.case1_lambda);
  tr["case1_f"] = opt_real(t.case1_f);
  tr["lambda_lower"] = opt_real(t.lambda_lower);
  tr["lambda_upper"] = opt_real(t.lambda_upper);
  tr["f_lower"] = opt_real(t.f_lower);
  tr["f_upper"] = opt_real(t.f_upper);
  tr["f_at_lambda_star"] = opt_real(t.f_at_lambda_star);
  tr["eta_interval"] = t.eta_interval ? Json{real_to_json(t.eta_interval->first),
                                             real_to_json(t.eta_interval->second)}
                                      : Json(nullptr);
  tr["rq_shaped"] = t.rq_shaped;
  tr["unique_multiplier"] = t.unique_multiplier ? Json(*t.unique_multiplier) : Json(nullptr);
  tr["notes"] = t.notes;
  j["trace"] = tr;
  return j;
}

inline SolveReport report_from_json(const Json& j, ReportMeta* meta = nullptr) {
  using detail::opt_real_from;
  using detail::real_from_json;
  static constexpr Attainment kAtt[] = {Attainment::attained, Attainment::unattained,
                                        Attainment::unbounded_below, Attainment::unknown};
  static constexpr SolveCase kCase[] = {
      SolveCase::unconstrained, SolveCase::interior_case1, SolveCase::lower_boundary_case2,
      SolveCase::upper_boundary_case3, SolveCase::one_sided, SolveCase::equality};
  static constexpr Certification kCert[] = {Certification::exact,
                                            Certification::lower_bound_only};
  try {
    if (meta) {
      meta->version = j.at("version").get<std::string>();
      meta->tolerance = j.at("tolerance").get<double>();
      meta->wall_time_s = j.at("wall_time_s").get<double>();
    }
    SolveReport r;
    r.lambda_star = real_from_json(j.at("lambda_star"), "lambda_star");
    r.attainment = detail::enum_from_string(j.at("attainment").get<std::string>(), kAtt,
                                            "attainment");
    r.case_tag = detail::enum_from_string(j.at("case").get<std::string>(), kCase, "case");
    r.certified = detail::enum_from_string(j.at("certified").get<std::string>(), kCert,
                                           "certified");
    if (!j.at("multiplier_mu").is_null()) {
      r.multiplier_mu = real_from_json(j["multiplier_mu"], "multiplier_mu");
    }
    for (const Json& x : j.at("solutions")) {
      r.solutions.push_back(detail::vector_from_json(x, "solutions"));
    }
    for (const Json& c : j.at("diagnostics")) r.diagnostics.push_back(check_from_json(c));
    const Json& tr = j.at("trace");
    SolveTrace& t = r.trace;
    t.case1_lambda = opt_real_from(tr, "case1_lambda");
    t.case1_f = opt_real_from(tr, "case1_f");
    t.lambda_lower = opt_real_from(tr, "lambda_lower");
    t.lambda_upper = opt_real_from(tr, "lambda_upper");
    t.f_lower = opt_real_from(tr, "f_lower");
    t.f_upper = opt_real_from(tr, "f_upper");
    t.f_at_lambda_star = opt_real_from(tr, "f_at_lambda_star");
    if (!tr.at("eta_interval").is_null()) {
      t.eta_interval = ScalarPair{real_from_json(tr["eta_interval"].at(0), "eta_interval"),
                                  real_from_json(tr["eta_interval"].at(1), "eta_interval")};
    }
    t.rq_shaped = tr.at("rq_shaped").get<bool>();
    if (!tr.at("unique_multiplier").is_null()) {
      t.unique_multiplier = tr["unique_multiplier"].get<bool>();
    }
    t.notes = tr.at("notes").get<std::vector<std::string>>();
    return r;
  } catch (const Json::exception& e) {
    throw InputError(std::string("report: ") + e.what());
  }
}

}  // namespace qfrac
