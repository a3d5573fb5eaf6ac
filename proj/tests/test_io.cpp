#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qfrac;
using namespace qfrac::testing;

namespace {

std::string message_of(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

bool same_problem(const FractionalProblem& a, const FractionalProblem& b) {
  return a.f1 == b.f1 && a.f2 == b.f2 && a.g.has_value() == b.g.has_value() &&
         (!a.g || *a.g == *b.g) && a.u == b.u && a.v == b.v;
}

const char* kBoundary = R"({
  "n": 3,
  "f1": {"A": [[1,0,0],[0,0,0],[0,0,1]], "b": [0,0,1], "c": 0},
  "f2": {"A": [[0,0,0],[0,1,0],[0,0,0]], "b": [0,0,0], "c": 1},
  "g":  {"A": [[0,0,0],[0,0,0],[0,0,1]], "b": [0,0,1], "c": 0},
  "u": 0, "v": 3
})";

}  // namespace

TEST(ParseInstance, BoundaryExample) {
  const FractionalProblem p = parse_instance(kBoundary);
  EXPECT_EQ(p.dim(), 3);
  EXPECT_EQ(p.u.value(), 0.0);
  EXPECT_EQ(p.v.value(), 3.0);
  EXPECT_DOUBLE_EQ(evaluate(*p.g, vec({0, 0, 1})), 3.0);
}

TEST(ParseInstance, RejectsReversedBounds) {
  const std::string m = message_of(R"({"n":1,"f1":{"A":[[1]]},"f2":{"A":[[1]],"c":1},
    "g":{"A":[[1]]},"u":5,"v":1})");
  EXPECT_NE(m.find("u > v"), std::string::npos) << m;
}

TEST(ParseInstance, RejectsAsymmetricMatrix) {
  const std::string m = message_of(R"({"n":2,"f1":{"A":[[0,1],[0,0]]},"f2":{"A":[[1,0],[0,1]]}})");
  EXPECT_NE(m.find("f1.A"), std::string::npos) << m;
  EXPECT_NE(m.find("symmetric"), std::string::npos) << m;
  // Within the relative tolerance the matrix is accepted and symmetrized.
  const FractionalProblem p =
      parse_instance(R"({"n":2,"f1":{"A":[[0,1],[1.0000000000000002,0]]},"f2":{"A":[[1,0],[0,1]]}})");
  EXPECT_EQ(p.f1.A(0, 1), p.f1.A(1, 0));
}

TEST(ParseInstance, DistinctMessages) {
  EXPECT_NE(message_of("{not json").find("malformed JSON"), std::string::npos);
  EXPECT_NE(message_of(R"({"n":2,"f1":{"A":[[1,0],[0,1]],"b":[1]},"f2":{"A":[[1,0],[0,1]]}})")
                .find("f1.b: dimension mismatch"),
            std::string::npos);
  EXPECT_NE(message_of(R"({"n":2,"f1":{"A":[[1,0,0],[0,1,0]]},"f2":{"A":[[1,0],[0,1]]}})")
                .find("f1.A"),
            std::string::npos);
  EXPECT_NE(message_of(R"({"f1":{},"f2":{}})").find("n:"), std::string::npos);
  EXPECT_NE(message_of(R"({"n":1,"f1":{"A":[[1]]}})").find("f2: missing"), std::string::npos);
  EXPECT_NE(message_of(R"({"n":1,"f1":{"A":[["x"]]},"f2":{"A":[[1]]}})").find("f1.A[0][0]"),
            std::string::npos);
}

TEST(ParseInstance, FlatMatrixAndInfiniteBounds) {
  const FractionalProblem p = parse_instance(
      R"({"n":2,"f1":{"A":[1,0,0,1]},"f2":{"A":[1,0,0,1],"c":1},"g":{"A":[1,0,0,1]},"u":"-inf","v":1})");
  EXPECT_TRUE(p.u.is_neg_inf());
  EXPECT_EQ(p.f1.A(1, 1), 1.0);
}

TEST(ParseInstance, IgnoredConstraintWarns) {
  std::vector<std::string> warnings;
  const FractionalProblem p = parse_instance(
      R"({"n":1,"f1":{"A":[[1]]},"f2":{"A":[[1]],"c":1},"g":{"A":[[1]]},"u":null,"v":null})",
      &warnings);
  EXPECT_FALSE(p.constrained());
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("ignored"), std::string::npos);
}

TEST(EmitInstance, RoundTripsRandomInstancesExactly) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    FractionalProblem p{random_form(rng, n, 3.7), random_form(rng, n, 1e-3), std::nullopt};
    if (trial % 3) {
      p.g = random_form(rng, n, 1e5);
      p.u = trial % 2 ? ExtendedReal(-0.1234567890123456789) : ExtendedReal::neg_inf();
      p.v = 1.0 / 3.0;
    }
    const FractionalProblem q = parse_instance(emit_instance(p));
    EXPECT_TRUE(same_problem(p, q)) << emit_instance(p);
  }
}

TEST(Report, RoundTripsThroughJson) {
  for (const CorpusEntry& e : corpus()) {
    const SolveReport r = solve(e.problem);
    const Json j = report_to_json(r, {kVersion, 1e-8, 0.25});
    ReportMeta meta;
    const SolveReport back = report_from_json(Json::parse(j.dump()), &meta);
    EXPECT_EQ(report_to_json(back, meta), j) << e.name;
    EXPECT_EQ(back.lambda_star, r.lambda_star);
    EXPECT_EQ(back.solutions, r.solutions);
    EXPECT_EQ(back.diagnostics.size(), r.diagnostics.size());
    EXPECT_EQ(meta.wall_time_s, 0.25);
  }
}

TEST(Report, InfinitiesAreStrings) {
  SolveReport r;
  r.lambda_star = ExtendedReal::neg_inf();
  r.attainment = Attainment::unbounded_below;
  const Json j = report_to_json(r);
  EXPECT_EQ(j["lambda_star"], "-inf");
  EXPECT_TRUE(report_from_json(j).lambda_star.is_neg_inf());
  EXPECT_THROW(report_from_json(Json::parse(R"({"lambda_star": 1})")), InputError);
}

TEST(Corpus, EveryExampleMatchesItsExpectation) {
  for (const CorpusEntry& e : corpus()) {
    const std::vector<std::string> bad = compare_expectation(e, solve(e.problem));
    EXPECT_TRUE(bad.empty()) << e.name << ": " << (bad.empty() ? "" : bad.front());
  }
  EXPECT_FALSE(find_corpus_entry("nope").has_value());
}

TEST(Corpus, ShippedInstanceFilesMatchTheCorpus) {
  for (const CorpusEntry& e : corpus()) {
    const std::filesystem::path path =
        std::filesystem::path(QFRAC_DATA_DIR) / (e.name + ".json");
    std::ifstream in(path);
    ASSERT_TRUE(in) << path;
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_TRUE(same_problem(parse_instance(ss.str()), e.problem)) << e.name;
  }
}
