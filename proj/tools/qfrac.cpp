// qfrac command-line front end.
//
//   qfrac solve FILE [--tol T] [--json]
//   qfrac check FILE --assumption {a|b|c|sdc|welldef}
//   qfrac oracle FILE --grid N --box R
//   qfrac examples [NAME] [--json] [--emit]
//   qfrac batch DIR [--tol T] [--json]
//
// Exit codes: 0 success, 1 solver-status failure, 2 input error.

#include "qfrac/qfrac.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace qfrac;

namespace {

constexpr int kOk = 0;
constexpr int kSolverFailure = 1;
constexpr int kInputError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double default_tolerance() {
  if (const char* env = std::getenv("QFRAC_TOL")) {
    char* end = nullptr;
    const double t = std::strtod(env, &end);
    if (end != env && *end == '\0' && t > 0.0) return t;
    std::cerr << "warning: ignoring invalid QFRAC_TOL='" << env << "'\n";
  }
  return 1e-8;
}

std::string fmt(double x) {
  return to_string(ExtendedReal(x));
}

std::string fmt(const Vector& x) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += fmt(x(i));
  }
  return s + ")";
}

void print_check(std::ostream& os, const CheckResult& c, const std::string& indent = "") {
  os << indent << c.name << ": " << to_string(c.verdict);
  if (!c.note.empty()) os << " (" << c.note << ")";
  os << "\n";
  if (const Vector* v = c.vector_witness()) os << indent << "  witness " << fmt(*v) << "\n";
  if (const ScalarPair* p = c.pair_witness()) {
    os << indent << "  witness (" << fmt(p->first) << ", " << fmt(p->second) << ")\n";
  }
  if (const Matrix* m = c.matrix_witness()) {
    os << indent << "  witness matrix\n";
    for (Eigen::Index i = 0; i < m->rows(); ++i) {
      os << indent << "    " << fmt(Vector(m->row(i).transpose())) << "\n";
    }
  }
}

void print_report(std::ostream& os, const SolveReport& r) {
  os << "lambda* = " << to_string(r.lambda_star) << "\n";
  os << "attainment: " << to_string(r.attainment) << "\n";
  os << "case: " << to_string(r.case_tag) << "\n";
  os << "certified: " << to_string(r.certified) << "\n";
  if (r.multiplier_mu) os << "mu = " << fmt(*r.multiplier_mu) << "\n";
  const SolveTrace& t = r.trace;
  if (t.f_at_lambda_star) os << "f(lambda*) = " << to_string(*t.f_at_lambda_star) << "\n";
  if (t.case1_lambda) {
    os << "case-1 candidate = " << to_string(*t.case1_lambda);
    if (t.case1_f) os << ", f = " << to_string(*t.case1_f);
    os << "\n";
  }
  if (t.lambda_lower) {
    os << "lambda_1 = " << to_string(*t.lambda_lower);
    if (t.f_lower) os << ", f(lambda_1) = " << to_string(*t.f_lower);
    os << "\n";
  }
  if (t.lambda_upper) {
    os << "lambda_2 = " << to_string(*t.lambda_upper);
    if (t.f_upper) os << ", f(lambda_2) = " << to_string(*t.f_upper);
    os << "\n";
  }
  if (t.eta_interval) {
    os << "eta interval = [" << fmt(t.eta_interval->first) << ", "
       << fmt(t.eta_interval->second) << "]\n";
  }
  if (!r.solutions.empty()) {
    os << "solutions:\n";
    for (const Vector& x : r.solutions) os << "  " << fmt(x) << "\n";
  }
  if (!r.diagnostics.empty()) {
    os << "diagnostics:\n";
    for (const CheckResult& c : r.diagnostics) print_check(os, c, "  ");
  }
  for (const std::string& n : t.notes) os << "note: " << n << "\n";
}

int solver_exit(const SolveReport& r) {
  return r.attainment == Attainment::unknown ? kSolverFailure : kOk;
}

struct Timed {
  SolveReport report;
  double seconds = 0.0;
};

Timed timed_solve(const FractionalProblem& p, double tol) {
  const auto t0 = std::chrono::steady_clock::now();
  Timed out;
  out.report = solve(p, SolverOptions::from_tolerance(tol));
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

int run_solve(const std::string& file, double tol, bool json) {
  std::vector<std::string> warnings;
  const FractionalProblem p = parse_instance(read_file(file), &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  try {
    const Timed t = timed_solve(p, tol);
    if (json) {
      std::cout << report_to_json(t.report, {kVersion, tol, t.seconds}).dump(2) << "\n";
    } else {
      print_report(std::cout, t.report);
    }
    return solver_exit(t.report);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kSolverFailure;
  }
}

int run_check(const std::string& file, const std::string& which, double tol) {
  const FractionalProblem p = parse_instance(read_file(file));
  try {
    print_check(std::cout, check_instance(p, which, LmiOptions::from_tolerance(tol)));
    return kOk;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kSolverFailure;
  }
}

int run_oracle(const std::string& file, int grid, double box) {
  const FractionalProblem p = parse_instance(read_file(file));
  GridSpec spec;
  spec.points_per_axis = grid;
  spec.box_halfwidth = box;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  try {
    const GridResult r = grid_infimum(p, spec);
    std::cout << "grid infimum = " << fmt(r.value) << "\n"
              << "argmin = " << fmt(r.argmin) << "\n"
              << "feasible samples = " << r.feasible_samples << "\n";
    return kOk;
  } catch (const NoFeasibleSample& e) {
    std::cerr << e.what() << "\n";
    return kSolverFailure;
  }
}

int run_examples(const std::string& name, bool json, bool emit) {
  std::vector<CorpusEntry> entries;
  if (name.empty()) {
    entries = corpus();
  } else if (auto e = find_corpus_entry(name)) {
    entries.push_back(*e);
  } else {
    throw InputError("unknown example '" + name + "'");
  }
  if (emit) {
    if (entries.size() != 1) throw InputError("--emit needs an example name");
    std::cout << emit_instance(entries.front().problem) << "\n";
    return kOk;
  }
  bool all_ok = true;
  for (const CorpusEntry& e : entries) {
    const Timed t = timed_solve(e.problem, 1e-8);
    const std::vector<std::string> bad = compare_expectation(e, t.report);
    all_ok = all_ok && bad.empty();
    if (json) {
      Json j = report_to_json(t.report, {kVersion, 1e-8, t.seconds});
      j["example"] = e.name;
      j["matches_expectation"] = bad.empty();
      j["mismatches"] = bad;
      std::cout << j.dump(2) << "\n";
      continue;
    }
    std::cout << e.name << ": " << e.description << "\n";
    std::cout << "  lambda* = " << to_string(t.report.lambda_star) << ", "
              << to_string(t.report.attainment) << ", " << to_string(t.report.case_tag);
    if (t.report.trace.f_at_lambda_star) {
      std::cout << ", f(lambda*) = " << to_string(*t.report.trace.f_at_lambda_star);
    }
    std::cout << "\n";
    for (const Vector& x : t.report.solutions) std::cout << "  x* = " << fmt(x) << "\n";
    for (const std::string& b : bad) std::cout << "  MISMATCH: " << b << "\n";
    std::cout << "  " << (bad.empty() ? "matches expectation" : "DOES NOT match expectation")
              << "\n";
  }
  return all_ok ? kOk : kSolverFailure;
}

int run_batch(const std::string& dir, double tol, bool json) {
  if (!fs::is_directory(dir)) throw InputError("not a directory: '" + dir + "'");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  int code = kOk;
  Json all = Json::array();
  for (const fs::path& f : files) {
    const std::string name = f.filename().string();
    try {
      const Timed t = timed_solve(parse_instance(read_file(f.string())), tol);
      if (json) {
        Json j = report_to_json(t.report, {kVersion, tol, t.seconds});
        j["file"] = name;
        all.push_back(j);
      } else {
        std::cout << name << ": lambda* = " << to_string(t.report.lambda_star) << ", "
                  << to_string(t.report.attainment) << ", " << to_string(t.report.case_tag)
                  << ", " << to_string(t.report.certified) << "\n";
      }
      if (solver_exit(t.report) != kOk) code = std::max(code, kSolverFailure);
    } catch (const InputError& e) {
      std::cerr << name << ": input error: " << e.what() << "\n";
      code = kInputError;
    } catch (const InfeasibleError& e) {
      std::cerr << name << ": infeasible: " << e.what() << "\n";
      code = std::max(code, kSolverFailure);
    }
  }
  if (json) std::cout << all.dump(2) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qfrac: quadratic fractional programs over a quadratic interval constraint"};
  app.require_subcommand(1);
  double tol = default_tolerance();

  std::string file;
  bool json = false;
  auto* solve_cmd = app.add_subcommand("solve", "solve an instance file");
  solve_cmd->add_option("FILE", file, "instance JSON")->required();
  solve_cmd->add_option("--tol", tol, "base tolerance (default 1e-8 or $QFRAC_TOL)")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--json", json, "print the report as JSON");

  std::string which;
  auto* check_cmd = app.add_subcommand("check", "run one structural check");
  check_cmd->add_option("FILE", file, "instance JSON")->required();
  check_cmd->add_option("--assumption", which, "a | b | c | sdc | welldef")
      ->required()
      ->check(CLI::IsMember({"a", "b", "c", "sdc", "welldef"}));
  check_cmd->add_option("--tol", tol, "base tolerance")->check(CLI::PositiveNumber);

  int grid = 101;
  double box = 1.0;
  auto* oracle_cmd = app.add_subcommand("oracle", "grid-sampled infimum");
  oracle_cmd->add_option("FILE", file, "instance JSON")->required();
  oracle_cmd->add_option("--grid", grid, "points per axis")->required();
  oracle_cmd->add_option("--box", box, "box half-width")->required();

  std::string name;
  bool emit = false;
  auto* examples_cmd = app.add_subcommand("examples", "run the built-in example corpus");
  examples_cmd->add_option("NAME", name, "single example name");
  examples_cmd->add_flag("--json", json, "print reports as JSON");
  examples_cmd->add_flag("--emit", emit, "print the instance JSON of NAME instead of solving");

  std::string dir;
  auto* batch_cmd = app.add_subcommand("batch", "solve every *.json file in a directory");
  batch_cmd->add_option("DIR", dir, "directory")->required();
  batch_cmd->add_option("--tol", tol, "base tolerance")->check(CLI::PositiveNumber);
  batch_cmd->add_flag("--json", json, "print reports as a JSON array");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kInputError;
  }

  try {
    if (*solve_cmd) return run_solve(file, tol, json);
    if (*check_cmd) return run_check(file, which, tol);
    if (*oracle_cmd) return run_oracle(file, grid, box);
    if (*examples_cmd) return run_examples(name, json, emit);
    if (*batch_cmd) return run_batch(dir, tol, json);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverFailure;
  }
  return kInputError;
}
