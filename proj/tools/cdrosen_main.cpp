#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cdrosen/critical_points.hpp"
#include "cdrosen/harness.hpp"
#include "cdrosen/verify.hpp"

namespace {

using namespace cdrosen;

int default_workers() {
  if (const char* env = std::getenv("CDROSEN_WORKERS")) {
    try {
      const int workers = std::stoi(env);
      if (workers >= 1) return workers;
    } catch (const std::exception&) {
      // fall through to the serial default
    }
  }
  return 1;
}

void print_rows(const std::vector<ResultRow>& rows) {
  std::printf("%9s %7s %6s %8s %10s %14s %16s %14s %14s %10s\n", "dimension", "problem",
              "seed", "solver", "iters", "function_calls", "objective", "solution_err",
              "gap", "time_ms");
  for (const ResultRow& row : rows) {
    std::printf("%9d %7s %6s %8s %10lld %14lld %16.8e %14.6e ", row.dimension,
                to_string(row.problem), to_string(row.seed), to_string(row.solver),
                row.iterations, row.function_calls, row.objective_value, row.solution_error);
    if (row.gap) {
      std::printf("%14.6e ", *row.gap);
    } else {
      std::printf("%14s ", "-");
    }
    std::printf("%10.2f\n", row.wall_time_ms);
  }
}

int cmd_solve(const std::string& problem, const std::string& dims_text, double big_n,
              const std::string& seed_text, const std::string& solver_text, double tol,
              long long max_iters, int workers, std::string out_path,
              const std::string& format_text, bool extended) {
  ExperimentSpec spec;
  spec.big_n = big_n;
  spec.parallel_workers = workers;

  if (problem == "primal") {
    spec.problem = ProblemKind::Primal;
  } else if (problem == "dual") {
    spec.problem = ProblemKind::Dual;
  } else if (problem == "both") {
    spec.problem = ProblemKind::Both;
  } else {
    throw CLI::ValidationError("--problem", "expected primal|dual|both");
  }

  if (seed_text == "seed1") {
    spec.seed_kind = SeedKind::Seed1;
  } else if (seed_text == "seed2") {
    spec.seed_kind = SeedKind::Seed2;
  } else if (seed_text.rfind("custom:", 0) == 0) {
    spec.seed_kind = SeedKind::Custom;
    spec.custom_pattern = seed_text.substr(7);
  } else {
    throw CLI::ValidationError("--seed", "expected seed1|seed2|custom:<pattern>");
  }

  if (solver_text == "pattern") {
    spec.solver = SolverKind::PatternSearch;
  } else if (solver_text == "gradient") {
    spec.solver = SolverKind::GradientDescent;
  } else {
    throw CLI::ValidationError("--solver", "expected pattern|gradient");
  }

  spec.solver_cfg.step_tolerance = tol;
  spec.solver_cfg.gradient_tolerance = tol;
  spec.solver_cfg.max_iterations = max_iters;

  spec.dims = dims_text.empty() ? default_dimension_sweep(extended) : parse_dims(dims_text);

  if (format_text == "csv") {
    spec.format = OutputFormat::Csv;
  } else if (format_text == "json") {
    spec.format = OutputFormat::Json;
  } else {
    throw CLI::ValidationError("--format", "expected csv|json");
  }
  if (out_path.empty()) {
    out_path = spec.format == OutputFormat::Csv ? "results.csv" : "results.json";
  }

  const std::vector<ResultRow> rows = run_experiment(spec);
  print_rows(rows);
  write_results(rows, out_path, spec.format);
  std::printf("wrote %zu rows to %s\n", rows.size(), out_path.c_str());
  return 0;
}

int cmd_atlas(int n, int starts, double big_n, std::uint64_t rng_seed,
              const std::string& out_path) {
  const ProblemConfig cfg(n, big_n);
  const Atlas atlas = enumerate_critical_points(cfg, starts, rng_seed);

  std::printf("critical points for n=%d (N=%g), %d starts, %d failed\n", n, big_n, starts,
              atlas.failed_starts);
  std::printf("%4s %18s %18s %14s %8s %10s %12s\n", "#", "primal_value", "dual_value", "gap",
              "region", "class", "x[0]");
  int index = 0;
  for (const CriticalPair& pair : atlas.pairs) {
    std::printf("%4d %18.10f %18.10f %14.3e %8s %10s %12.8f\n", index++, pair.primal_value,
                pair.dual_value, pair.gap, to_string(pair.region),
                to_string(pair.primal_class), pair.x[0]);
  }

  if (!out_path.empty()) {
    std::string json = "[\n";
    bool first = true;
    for (const CriticalPair& pair : atlas.pairs) {
      if (!first) json += ",\n";
      first = false;
      json += "  {\"primal_value\": " + std::to_string(pair.primal_value) +
              ", \"dual_value\": " + std::to_string(pair.dual_value) +
              ", \"gap\": " + std::to_string(pair.gap) + ", \"region\": \"" +
              to_string(pair.region) + "\", \"class\": \"" + to_string(pair.primal_class) +
              "\", \"sigma\": [";
      for (std::size_t k = 0; k < pair.sigma.size(); ++k) {
        if (k) json += ", ";
        json += std::to_string(pair.sigma[k]);
      }
      json += "], \"x\": [";
      for (std::size_t k = 0; k < pair.x.size(); ++k) {
        if (k) json += ", ";
        json += std::to_string(pair.x[k]);
      }
      json += "]}";
    }
    json += "\n]\n";
    FILE* out = std::fopen(out_path.c_str(), "wb");
    if (!out) {
      std::fprintf(stderr, "cannot open %s\n", out_path.c_str());
      return 2;
    }
    std::fwrite(json.data(), 1, json.size(), out);
    std::fclose(out);
    std::printf("wrote %zu pairs to %s\n", atlas.pairs.size(), out_path.c_str());
  }
  return 0;
}

int cmd_verify(const std::string& scope, long long samples, std::uint64_t rng_seed) {
  VerifyOptions options;
  options.scope = scope;
  options.samples = samples;
  options.rng_seed = rng_seed;
  const VerifyReport report = run_verification(options);
  for (const VerifySuiteResult& suite : report.suites) {
    if (suite.passed()) {
      std::printf("[PASS] %-12s %lld/%lld checks\n", suite.name.c_str(),
                  suite.checks - suite.failures, suite.checks);
    } else {
      std::printf("[FAIL] %-12s %lld/%lld checks: %s\n", suite.name.c_str(),
                  suite.checks - suite.failures, suite.checks, suite.detail.c_str());
    }
  }
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"canonical dual construction, solvers and benchmark harness for the "
               "n-dimensional Rosenbrock family"};
  app.require_subcommand(1);

  std::string problem = "both", dims_text, seed_text = "seed1", solver_text = "pattern";
  std::string out_path, format_text = "csv";
  double big_n = 100.0, tol = 1e-8;
  long long max_iters = 100000, samples = 0;
  int workers = default_workers(), atlas_n = 5, starts = 200;
  std::uint64_t rng_seed = 42;
  bool extended = false;
  std::string scope = "all", atlas_out;

  CLI::App* solve = app.add_subcommand("solve", "run primal/dual solves over a dimension sweep");
  solve->add_option("--problem", problem, "primal|dual|both")->capture_default_str();
  solve->add_option("--dims", dims_text, "dimension list, e.g. 2..10,20,50");
  solve->add_option("--bigN", big_n, "objective parameter N")->capture_default_str();
  solve->add_option("--seed", seed_text, "seed1|seed2|custom:<pattern>")->capture_default_str();
  solve->add_option("--solver", solver_text, "pattern|gradient")->capture_default_str();
  solve->add_option("--tol", tol, "step and gradient tolerance")->capture_default_str();
  solve->add_option("--max-iters", max_iters, "iteration budget")->capture_default_str();
  solve->add_option("--parallel", workers, "worker count for objective evaluation")
      ->capture_default_str();
  solve->add_option("--out", out_path, "output file (default results.csv/.json)");
  solve->add_option("--format", format_text, "csv|json")->capture_default_str();
  solve->add_flag("--extended", extended, "extend the default sweep to n=4000");
  solve->add_option("--rng-seed", rng_seed, "seed for randomized components")
      ->capture_default_str();

  CLI::App* atlas = app.add_subcommand("atlas", "enumerate and classify critical points");
  atlas->add_option("--n", atlas_n, "dimension (<= 12)")->required();
  atlas->add_option("--starts", starts, "random starts")->capture_default_str();
  atlas->add_option("--bigN", big_n, "objective parameter N")->capture_default_str();
  atlas->add_option("--rng-seed", rng_seed, "start sampling seed")->capture_default_str();
  atlas->add_option("--out", atlas_out, "write pairs as JSON");

  CLI::App* verify = app.add_subcommand("verify", "run the property suites");
  verify->add_option("--scope", scope, "suite name or all")->capture_default_str();
  verify->add_option("--samples", samples, "override per-suite sample counts");
  verify->add_option("--rng-seed", rng_seed, "sampling seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed()) {
      return cmd_solve(problem, dims_text, big_n, seed_text, solver_text, tol, max_iters,
                       workers, out_path, format_text, extended);
    }
    if (atlas->parsed()) {
      return cmd_atlas(atlas_n, starts, big_n, rng_seed, atlas_out);
    }
    if (verify->parsed()) {
      return cmd_verify(scope, samples, rng_seed);
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
