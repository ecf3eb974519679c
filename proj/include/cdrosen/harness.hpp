#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cdrosen/core_model.hpp"
#include "cdrosen/solvers.hpp"

namespace cdrosen {

enum class ProblemKind { Primal, Dual, Both };
enum class SeedKind { Seed1, Seed2, Custom };
enum class SolverKind { PatternSearch, GradientDescent };
enum class OutputFormat { Csv, Json };

const char* to_string(ProblemKind p);
const char* to_string(SeedKind s);
const char* to_string(SolverKind s);

struct ExperimentSpec {
  std::vector<int> dims;
  double big_n = 100.0;
  ProblemKind problem = ProblemKind::Both;
  SeedKind seed_kind = SeedKind::Seed1;
  std::string custom_pattern;  // used when seed_kind == Custom
  SolverKind solver = SolverKind::PatternSearch;
  SolverConfig solver_cfg;     // initial_step is set per problem side
  int parallel_workers = 1;
  std::string output_path;
  OutputFormat format = OutputFormat::Csv;
};

struct ResultRow {
  int dimension = 0;
  ProblemKind problem = ProblemKind::Primal;
  SeedKind seed = SeedKind::Seed1;
  SolverKind solver = SolverKind::PatternSearch;
  long long iterations = 0;
  long long function_calls = 0;
  double objective_value = 0.0;
  // Infinity-norm distance to the known global solution: the all-ones vector
  // for primal rows, the zero vector for dual rows.
  double solution_error = 0.0;
  std::optional<double> gap;  // dual rows only
  double wall_time_ms = 0.0;
  // Diagnostic only; not part of the serialized row.
  Termination termination = Termination::StepTolerance;
};

// "2..10,20,50" -> {2,...,10,20,50}
std::vector<int> parse_dims(const std::string& text);

// Compact start patterns: comma-separated values where a trailing '*' on the
// last entry repeats it to fill the remaining length, e.g. "-1.0005,1.0005*".
Vec expand_seed_pattern(const std::string& pattern, std::size_t length);

// Standard starts. seed1: (3,...,3) primal, (-2/3,...,-2/3,0) dual.
// seed2: (100,...,100) primal with box [-500, 500], (100,...,100,0) dual.
Vec primal_seed(SeedKind kind, const std::string& pattern, int n);
Vec dual_seed(SeedKind kind, const std::string& pattern, int n);

// {2..10, 20, 30, ..., 100, 200, ..., 1000}; extended appends {2000, 3000, 4000}.
std::vector<int> default_dimension_sweep(bool extended);

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

// Writes atomically (temporary file, then rename). CSV values carry 10
// significant digits; JSON is an array of row objects with the same keys.
void write_results(const std::vector<ResultRow>& rows, const std::string& path,
                   OutputFormat format);
std::string format_results_csv(const std::vector<ResultRow>& rows);
std::string format_results_json(const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_json(const std::string& path);

}  // namespace cdrosen
