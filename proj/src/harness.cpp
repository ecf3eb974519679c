#include "cdrosen/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cdrosen/parallel_eval.hpp"

namespace cdrosen {

namespace {

double inf_norm_distance(const Vec& v, double target) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x - target));
  return m;
}

std::string sig10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%#.10g", v);
  return buf;
}

ProblemKind problem_from_string(const std::string& s) {
  if (s == "primal") return ProblemKind::Primal;
  if (s == "dual") return ProblemKind::Dual;
  if (s == "both") return ProblemKind::Both;
  throw std::invalid_argument("unknown problem kind: " + s);
}

SeedKind seed_from_string(const std::string& s) {
  if (s == "seed1") return SeedKind::Seed1;
  if (s == "seed2") return SeedKind::Seed2;
  if (s == "custom") return SeedKind::Custom;
  throw std::invalid_argument("unknown seed kind: " + s);
}

SolverKind solver_from_string(const std::string& s) {
  if (s == "pattern") return SolverKind::PatternSearch;
  if (s == "gradient") return SolverKind::GradientDescent;
  throw std::invalid_argument("unknown solver kind: " + s);
}

ResultRow solve_one(const ExperimentSpec& spec, int n, ProblemKind side) {
  const ProblemConfig cfg(n, spec.big_n);
  ResultRow row;
  row.dimension = n;
  row.problem = side;
  row.seed = spec.seed_kind;
  row.solver = spec.solver;

  SolverConfig solver_cfg = spec.solver_cfg;
  const bool parallel = spec.parallel_workers > 1;

  if (side == ProblemKind::Primal) {
    solver_cfg.initial_step = 1.0;
    if (spec.seed_kind == SeedKind::Seed2) {
      solver_cfg.box_lower = -500.0;
      solver_cfg.box_upper = 500.0;
    }
    const Vec x0 = primal_seed(spec.seed_kind, spec.custom_pattern, n);

    Objective objective;
    if (parallel) {
      const ChunkPlan plan = ChunkPlan::for_problem(cfg, spec.parallel_workers);
      objective = [cfg, plan](const Vec& x) { return parallel_primal(cfg, x, plan); };
    } else {
      objective = [cfg](const Vec& x) { return primal_objective(cfg, x); };
    }

    SolverReport report;
    if (spec.solver == SolverKind::PatternSearch) {
      report = derivative_free_minimize(objective, x0, solver_cfg);
    } else {
      GradientFn gradient = [cfg](const Vec& x) { return primal_gradient(cfg, x); };
      report = gradient_minimize(objective, gradient, x0, solver_cfg);
    }
    row.iterations = report.iterations;
    row.function_calls = report.function_calls;
    row.objective_value = report.final_value;
    row.solution_error = inf_norm_distance(report.final_point, 1.0);
    row.wall_time_ms = report.wall_time_ms;
    row.termination = report.termination;
  } else {
    solver_cfg.initial_step = 0.1;
    const Vec sigma0 = dual_seed(spec.seed_kind, spec.custom_pattern, n);
    const DualMethod method = spec.solver == SolverKind::PatternSearch
                                  ? DualMethod::PatternSearch
                                  : DualMethod::GradientAscent;

    DualEvaluator eval;
    if (parallel) {
      const ChunkPlan plan = ChunkPlan::for_problem(cfg, spec.parallel_workers);
      eval = [cfg, plan](const Vec& sigma) { return parallel_dual(cfg, sigma, plan); };
    }

    const SolverReport report = solve_dual(cfg, sigma0, solver_cfg, method, eval);
    row.iterations = report.iterations;
    row.function_calls = report.function_calls;
    row.objective_value = report.final_value;
    row.solution_error = inf_norm_distance(report.final_point, 0.0);
    row.gap = duality_gap(cfg, report.final_point).gap;
    row.wall_time_ms = report.wall_time_ms;
    row.termination = report.termination;
  }
  return row;
}

// Solver failures for one dimension become a marker row instead of aborting
// the rest of the sweep.
ResultRow solve_one_guarded(const ExperimentSpec& spec, int n, ProblemKind side) {
  try {
    return solve_one(spec, n, side);
  } catch (const PoleError&) {
  } catch (const NoConvergenceError&) {
  } catch (const std::invalid_argument&) {
  }
  ResultRow row;
  row.dimension = n;
  row.problem = side;
  row.seed = spec.seed_kind;
  row.solver = spec.solver;
  row.objective_value = std::numeric_limits<double>::quiet_NaN();
  row.solution_error = std::numeric_limits<double>::quiet_NaN();
  row.termination = Termination::PoleStall;
  return row;
}

}  // namespace

const char* to_string(ProblemKind p) {
  switch (p) {
    case ProblemKind::Primal: return "primal";
    case ProblemKind::Dual: return "dual";
    case ProblemKind::Both: return "both";
  }
  return "unknown";
}

const char* to_string(SeedKind s) {
  switch (s) {
    case SeedKind::Seed1: return "seed1";
    case SeedKind::Seed2: return "seed2";
    case SeedKind::Custom: return "custom";
  }
  return "unknown";
}

const char* to_string(SolverKind s) {
  return s == SolverKind::PatternSearch ? "pattern" : "gradient";
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    const auto dots = token.find("..");
    try {
      if (dots == std::string::npos) {
        dims.push_back(std::stoi(token));
      } else {
        const int lo = std::stoi(token.substr(0, dots));
        const int hi = std::stoi(token.substr(dots + 2));
        if (hi < lo) throw std::invalid_argument("empty range");
        for (int d = lo; d <= hi; ++d) dims.push_back(d);
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse dimension token '" + token + "'");
    }
  }
  if (dims.empty()) throw std::invalid_argument("no dimensions given");
  return dims;
}

Vec expand_seed_pattern(const std::string& pattern, std::size_t length) {
  std::vector<std::pair<double, bool>> entries;  // value, fill-flag
  std::stringstream stream(pattern);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) throw std::invalid_argument("empty entry in seed pattern");
    bool fill = false;
    if (token.back() == '*') {
      fill = true;
      token.pop_back();
    }
    try {
      entries.emplace_back(std::stod(token), fill);
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse seed pattern entry '" + token + "'");
    }
  }
  if (entries.empty()) throw std::invalid_argument("empty seed pattern");

  Vec out;
  out.reserve(length);
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const auto [value, fill] = entries[e];
    if (fill) {
      if (e + 1 != entries.size()) {
        throw std::invalid_argument("fill entry must be last in a seed pattern");
      }
      while (out.size() < length) out.push_back(value);
    } else {
      out.push_back(value);
    }
  }
  if (out.size() != length) {
    throw std::invalid_argument("seed pattern yields " + std::to_string(out.size()) +
                                " values, need " + std::to_string(length));
  }
  return out;
}

Vec primal_seed(SeedKind kind, const std::string& pattern, int n) {
  const auto size = static_cast<std::size_t>(n);
  switch (kind) {
    case SeedKind::Seed1: return Vec(size, 3.0);
    case SeedKind::Seed2: return Vec(size, 100.0);
    case SeedKind::Custom: return expand_seed_pattern(pattern, size);
  }
  throw std::invalid_argument("bad seed kind");
}

Vec dual_seed(SeedKind kind, const std::string& pattern, int n) {
  const auto size = static_cast<std::size_t>(n) - 1;
  Vec sigma;
  switch (kind) {
    case SeedKind::Seed1: sigma = Vec(size, -2.0 / 3.0); break;
    case SeedKind::Seed2: sigma = Vec(size, 100.0); break;
    case SeedKind::Custom: sigma = expand_seed_pattern(pattern, size); break;
  }
  sigma.back() = 0.0;  // structurally pinned
  return sigma;
}

std::vector<int> default_dimension_sweep(bool extended) {
  std::vector<int> dims;
  for (int d = 2; d <= 10; ++d) dims.push_back(d);
  for (int d = 20; d <= 100; d += 10) dims.push_back(d);
  for (int d = 200; d <= 1000; d += 100) dims.push_back(d);
  if (extended) {
    for (int d = 2000; d <= 4000; d += 1000) dims.push_back(d);
  }
  return dims;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  spec.solver_cfg.validate();
  if (spec.parallel_workers < 1) {
    throw std::invalid_argument("run_experiment: parallel_workers must be >= 1");
  }
  std::vector<int> dims = spec.dims;
  std::sort(dims.begin(), dims.end());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
  if (dims.empty()) throw std::invalid_argument("run_experiment: no dimensions");

  std::vector<ResultRow> rows;
  for (int n : dims) {
    if (spec.problem == ProblemKind::Primal || spec.problem == ProblemKind::Both) {
      rows.push_back(solve_one_guarded(spec, n, ProblemKind::Primal));
    }
    if (spec.problem == ProblemKind::Dual || spec.problem == ProblemKind::Both) {
      rows.push_back(solve_one_guarded(spec, n, ProblemKind::Dual));
    }
  }
  return rows;
}

std::string format_results_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "dimension,problem,seed,solver,iterations,function_calls,objective_value,"
      "solution_error,gap,wall_time_ms\n";
  for (const ResultRow& row : rows) {
    out += std::to_string(row.dimension);
    out += ',';
    out += to_string(row.problem);
    out += ',';
    out += to_string(row.seed);
    out += ',';
    out += to_string(row.solver);
    out += ',';
    out += std::to_string(row.iterations);
    out += ',';
    out += std::to_string(row.function_calls);
    out += ',';
    out += sig10(row.objective_value);
    out += ',';
    out += sig10(row.solution_error);
    out += ',';
    if (row.gap) out += sig10(*row.gap);
    out += ',';
    out += sig10(row.wall_time_ms);
    out += '\n';
  }
  return out;
}

std::string format_results_json(const std::vector<ResultRow>& rows) {
  nlohmann::json array = nlohmann::json::array();
  for (const ResultRow& row : rows) {
    nlohmann::json item;
    item["dimension"] = row.dimension;
    item["problem"] = to_string(row.problem);
    item["seed"] = to_string(row.seed);
    item["solver"] = to_string(row.solver);
    item["iterations"] = row.iterations;
    item["function_calls"] = row.function_calls;
    item["objective_value"] = row.objective_value;
    item["solution_error"] = row.solution_error;
    if (row.gap) {
      item["gap"] = *row.gap;
    } else {
      item["gap"] = nullptr;
    }
    item["wall_time_ms"] = row.wall_time_ms;
    array.push_back(std::move(item));
  }
  return array.dump(2) + "\n";
}

void write_results(const std::vector<ResultRow>& rows, const std::string& path,
                   OutputFormat format) {
  const std::string payload =
      format == OutputFormat::Csv ? format_results_csv(rows) : format_results_json(rows);
  const std::filesystem::path target(path);
  const std::filesystem::path temp = target.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + temp.string() + "' for writing");
    out << payload;
    if (!out) throw std::runtime_error("failed while writing '" + temp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) {
    throw std::runtime_error("cannot move results into place at '" + target.string() +
                             "': " + ec.message());
  }
}

std::vector<ResultRow> read_results_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  nlohmann::json array = nlohmann::json::parse(in);
  std::vector<ResultRow> rows;
  for (const auto& item : array) {
    ResultRow row;
    row.dimension = item.at("dimension").get<int>();
    row.problem = problem_from_string(item.at("problem").get<std::string>());
    row.seed = seed_from_string(item.at("seed").get<std::string>());
    row.solver = solver_from_string(item.at("solver").get<std::string>());
    row.iterations = item.at("iterations").get<long long>();
    row.function_calls = item.at("function_calls").get<long long>();
    // Non-finite values serialize as JSON null.
    const auto number_or_nan = [](const nlohmann::json& v) {
      return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    };
    row.objective_value = number_or_nan(item.at("objective_value"));
    row.solution_error = number_or_nan(item.at("solution_error"));
    if (!item.at("gap").is_null()) row.gap = item.at("gap").get<double>();
    row.wall_time_ms = item.at("wall_time_ms").get<double>();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cdrosen
