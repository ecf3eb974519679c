#pragma once

#include <functional>
#include <optional>

#include "cdrosen/core_model.hpp"

namespace cdrosen {

using Objective = std::function<double(const Vec&)>;
using GradientFn = std::function<Vec(const Vec&)>;

enum class Termination {
  StepTolerance,      // mesh size fell below step_tolerance
  GradientTolerance,  // gradient infinity norm fell below gradient_tolerance
  IterationBudget,    // max_iterations reached
  CallBudget,         // max_function_calls reached
  PoleStall,          // the starting point itself scored +infinity
  Diverged,           // NaN or -infinity encountered at an accepted point
  LineSearchStall,    // no acceptable step above the line search floor
};

const char* to_string(Termination t);

struct SolverConfig {
  long long max_iterations = 1'000'000;
  long long max_function_calls = 10'000'000;
  double step_tolerance = 1e-9;
  double gradient_tolerance = 1e-8;
  double initial_step = 1.0;
  // Optional per-coordinate box applied uniformly; trial points are clamped.
  std::optional<double> box_lower;
  std::optional<double> box_upper;

  static SolverConfig primal_defaults() { return SolverConfig{}; }
  static SolverConfig dual_defaults() {
    SolverConfig cfg;
    cfg.initial_step = 0.1;  // the dual optimum sits near the usual starts
    return cfg;
  }
  void validate() const;
};

struct SolverReport {
  long long iterations = 0;
  long long function_calls = 0;
  double final_value = 0.0;
  Vec final_point;
  Termination termination = Termination::StepTolerance;
  double wall_time_ms = 0.0;
};

// Derivative-free coordinate pattern search. Each iteration sweeps the
// coordinate directions in fixed index order (+h before -h) and accepts the
// first improving trial per coordinate; a sweep without any improvement
// halves the step. Trials scoring +infinity or NaN are rejected, which is how
// infeasible points are kept out. Deterministic for fixed inputs.
SolverReport derivative_free_minimize(const Objective& objective, const Vec& x0,
                                      const SolverConfig& cfg);

// Steepest descent with Armijo backtracking (sufficient decrease 1e-4,
// backtrack factor 0.5). Gradient evaluations are not counted as function
// calls. Monotone in the objective.
SolverReport gradient_minimize(const Objective& objective, const GradientFn& gradient,
                               const Vec& x0, const SolverConfig& cfg);

enum class DualMethod { PatternSearch, GradientAscent };

// Evaluates P^d at a full dual vector; must throw PoleError at poles.
// Used to route evaluation through the chunked parallel path.
using DualEvaluator = std::function<double(const Vec&)>;

// Maximizes P^d over the free components sigma_0 .. sigma_{n-3} with the
// trailing component pinned to zero. Feasibility sigma_i + 1 > margin is
// maintained by step rejection. The report's final_value is P^d (maximization
// sign restored) and final_point the full dual vector. For n = 2 there are no
// free variables and the solve is closed form with zero iterations.
SolverReport solve_dual(const ProblemConfig& cfg, const Vec& sigma0,
                        const SolverConfig& solver_cfg, DualMethod method,
                        const DualEvaluator& dual_eval = {});

}  // namespace cdrosen
