#include "cdrosen/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace cdrosen {

namespace {

constexpr double kArmijoDecrease = 1e-4;
constexpr double kBacktrackFactor = 0.5;
constexpr double kLineSearchFloor = 1e-16;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool rejected(double v) {
  // +infinity and NaN mark infeasible trials; -infinity is real divergence.
  return std::isnan(v) || v == std::numeric_limits<double>::infinity();
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::StepTolerance: return "step_tolerance";
    case Termination::GradientTolerance: return "gradient_tolerance";
    case Termination::IterationBudget: return "iteration_budget";
    case Termination::CallBudget: return "call_budget";
    case Termination::PoleStall: return "pole_stall";
    case Termination::Diverged: return "diverged";
    case Termination::LineSearchStall: return "line_search_stall";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (max_iterations <= 0 || max_function_calls <= 0) {
    throw std::invalid_argument("SolverConfig: budgets must be positive");
  }
  if (!(step_tolerance > 0.0) || !(gradient_tolerance > 0.0) || !(initial_step > 0.0)) {
    throw std::invalid_argument("SolverConfig: tolerances and initial step must be positive");
  }
  if (box_lower && box_upper && !(*box_lower < *box_upper)) {
    throw std::invalid_argument("SolverConfig: box_lower must be below box_upper");
  }
}

SolverReport derivative_free_minimize(const Objective& objective, const Vec& x0,
                                      const SolverConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();

  SolverReport report;
  report.final_point = x0;
  Vec& x = report.final_point;

  double fx = objective(x);
  report.function_calls = 1;
  if (std::isnan(fx) || fx == -std::numeric_limits<double>::infinity()) {
    report.final_value = fx;
    report.termination = Termination::Diverged;
    report.wall_time_ms = elapsed_ms(start);
    return report;
  }
  if (fx == std::numeric_limits<double>::infinity()) {
    report.final_value = fx;
    report.termination = Termination::PoleStall;
    report.wall_time_ms = elapsed_ms(start);
    return report;
  }
  if (x.empty()) {
    report.final_value = fx;
    report.wall_time_ms = elapsed_ms(start);
    return report;
  }

  double h = cfg.initial_step;
  Vec trial = x;
  Termination term = Termination::StepTolerance;

  while (true) {
    if (h < cfg.step_tolerance) {
      term = Termination::StepTolerance;
      break;
    }
    if (report.iterations >= cfg.max_iterations) {
      term = Termination::IterationBudget;
      break;
    }
    if (report.function_calls >= cfg.max_function_calls) {
      term = Termination::CallBudget;
      break;
    }

    ++report.iterations;
    bool improved = false;
    bool out_of_budget = false;
    for (std::size_t k = 0; k < x.size() && !out_of_budget; ++k) {
      for (double step : {h, -h}) {
        double candidate = x[k] + step;
        if (cfg.box_lower) candidate = std::max(candidate, *cfg.box_lower);
        if (cfg.box_upper) candidate = std::min(candidate, *cfg.box_upper);
        if (candidate == x[k]) continue;  // clamped onto the current point
        trial = x;
        trial[k] = candidate;
        const double ft = objective(trial);
        ++report.function_calls;
        if (ft == -std::numeric_limits<double>::infinity()) {
          report.final_value = ft;
          report.final_point = trial;
          report.termination = Termination::Diverged;
          report.wall_time_ms = elapsed_ms(start);
          return report;
        }
        if (!rejected(ft) && ft < fx) {
          x[k] = candidate;
          fx = ft;
          improved = true;
          break;
        }
        if (report.function_calls >= cfg.max_function_calls) {
          out_of_budget = true;
          break;
        }
      }
    }
    if (!improved) h *= 0.5;
  }

  report.final_value = fx;
  report.termination = term;
  report.wall_time_ms = elapsed_ms(start);
  return report;
}

SolverReport gradient_minimize(const Objective& objective, const GradientFn& gradient,
                               const Vec& x0, const SolverConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();

  SolverReport report;
  report.final_point = x0;
  Vec& x = report.final_point;

  double fx = objective(x);
  report.function_calls = 1;
  if (std::isnan(fx) || fx == -std::numeric_limits<double>::infinity()) {
    report.final_value = fx;
    report.termination = Termination::Diverged;
    report.wall_time_ms = elapsed_ms(start);
    return report;
  }
  if (fx == std::numeric_limits<double>::infinity()) {
    report.final_value = fx;
    report.termination = Termination::PoleStall;
    report.wall_time_ms = elapsed_ms(start);
    return report;
  }

  Vec trial(x.size());
  Termination term = Termination::GradientTolerance;

  while (true) {
    if (report.iterations >= cfg.max_iterations) {
      term = Termination::IterationBudget;
      break;
    }
    if (report.function_calls >= cfg.max_function_calls) {
      term = Termination::CallBudget;
      break;
    }

    const Vec g = gradient(x);
    double gnorm = 0.0;
    double gsq = 0.0;
    for (double v : g) {
      gnorm = std::max(gnorm, std::fabs(v));
      gsq += v * v;
    }
    if (gnorm <= cfg.gradient_tolerance) {
      term = Termination::GradientTolerance;
      break;
    }

    // Armijo backtracking along -g.
    double t = cfg.initial_step;
    bool accepted = false;
    while (t >= kLineSearchFloor) {
      bool clamped_to_x = true;
      for (std::size_t k = 0; k < x.size(); ++k) {
        double candidate = x[k] - t * g[k];
        if (cfg.box_lower) candidate = std::max(candidate, *cfg.box_lower);
        if (cfg.box_upper) candidate = std::min(candidate, *cfg.box_upper);
        trial[k] = candidate;
        if (candidate != x[k]) clamped_to_x = false;
      }
      if (clamped_to_x) {
        t *= kBacktrackFactor;
        continue;
      }
      const double ft = objective(trial);
      ++report.function_calls;
      if (ft == -std::numeric_limits<double>::infinity()) {
        report.final_value = ft;
        report.final_point = trial;
        report.termination = Termination::Diverged;
        report.wall_time_ms = elapsed_ms(start);
        return report;
      }
      if (!rejected(ft) && ft <= fx - kArmijoDecrease * t * gsq) {
        double displacement = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
          displacement = std::max(displacement, std::fabs(trial[k] - x[k]));
        }
        x = trial;
        fx = ft;
        accepted = true;
        // Steps below the resolution floor only rearrange rounding noise.
        if (displacement <= cfg.step_tolerance) {
          ++report.iterations;
          report.final_value = fx;
          report.termination = Termination::StepTolerance;
          report.wall_time_ms = elapsed_ms(start);
          return report;
        }
        break;
      }
      if (report.function_calls >= cfg.max_function_calls) break;
      t *= kBacktrackFactor;
    }
    if (!accepted) {
      term = report.function_calls >= cfg.max_function_calls ? Termination::CallBudget
                                                             : Termination::LineSearchStall;
      break;
    }
    ++report.iterations;
  }

  report.final_value = fx;
  report.termination = term;
  report.wall_time_ms = elapsed_ms(start);
  return report;
}

SolverReport solve_dual(const ProblemConfig& cfg, const Vec& sigma0,
                        const SolverConfig& solver_cfg, DualMethod method,
                        const DualEvaluator& dual_eval) {
  if (!in_dual_feasible(cfg, sigma0)) {
    throw std::invalid_argument("solve_dual: starting point is not dual feasible");
  }

  const auto start = Clock::now();
  if (cfg.n == 2) {
    // No free variables: the pinned vector (0) is the whole feasible set and
    // P^d(0) = 0 in closed form.
    SolverReport report;
    report.final_point = Vec{0.0};
    report.final_value = 0.0;
    report.termination = Termination::StepTolerance;
    report.wall_time_ms = elapsed_ms(start);
    return report;
  }

  const DualEvaluator eval =
      dual_eval ? dual_eval : [&cfg](const Vec& sigma) { return dual_objective(cfg, sigma); };

  const std::size_t free_count = cfg.free_dual_size();
  auto embed = [free_count](const Vec& free) {
    Vec sigma(free.size() + 1);
    std::copy(free.begin(), free.end(), sigma.begin());
    sigma[free_count] = 0.0;
    return sigma;
  };

  // Minimization objective: -P^d with infeasible trials scored +infinity.
  Objective negated = [&](const Vec& free) {
    for (double s : free) {
      if (!(s + 1.0 > kFeasibilityMargin)) return std::numeric_limits<double>::infinity();
    }
    try {
      return -eval(embed(free));
    } catch (const PoleError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  Vec free0(sigma0.begin(), sigma0.begin() + static_cast<std::ptrdiff_t>(free_count));
  SolverReport inner;
  if (method == DualMethod::PatternSearch) {
    inner = derivative_free_minimize(negated, free0, solver_cfg);
  } else {
    GradientFn grad = [&](const Vec& free) {
      Vec g = dual_gradient(cfg, embed(free));
      for (double& v : g) v = -v;
      return g;
    };
    inner = gradient_minimize(negated, grad, free0, solver_cfg);
  }

  inner.final_value = -inner.final_value;
  inner.final_point = embed(inner.final_point);
  inner.wall_time_ms = elapsed_ms(start);
  return inner;
}

}  // namespace cdrosen
