#include "cdrosen/parallel_eval.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace cdrosen {

ChunkPlan::ChunkPlan(int workers, std::int64_t terms) : n_workers(workers), term_count(terms) {
  if (workers < 1) throw std::invalid_argument("ChunkPlan: need at least one worker");
  if (terms < 1) throw std::invalid_argument("ChunkPlan: no summation terms (n - 1 <= 0)");
}

ChunkPlan ChunkPlan::for_problem(const ProblemConfig& cfg, int workers) {
  return ChunkPlan(workers, static_cast<std::int64_t>(cfg.n) - 1);
}

namespace {

void check_plan(const ProblemConfig& cfg, const ChunkPlan& plan) {
  if (plan.term_count != static_cast<std::int64_t>(cfg.n) - 1) {
    throw std::invalid_argument("ChunkPlan does not match the problem dimension");
  }
}

}  // namespace

double parallel_primal(const ProblemConfig& cfg, const Vec& x, const ChunkPlan& plan) {
  check_plan(cfg, plan);
  if (x.size() != static_cast<std::size_t>(cfg.n)) {
    throw std::invalid_argument("parallel_primal: x has wrong length");
  }
  const int workers = plan.n_workers;
  const std::size_t terms = static_cast<std::size_t>(plan.term_count);
  std::vector<double> partial(static_cast<std::size_t>(workers), 0.0);

#pragma omp parallel for schedule(static)
  for (int w = 0; w < workers; ++w) {
    double sum = 0.0;
    for (std::size_t i = static_cast<std::size_t>(w); i < terms;
         i += static_cast<std::size_t>(workers)) {
      sum += primal_term(cfg, x, i);
    }
    partial[static_cast<std::size_t>(w)] = sum;
  }

  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double parallel_dual(const ProblemConfig& cfg, const Vec& sigma, const ChunkPlan& plan) {
  check_plan(cfg, plan);
  if (sigma.size() != cfg.dual_size()) {
    throw std::invalid_argument("parallel_dual: sigma has wrong length");
  }
  // Poles are screened up front so no exception can escape a worker thread.
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (std::fabs(sigma[i] + 1.0) < kPoleTolerance) throw PoleError(i);
  }
  const int workers = plan.n_workers;
  const std::size_t terms = static_cast<std::size_t>(plan.term_count);
  std::vector<double> partial(static_cast<std::size_t>(workers), 0.0);

#pragma omp parallel for schedule(static)
  for (int w = 0; w < workers; ++w) {
    double sum = 0.0;
    for (std::size_t i = static_cast<std::size_t>(w); i < terms;
         i += static_cast<std::size_t>(workers)) {
      sum += dual_term(cfg, sigma, i);
    }
    partial[static_cast<std::size_t>(w)] = sum;
  }

  double total = 0.0;
  for (double p : partial) total += p;
  return static_cast<double>(cfg.n - 1) - total;
}

}  // namespace cdrosen
