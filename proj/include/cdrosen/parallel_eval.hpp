#pragma once

#include <cstdint>

#include "cdrosen/core_model.hpp"

namespace cdrosen {

// Round-robin assignment of the n-1 summation terms to workers: worker w owns
// term indices w, w + n_workers, w + 2*n_workers, ... Worker partials are
// reduced in worker order by a single thread, so a fixed plan gives
// bit-reproducible results regardless of how the workers are scheduled.
struct ChunkPlan {
  int n_workers;
  std::int64_t term_count;

  ChunkPlan(int workers, std::int64_t terms);
  static ChunkPlan for_problem(const ProblemConfig& cfg, int workers);
};

// Strided partial sums of the primal terms, evaluated by OpenMP workers and
// folded in worker order. Matches the serial objective to reduction-order
// rounding; with one worker the result is bit-identical to the serial path.
double parallel_primal(const ProblemConfig& cfg, const Vec& x, const ChunkPlan& plan);

// Same scheme over the dual bracket terms, then (n-1) - total.
// Throws PoleError if any term denominator vanishes.
double parallel_dual(const ProblemConfig& cfg, const Vec& sigma, const ChunkPlan& plan);

}  // namespace cdrosen
