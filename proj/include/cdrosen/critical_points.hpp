#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdrosen/core_model.hpp"

namespace cdrosen {

enum class Region { SPlus, Mixed };
enum class PrimalClass { LocalMin, LocalMax, Saddle, Degenerate };

const char* to_string(Region r);
const char* to_string(PrimalClass c);

// A matched dual/primal critical pair with its equality-chain values.
struct CriticalPair {
  Vec sigma;           // full dual vector, trailing component 0
  Vec x;               // recover_primal(sigma)
  double primal_value;
  double dual_value;
  double gap;          // primal_value - dual_value
  Region region;
  PrimalClass primal_class;
};

// Residual of the dual stationarity system, component i:
//   sigma_i - alpha * (x_i^2 - x_{i+1})  with x = recover_primal(sigma).
// The trailing component is identically zero by construction. Equals
// -alpha times the dual gradient on the free components.
Vec stationarity_residual(const ProblemConfig& cfg, const Vec& sigma);

// Damped Newton on the stationarity system over the free dual variables:
// full steps halved up to 30 times until the residual norm decreases, with
// pole-crossing candidates rejected. Throws NoConvergenceError if the
// residual does not reach tol within the iteration budget.
CriticalPair find_critical_point(const ProblemConfig& cfg, const Vec& sigma0,
                                 double tol = 1e-12);

// Residual target used by the multistart atlas. Critical points whose
// recovery denominators are small bottom out near 1e-11 in double precision,
// so the atlas does not insist on the tighter single-start default.
inline constexpr double kAtlasResidualTol = 1e-10;

struct Atlas {
  std::vector<CriticalPair> pairs;  // sorted by primal value, then sigma
  int failed_starts = 0;
};

// Multistart enumeration: structured starts (the zero vector, the
// first-component -2 perturbation, and the sign-flipped local minimizer
// polished in primal space and mapped through dual_map of the canonical
// measure) plus n_starts pseudo-random feasible starts with free components
// uniform in (-0.99, 3]. Duplicates within 1e-6 infinity distance are
// merged. Starts run in parallel; the merge is deterministic.
// Desk scale only: requires n <= 12.
Atlas enumerate_critical_points(const ProblemConfig& cfg, int n_starts, std::uint64_t seed);

struct SMinusEmptinessProof {
  bool empty;
  std::string witness;
};

// The all-negative shifted-sign region cannot intersect the dual feasible
// set: feasibility pins the trailing component to zero.
SMinusEmptinessProof check_s_minus_empty(const ProblemConfig& cfg);

// Classification by the spectrum of the tridiagonal primal Hessian.
// Eigenvalues within 1e-8 of zero make the point Degenerate unless clearly
// mixed signs are present.
PrimalClass classify_primal_point(const ProblemConfig& cfg, const Vec& x);
Vec primal_hessian_eigenvalues(const ProblemConfig& cfg, const Vec& x);

}  // namespace cdrosen
