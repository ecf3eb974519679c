#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cdrosen {

using Vec = std::vector<double>;

// |sigma_i + 1| below this counts as a pole of the dual objective.
inline constexpr double kPoleTolerance = 1e-12;

// |sigma_{n-1}| must stay below this for membership in the dual feasible set.
inline constexpr double kPinTolerance = 1e-12;

// Solvers keep iterates at sigma_i + 1 > margin; also the default margin of
// the penalized dual objective.
inline constexpr double kFeasibilityMargin = 1e-8;

// Thrown when a dual evaluation divides by sigma_i + 1 with |sigma_i + 1|
// below kPoleTolerance.
class PoleError : public std::domain_error {
 public:
  explicit PoleError(std::size_t index)
      : std::domain_error("dual objective pole: sigma[" + std::to_string(index) +
                          "] + 1 vanishes"),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// Thrown when an iterative routine exhausts its budget without reaching
// its tolerance.
class NoConvergenceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Problem family: n-dimensional Rosenbrock-type objective with coupling
// weight alpha/2 where alpha = 2N. Every formula in this library is
// parameterized by this config.
struct ProblemConfig {
  int n;         // dimension, n >= 2
  double big_n;  // N > 0
  double alpha;  // always exactly 2 * big_n

  explicit ProblemConfig(int n_, double big_n_ = 100.0);

  std::size_t dual_size() const { return static_cast<std::size_t>(n) - 1; }
  // Free dual variables; the trailing one is structurally pinned to zero.
  std::size_t free_dual_size() const { return static_cast<std::size_t>(n) - 2; }
};

// Values of the complementary-dual equality chain at a recovered pair.
struct GapReport {
  double primal_value;  // P(x_bar)
  double dual_value;    // P^d(sigma)
  double xi_value;      // Xi(x_bar, sigma)
  double gap;           // primal_value - dual_value
};

// Summand i (0-based, i < n-1) of the primal objective:
//   (x_i - 1)^2 + (alpha/2) (x_{i+1} - x_i^2)^2
double primal_term(const ProblemConfig& cfg, const Vec& x, std::size_t i);

// Summand i of the dual objective's bracket:
//   (sigma_{i-1} + 2)^2 / (4 (sigma_i + 1)) + sigma_i^2 / (2 alpha)
// with sigma_{-1} taken as 0. Throws PoleError when the denominator vanishes.
double dual_term(const ProblemConfig& cfg, const Vec& sigma, std::size_t i);

// P(x) = sum of primal_term over i = 0 .. n-2. Nonnegative.
double primal_objective(const ProblemConfig& cfg, const Vec& x);

// Closed-form gradient of the primal objective.
Vec primal_gradient(const ProblemConfig& cfg, const Vec& x);

// xi_i = x_i^2 - x_{i+1}, the nonlinear measure that makes the coupling
// term a convex quadratic.
Vec canonical_measure(const ProblemConfig& cfg, const Vec& x);

// V(xi) = sum (alpha/2) xi_j^2, convex.
double canonical_value(const ProblemConfig& cfg, const Vec& xi);

// sigma = grad V(xi) = alpha * xi.
Vec dual_map(const ProblemConfig& cfg, const Vec& xi);

// Legendre conjugate V*(sigma) = sum sigma_j^2 / (2 alpha).
double conjugate_value(const ProblemConfig& cfg, const Vec& sigma);

// Xi(x, sigma) = sum [ (x_i - 1)^2 + sigma_i (x_i^2 - x_{i+1}) - sigma_i^2/(2 alpha) ].
double total_complementary(const ProblemConfig& cfg, const Vec& x, const Vec& sigma);

// P^d(sigma) = (n-1) - sum dual_term. Throws PoleError at poles.
double dual_objective(const ProblemConfig& cfg, const Vec& sigma);

// Gradient of P^d over the free components sigma_0 .. sigma_{n-3}; the
// trailing component must already be pinned to zero. Length n-2.
Vec dual_gradient(const ProblemConfig& cfg, const Vec& sigma);

// Analytic recovery x_i = (sigma_{i-1} + 2) / (2 (sigma_i + 1)), x_n = x_{n-1}^2.
// At a dual critical point the result is a critical point of the primal with
// equal objective value.
Vec recover_primal(const ProblemConfig& cfg, const Vec& sigma);

// Recovers the primal point and evaluates the whole equality chain.
GapReport duality_gap(const ProblemConfig& cfg, const Vec& sigma);

// Membership tests. in_dual_feasible checks no pole among the leading n-2
// components and the trailing component pinned to zero. in_s_plus / in_s_minus
// are the all-positive / all-negative shifted-sign tests over the full vector;
// in_s_minus can never hold together with in_dual_feasible.
bool in_dual_feasible(const ProblemConfig& cfg, const Vec& sigma);
bool in_s_plus(const ProblemConfig& cfg, const Vec& sigma);
bool in_s_minus(const ProblemConfig& cfg, const Vec& sigma);

// Minimization form of the dual with the feasibility constraints folded in:
//   -P^d(sigma) + weight * ( sum max(0, -(sigma_i + 1 - margin))^2 + sigma_{n-1}^2 ).
// All n-1 components are free here. Returns +infinity at exact poles instead
// of throwing, so budget-driven solvers can treat such trials as rejected.
double penalized_dual_objective(const ProblemConfig& cfg, const Vec& sigma_full,
                                double penalty_weight,
                                double margin = kFeasibilityMargin);

}  // namespace cdrosen
