#include "cdrosen/critical_points.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/Dense>

#include "cdrosen/rng.hpp"

namespace cdrosen {

namespace {

constexpr double kEigenvalueThreshold = 1e-8;
constexpr double kDedupTolerance = 1e-6;
constexpr int kNewtonBudget = 100;
constexpr int kDampingHalvings = 30;

double inf_norm(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

Vec embed_free(const Vec& free) {
  Vec sigma(free.size() + 1);
  std::copy(free.begin(), free.end(), sigma.begin());
  sigma.back() = 0.0;
  return sigma;
}

// Residual over the free variables only (the pinned component is identically
// zero and carries no information).
Vec residual_free(const ProblemConfig& cfg, const Vec& free) {
  const Vec r = stationarity_residual(cfg, embed_free(free));
  return Vec(r.begin(), r.end() - 1);
}

// Tridiagonal Jacobian of the free residual. With x = recover_primal(sigma):
//   dr_k/dsigma_k     = 1 + 2 alpha x_k^2 / (sigma_k + 1) + alpha / (2 (sigma_{k+1} + 1))
//   dr_k/dsigma_{k-1} = -alpha x_k / (sigma_k + 1)
//   dr_k/dsigma_{k+1} = -alpha x_{k+1} / (sigma_{k+1} + 1)
Eigen::MatrixXd residual_jacobian(const ProblemConfig& cfg, const Vec& free) {
  const Vec sigma = embed_free(free);
  const Vec x = recover_primal(cfg, sigma);
  const auto m = static_cast<Eigen::Index>(free.size());
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const double den = sigma[ku] + 1.0;
    const double den_next = sigma[ku + 1] + 1.0;
    jac(k, k) = 1.0 + 2.0 * cfg.alpha * x[ku] * x[ku] / den + cfg.alpha / (2.0 * den_next);
    if (k > 0) jac(k, k - 1) = -cfg.alpha * x[ku] / den;
    if (k + 1 < m) jac(k, k + 1) = -cfg.alpha * x[ku + 1] / den_next;
  }
  return jac;
}

bool crosses_pole(const Vec& free) {
  for (double s : free) {
    if (std::fabs(s + 1.0) < kPoleTolerance) return true;
  }
  return false;
}

CriticalPair assemble_pair(const ProblemConfig& cfg, const Vec& sigma) {
  CriticalPair pair;
  pair.sigma = sigma;
  pair.x = recover_primal(cfg, sigma);
  pair.primal_value = primal_objective(cfg, pair.x);
  pair.dual_value = dual_objective(cfg, sigma);
  pair.gap = pair.primal_value - pair.dual_value;
  pair.region = in_s_plus(cfg, sigma) ? Region::SPlus : Region::Mixed;
  pair.primal_class = classify_primal_point(cfg, pair.x);
  return pair;
}

// Newton polish of the primal stationarity from a given point; used to build
// the sign-flipped structured start. Returns nullopt when the iteration does
// not settle.
std::optional<Vec> polish_primal(const ProblemConfig& cfg, Vec x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  for (int iter = 0; iter < 50; ++iter) {
    const Vec g = primal_gradient(cfg, x);
    const double gnorm = inf_norm(g);
    if (gnorm <= 1e-9) return x;

    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      double d = 0.0;
      if (j + 1 < n) {
        d += 2.0 + 2.0 * cfg.alpha * (3.0 * x[ju] * x[ju] - x[ju + 1]);
        hess(j, j + 1) = hess(j + 1, j) = -2.0 * cfg.alpha * x[ju];
      }
      if (j > 0) d += cfg.alpha;
      hess(j, j) = d;
    }
    Eigen::Map<const Eigen::VectorXd> gv(g.data(), n);
    const Eigen::VectorXd step = hess.partialPivLu().solve(gv);
    if (!step.allFinite()) return std::nullopt;

    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < kDampingHalvings; ++halving) {
      Vec cand = x;
      for (Eigen::Index j = 0; j < n; ++j) {
        cand[static_cast<std::size_t>(j)] -= t * step(j);
      }
      if (inf_norm(primal_gradient(cfg, cand)) < gnorm) {
        x = cand;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) return std::nullopt;
  }
  return std::nullopt;
}

std::vector<Vec> structured_starts(const ProblemConfig& cfg) {
  std::vector<Vec> starts;
  starts.emplace_back(cfg.dual_size(), 0.0);
  if (cfg.n >= 3) {
    Vec s(cfg.dual_size(), 0.0);
    s[0] = -2.0;
    starts.push_back(std::move(s));
  }
  // Sign-flipped pattern (-1, 1, ..., 1), polished to the nearby primal
  // critical point and mapped to dual space. The raw perturbed start above
  // can drift into a saddle basin for larger n; this one cannot.
  if (cfg.n >= 4) {
    Vec anchor(static_cast<std::size_t>(cfg.n), 1.0);
    anchor[0] = -1.0;
    if (auto polished = polish_primal(cfg, std::move(anchor)); polished && (*polished)[0] < 0.0) {
      Vec sigma = dual_map(cfg, canonical_measure(cfg, *polished));
      sigma.back() = 0.0;
      if (!crosses_pole(sigma)) starts.push_back(std::move(sigma));
    }
  }
  return starts;
}

}  // namespace

const char* to_string(Region r) {
  return r == Region::SPlus ? "s_plus" : "mixed";
}

const char* to_string(PrimalClass c) {
  switch (c) {
    case PrimalClass::LocalMin: return "local_min";
    case PrimalClass::LocalMax: return "local_max";
    case PrimalClass::Saddle: return "saddle";
    case PrimalClass::Degenerate: return "degenerate";
  }
  return "unknown";
}

Vec stationarity_residual(const ProblemConfig& cfg, const Vec& sigma) {
  const Vec x = recover_primal(cfg, sigma);
  Vec r(cfg.dual_size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = sigma[i] - cfg.alpha * (x[i] * x[i] - x[i + 1]);
  }
  return r;
}

Vec primal_hessian_eigenvalues(const ProblemConfig& cfg, const Vec& x) {
  if (x.size() != static_cast<std::size_t>(cfg.n)) {
    throw std::invalid_argument("primal_hessian_eigenvalues: x has wrong length");
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    double d = 0.0;
    if (j + 1 < n) {
      d += 2.0 + 2.0 * cfg.alpha * (3.0 * x[ju] * x[ju] - x[ju + 1]);
      hess(j, j + 1) = hess(j + 1, j) = -2.0 * cfg.alpha * x[ju];
    }
    if (j > 0) d += cfg.alpha;
    hess(j, j) = d;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hess, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return Vec(ev.data(), ev.data() + ev.size());
}

PrimalClass classify_primal_point(const ProblemConfig& cfg, const Vec& x) {
  const Vec ev = primal_hessian_eigenvalues(cfg, x);
  bool all_pos = true, all_neg = true, some_pos = false, some_neg = false;
  for (double v : ev) {
    if (!(v > kEigenvalueThreshold)) all_pos = false;
    if (!(v < -kEigenvalueThreshold)) all_neg = false;
    if (v > kEigenvalueThreshold) some_pos = true;
    if (v < -kEigenvalueThreshold) some_neg = true;
  }
  if (all_pos) return PrimalClass::LocalMin;
  if (all_neg) return PrimalClass::LocalMax;
  if (some_pos && some_neg) return PrimalClass::Saddle;
  return PrimalClass::Degenerate;
}

CriticalPair find_critical_point(const ProblemConfig& cfg, const Vec& sigma0, double tol) {
  if (sigma0.size() != cfg.dual_size()) {
    throw std::invalid_argument("find_critical_point: sigma0 has wrong length");
  }
  if (!in_dual_feasible(cfg, sigma0)) {
    throw std::invalid_argument("find_critical_point: sigma0 is not dual feasible");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("find_critical_point: tol must be positive");

  Vec free(sigma0.begin(), sigma0.end() - 1);
  if (free.empty()) {
    return assemble_pair(cfg, Vec{0.0});
  }

  Vec r = residual_free(cfg, free);
  double rnorm = inf_norm(r);
  for (int iter = 0; iter < kNewtonBudget; ++iter) {
    if (rnorm <= tol) return assemble_pair(cfg, embed_free(free));

    const Eigen::MatrixXd jac = residual_jacobian(cfg, free);
    Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(r.size()));
    const Eigen::VectorXd step = jac.partialPivLu().solve(rv);
    if (!step.allFinite()) {
      throw NoConvergenceError("find_critical_point: singular stationarity Jacobian");
    }

    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < kDampingHalvings; ++halving) {
      Vec cand = free;
      for (std::size_t k = 0; k < cand.size(); ++k) {
        cand[k] -= t * step(static_cast<Eigen::Index>(k));
      }
      if (!crosses_pole(cand)) {
        const Vec rc = residual_free(cfg, cand);
        const double rcnorm = inf_norm(rc);
        if (std::isfinite(rcnorm) && rcnorm < rnorm) {
          free = std::move(cand);
          r = rc;
          rnorm = rcnorm;
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) {
      throw NoConvergenceError("find_critical_point: stalled at residual " +
                               std::to_string(rnorm));
    }
  }
  if (rnorm <= tol) return assemble_pair(cfg, embed_free(free));
  throw NoConvergenceError("find_critical_point: budget exhausted at residual " +
                           std::to_string(rnorm));
}

Atlas enumerate_critical_points(const ProblemConfig& cfg, int n_starts, std::uint64_t seed) {
  if (cfg.n > 12) {
    throw std::invalid_argument("enumerate_critical_points: multistart is desk scale, n <= 12");
  }
  if (n_starts < 0) throw std::invalid_argument("enumerate_critical_points: n_starts < 0");

  std::vector<Vec> starts = structured_starts(cfg);
  Rng rng(seed);
  for (int s = 0; s < n_starts; ++s) {
    Vec sigma(cfg.dual_size(), 0.0);
    for (std::size_t k = 0; k + 1 < sigma.size(); ++k) {
      sigma[k] = rng.uniform(-0.99, 3.0);
    }
    starts.push_back(std::move(sigma));
  }

  std::vector<std::optional<CriticalPair>> results(starts.size());
  const auto count = static_cast<std::int64_t>(starts.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t idx = 0; idx < count; ++idx) {
    try {
      results[static_cast<std::size_t>(idx)] =
          find_critical_point(cfg, starts[static_cast<std::size_t>(idx)], kAtlasResidualTol);
    } catch (const std::exception&) {
      // failed start, skipped and counted below
    }
  }

  Atlas atlas;
  for (const auto& result : results) {
    if (!result) {
      ++atlas.failed_starts;
      continue;
    }
    bool duplicate = false;
    for (const CriticalPair& kept : atlas.pairs) {
      double dist = 0.0;
      for (std::size_t k = 0; k < kept.sigma.size(); ++k) {
        dist = std::max(dist, std::fabs(kept.sigma[k] - result->sigma[k]));
      }
      if (dist <= kDedupTolerance) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) atlas.pairs.push_back(*result);
  }

  std::sort(atlas.pairs.begin(), atlas.pairs.end(),
            [](const CriticalPair& a, const CriticalPair& b) {
              if (a.primal_value != b.primal_value) return a.primal_value < b.primal_value;
              return a.sigma < b.sigma;
            });
  return atlas;
}

SMinusEmptinessProof check_s_minus_empty(const ProblemConfig& cfg) {
  (void)cfg;
  return {true,
          "dual feasibility pins sigma[n-2] to 0, so sigma[n-2] + 1 = 1 > 0 contradicts "
          "the all-negative requirement sigma[n-2] + 1 < 0"};
}

}  // namespace cdrosen
