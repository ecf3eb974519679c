#include "cdrosen/core_model.hpp"

#include <cmath>
#include <limits>

namespace cdrosen {

namespace {

void require_size(const Vec& v, std::size_t expected, const char* what) {
  if (v.size() != expected) {
    throw std::invalid_argument(std::string(what) + ": expected length " +
                                std::to_string(expected) + ", got " +
                                std::to_string(v.size()));
  }
}

}  // namespace

ProblemConfig::ProblemConfig(int n_, double big_n_) : n(n_), big_n(big_n_), alpha(2.0 * big_n_) {
  if (n < 2) throw std::invalid_argument("ProblemConfig: dimension must be >= 2");
  if (!(big_n > 0.0)) throw std::invalid_argument("ProblemConfig: N must be > 0");
}

double primal_term(const ProblemConfig& cfg, const Vec& x, std::size_t i) {
  const double d = x[i] - 1.0;
  const double e = x[i + 1] - x[i] * x[i];
  return d * d + 0.5 * cfg.alpha * e * e;
}

double dual_term(const ProblemConfig& cfg, const Vec& sigma, std::size_t i) {
  const double den = sigma[i] + 1.0;
  if (std::fabs(den) < kPoleTolerance) throw PoleError(i);
  const double num = (i == 0 ? 0.0 : sigma[i - 1]) + 2.0;
  return num * num / (4.0 * den) + sigma[i] * sigma[i] / (2.0 * cfg.alpha);
}

double primal_objective(const ProblemConfig& cfg, const Vec& x) {
  require_size(x, static_cast<std::size_t>(cfg.n), "primal_objective: x");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) sum += primal_term(cfg, x, i);
  return sum;
}

Vec primal_gradient(const ProblemConfig& cfg, const Vec& x) {
  require_size(x, static_cast<std::size_t>(cfg.n), "primal_gradient: x");
  const std::size_t n = x.size();
  Vec g(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (j + 1 < n) {
      const double e = x[j + 1] - x[j] * x[j];
      g[j] += 2.0 * (x[j] - 1.0) - 2.0 * cfg.alpha * x[j] * e;
    }
    if (j > 0) {
      g[j] += cfg.alpha * (x[j] - x[j - 1] * x[j - 1]);
    }
  }
  return g;
}

Vec canonical_measure(const ProblemConfig& cfg, const Vec& x) {
  require_size(x, static_cast<std::size_t>(cfg.n), "canonical_measure: x");
  Vec xi(cfg.dual_size());
  for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = x[i] * x[i] - x[i + 1];
  return xi;
}

double canonical_value(const ProblemConfig& cfg, const Vec& xi) {
  require_size(xi, cfg.dual_size(), "canonical_value: xi");
  double sum = 0.0;
  for (double v : xi) sum += 0.5 * cfg.alpha * v * v;
  return sum;
}

Vec dual_map(const ProblemConfig& cfg, const Vec& xi) {
  require_size(xi, cfg.dual_size(), "dual_map: xi");
  Vec sigma(xi.size());
  for (std::size_t j = 0; j < xi.size(); ++j) sigma[j] = cfg.alpha * xi[j];
  return sigma;
}

double conjugate_value(const ProblemConfig& cfg, const Vec& sigma) {
  require_size(sigma, cfg.dual_size(), "conjugate_value: sigma");
  double sum = 0.0;
  for (double s : sigma) sum += s * s / (2.0 * cfg.alpha);
  return sum;
}

double total_complementary(const ProblemConfig& cfg, const Vec& x, const Vec& sigma) {
  require_size(x, static_cast<std::size_t>(cfg.n), "total_complementary: x");
  require_size(sigma, cfg.dual_size(), "total_complementary: sigma");
  double sum = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const double d = x[i] - 1.0;
    sum += d * d + sigma[i] * (x[i] * x[i] - x[i + 1]) - sigma[i] * sigma[i] / (2.0 * cfg.alpha);
  }
  return sum;
}

double dual_objective(const ProblemConfig& cfg, const Vec& sigma) {
  require_size(sigma, cfg.dual_size(), "dual_objective: sigma");
  double sum = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) sum += dual_term(cfg, sigma, i);
  return static_cast<double>(cfg.n - 1) - sum;
}

Vec dual_gradient(const ProblemConfig& cfg, const Vec& sigma) {
  require_size(sigma, cfg.dual_size(), "dual_gradient: sigma");
  if (std::fabs(sigma.back()) > kPinTolerance) {
    throw std::invalid_argument("dual_gradient: trailing component must be pinned to 0");
  }
  Vec g(cfg.free_dual_size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double den = sigma[k] + 1.0;
    if (std::fabs(den) < kPoleTolerance) throw PoleError(k);
    const double den_next = sigma[k + 1] + 1.0;
    if (std::fabs(den_next) < kPoleTolerance) throw PoleError(k + 1);
    const double num = (k == 0 ? 0.0 : sigma[k - 1]) + 2.0;
    g[k] = num * num / (4.0 * den * den) - sigma[k] / cfg.alpha -
           (sigma[k] + 2.0) / (2.0 * den_next);
  }
  return g;
}

Vec recover_primal(const ProblemConfig& cfg, const Vec& sigma) {
  require_size(sigma, cfg.dual_size(), "recover_primal: sigma");
  Vec x(static_cast<std::size_t>(cfg.n));
  double prev = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const double den = sigma[i] + 1.0;
    if (std::fabs(den) < kPoleTolerance) throw PoleError(i);
    x[i] = (prev + 2.0) / (2.0 * den);
    prev = sigma[i];
  }
  x[sigma.size()] = x[sigma.size() - 1] * x[sigma.size() - 1];
  return x;
}

GapReport duality_gap(const ProblemConfig& cfg, const Vec& sigma) {
  const Vec x = recover_primal(cfg, sigma);
  GapReport report;
  report.primal_value = primal_objective(cfg, x);
  report.dual_value = dual_objective(cfg, sigma);
  report.xi_value = total_complementary(cfg, x, sigma);
  report.gap = report.primal_value - report.dual_value;
  return report;
}

bool in_dual_feasible(const ProblemConfig& cfg, const Vec& sigma) {
  if (sigma.size() != cfg.dual_size()) return false;
  for (std::size_t i = 0; i + 1 < sigma.size(); ++i) {
    if (std::fabs(sigma[i] + 1.0) < kPoleTolerance) return false;
    if (!std::isfinite(sigma[i])) return false;
  }
  return std::fabs(sigma.back()) <= kPinTolerance;
}

bool in_s_plus(const ProblemConfig& cfg, const Vec& sigma) {
  if (sigma.size() != cfg.dual_size()) return false;
  for (double s : sigma) {
    if (!(s + 1.0 > 0.0)) return false;
  }
  return true;
}

bool in_s_minus(const ProblemConfig& cfg, const Vec& sigma) {
  if (sigma.size() != cfg.dual_size()) return false;
  for (double s : sigma) {
    if (!(s + 1.0 < 0.0)) return false;
  }
  return true;
}

double penalized_dual_objective(const ProblemConfig& cfg, const Vec& sigma_full,
                                double penalty_weight, double margin) {
  require_size(sigma_full, cfg.dual_size(), "penalized_dual_objective: sigma");
  if (!(penalty_weight > 0.0)) {
    throw std::invalid_argument("penalized_dual_objective: weight must be > 0");
  }
  for (double s : sigma_full) {
    if (std::fabs(s + 1.0) < kPoleTolerance) {
      return std::numeric_limits<double>::infinity();
    }
  }
  double violation = 0.0;
  for (double s : sigma_full) {
    const double slack = s + 1.0 - margin;
    if (slack < 0.0) violation += slack * slack;
  }
  const double pin = sigma_full.back();
  return -dual_objective(cfg, sigma_full) + penalty_weight * (violation + pin * pin);
}

}  // namespace cdrosen
