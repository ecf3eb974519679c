#include "cdrosen/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "cdrosen/core_model.hpp"
#include "cdrosen/critical_points.hpp"
#include "cdrosen/parallel_eval.hpp"
#include "cdrosen/rng.hpp"

namespace cdrosen {

namespace {

double rel_err(double a, double b) {
  return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

std::string describe(const char* what, int n, double err) {
  std::ostringstream out;
  out << what << " (n=" << n << ", err=" << err << ")";
  return out.str();
}

void record(VerifySuiteResult& suite, bool ok, const std::function<std::string()>& detail) {
  ++suite.checks;
  if (!ok) {
    ++suite.failures;
    if (suite.detail.empty()) suite.detail = detail();
  }
}

int cycle_dim(long long index) {
  static constexpr int dims[] = {2, 3, 4, 5, 6, 7, 8, 9, 10, 16};
  return dims[index % (sizeof(dims) / sizeof(dims[0]))];
}

Vec sample_pinned_sigma(Rng& rng, std::size_t size, double lo, double hi) {
  Vec sigma(size, 0.0);
  for (std::size_t k = 0; k + 1 < size; ++k) sigma[k] = rng.uniform(lo, hi);
  return sigma;
}

VerifySuiteResult suite_legendre(long long samples, std::uint64_t seed) {
  VerifySuiteResult suite{"legendre", 0, 0, ""};
  Rng rng(seed);
  for (long long s = 0; s < samples; ++s) {
    const ProblemConfig cfg(cycle_dim(s));
    Vec xi(cfg.dual_size());
    for (double& v : xi) v = rng.uniform(-10.0, 10.0);
    const Vec sigma = dual_map(cfg, xi);
    double pairing = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) pairing += xi[j] * sigma[j];
    const double lhs = canonical_value(cfg, xi) + conjugate_value(cfg, sigma);
    const double err = rel_err(lhs, pairing);
    record(suite, err <= 1e-12, [&] { return describe("V + V* != <xi, sigma>", cfg.n, err); });
  }
  return suite;
}

VerifySuiteResult suite_xi_consistency(long long samples, std::uint64_t seed) {
  VerifySuiteResult suite{"xi", 0, 0, ""};
  Rng rng(seed + 1);
  for (long long s = 0; s < samples; ++s) {
    const ProblemConfig cfg(cycle_dim(s));
    Vec x(static_cast<std::size_t>(cfg.n));
    for (double& v : x) v = rng.uniform(-5.0, 5.0);
    const Vec sigma = dual_map(cfg, canonical_measure(cfg, x));
    const double err = rel_err(total_complementary(cfg, x, sigma), primal_objective(cfg, x));
    record(suite, err <= 1e-12,
           [&] { return describe("Xi(x, alpha*measure(x)) != P(x)", cfg.n, err); });
  }
  return suite;
}

VerifySuiteResult suite_stationary_identity(long long samples, std::uint64_t seed) {
  VerifySuiteResult suite{"stationary", 0, 0, ""};
  Rng rng(seed + 2);
  for (long long s = 0; s < samples; ++s) {
    const ProblemConfig cfg(cycle_dim(s));
    Vec sigma(cfg.dual_size(), 0.0);
    for (std::size_t k = 0; k + 1 < sigma.size(); ++k) {
      double v;
      do {
        v = rng.uniform(-10.0, 10.0);
      } while (std::fabs(v + 1.0) < 0.01);  // stay clear of poles
      sigma[k] = v;
    }
    const double dual = dual_objective(cfg, sigma);
    const double xi = total_complementary(cfg, recover_primal(cfg, sigma), sigma);
    const double err = rel_err(dual, xi);
    record(suite, err <= 1e-10,
           [&] { return describe("P^d(sigma) != Xi(x(sigma), sigma)", cfg.n, err); });
  }
  return suite;
}

VerifySuiteResult suite_gradients(long long samples, std::uint64_t seed) {
  VerifySuiteResult suite{"gradients", 0, 0, ""};
  Rng rng(seed + 3);
  const long long per_side = std::max<long long>(1, samples / 2);

  for (long long s = 0; s < per_side; ++s) {
    const ProblemConfig cfg(cycle_dim(s));
    Vec x(static_cast<std::size_t>(cfg.n));
    for (double& v : x) v = rng.uniform(-3.0, 3.0);
    const Vec grad = primal_gradient(cfg, x);
    double worst = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double h = 1e-6 * std::max(1.0, std::fabs(x[j]));
      Vec lo = x, hi = x;
      lo[j] -= h;
      hi[j] += h;
      const double fd = (primal_objective(cfg, hi) - primal_objective(cfg, lo)) / (2.0 * h);
      worst = std::max(worst, rel_err(grad[j], fd));
    }
    record(suite, worst <= 1e-6,
           [&] { return describe("primal gradient vs finite differences", cfg.n, worst); });
  }

  for (long long s = 0; s < per_side; ++s) {
    const ProblemConfig cfg(cycle_dim(s) + 1);  // need at least one free variable
    Vec sigma = sample_pinned_sigma(rng, cfg.dual_size(), -0.9, 3.0);
    const Vec grad = dual_gradient(cfg, sigma);
    double worst = 0.0;
    for (std::size_t k = 0; k < grad.size(); ++k) {
      const double h = 1e-7;
      Vec lo = sigma, hi = sigma;
      lo[k] -= h;
      hi[k] += h;
      const double fd = (dual_objective(cfg, hi) - dual_objective(cfg, lo)) / (2.0 * h);
      worst = std::max(worst, rel_err(grad[k], fd));
    }
    record(suite, worst <= 1e-6,
           [&] { return describe("dual gradient vs finite differences", cfg.n, worst); });
  }
  return suite;
}

VerifySuiteResult suite_concavity(long long samples, std::uint64_t seed) {
  VerifySuiteResult suite{"concavity", 0, 0, ""};
  Rng rng(seed + 4);
  for (long long s = 0; s < samples; ++s) {
    const ProblemConfig cfg(cycle_dim(s) + 1);
    const Vec a = sample_pinned_sigma(rng, cfg.dual_size(), -0.99, 10.0);
    const Vec b = sample_pinned_sigma(rng, cfg.dual_size(), -0.99, 10.0);
    Vec mid(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) mid[k] = 0.5 * (a[k] + b[k]);
    const double lhs = dual_objective(cfg, mid);
    const double rhs = 0.5 * dual_objective(cfg, a) + 0.5 * dual_objective(cfg, b);
    record(suite, lhs >= rhs - 1e-10,
           [&] { return describe("midpoint concavity violated", cfg.n, rhs - lhs); });
  }
  return suite;
}

VerifySuiteResult suite_certificate(long long samples, std::uint64_t seed) {
  VerifySuiteResult suite{"certificate", 0, 0, ""};
  Rng rng(seed + 5);
  for (long long s = 0; s < samples; ++s) {
    const ProblemConfig cfg(cycle_dim(s) + 1);
    const Vec sigma = sample_pinned_sigma(rng, cfg.dual_size(), -0.99, 10.0);
    const double value = dual_objective(cfg, sigma);
    record(suite, value <= 0.0,
           [&] { return describe("P^d > 0 on the positive region", cfg.n, value); });
  }
  // Equality exactly at sigma = 0.
  for (int n : {2, 5, 10, 100}) {
    const ProblemConfig cfg(n);
    const double at_zero = dual_objective(cfg, Vec(cfg.dual_size(), 0.0));
    record(suite, at_zero == 0.0, [&] { return describe("P^d(0) != 0", n, at_zero); });
  }
  return suite;
}

VerifySuiteResult suite_gap(std::uint64_t seed) {
  VerifySuiteResult suite{"gap", 0, 0, ""};
  const ProblemConfig cfg(5);
  const Atlas atlas = enumerate_critical_points(cfg, 200, seed);
  record(suite, atlas.pairs.size() >= 2, [&] {
    return describe("atlas found fewer than two critical points", cfg.n,
                    static_cast<double>(atlas.pairs.size()));
  });
  for (const CriticalPair& pair : atlas.pairs) {
    const double bound = 1e-9 * std::max(1.0, std::fabs(pair.dual_value));
    const double xi = total_complementary(cfg, pair.x, pair.sigma);
    record(suite, std::fabs(pair.gap) <= bound,
           [&] { return describe("duality gap out of bound", cfg.n, pair.gap); });
    record(suite, std::fabs(xi - pair.dual_value) <= bound,
           [&] { return describe("Xi vs P^d out of bound", cfg.n, xi - pair.dual_value); });
  }
  return suite;
}

VerifySuiteResult suite_s_minus(long long samples, std::uint64_t seed) {
  VerifySuiteResult suite{"sminus", 0, 0, ""};
  Rng rng(seed + 6);
  for (long long s = 0; s < samples; ++s) {
    const ProblemConfig cfg(cycle_dim(s));
    Vec sigma(cfg.dual_size());
    for (double& v : sigma) v = rng.uniform(-5.0, 3.0);
    if (s % 2 == 0) sigma.back() = 0.0;  // half the samples sit on the pin
    const bool conjunction = in_s_minus(cfg, sigma) && in_dual_feasible(cfg, sigma);
    record(suite, !conjunction,
           [&] { return describe("sigma in both S- and the feasible set", cfg.n, 0.0); });
  }
  for (int n : {2, 5, 1000}) {
    const auto proof = check_s_minus_empty(ProblemConfig(n));
    record(suite, proof.empty && !proof.witness.empty(),
           [&] { return describe("emptiness proof missing", n, 0.0); });
  }
  return suite;
}

VerifySuiteResult suite_parallel(long long samples, std::uint64_t seed) {
  VerifySuiteResult suite{"parallel", 0, 0, ""};
  Rng rng(seed + 7);
  static constexpr int dims[] = {2, 3, 7, 50, 257};
  for (long long s = 0; s < samples; ++s) {
    const ProblemConfig cfg(dims[s % 5]);
    const int workers = 1 + static_cast<int>(s % 32);
    const ChunkPlan plan = ChunkPlan::for_problem(cfg, workers);
    if (s % 2 == 0) {
      Vec x(static_cast<std::size_t>(cfg.n));
      for (double& v : x) v = rng.uniform(-2.0, 2.0);
      const double err = rel_err(parallel_primal(cfg, x, plan), primal_objective(cfg, x));
      record(suite, err <= 1e-12,
             [&] { return describe("parallel primal mismatch", cfg.n, err); });
    } else {
      const Vec sigma = sample_pinned_sigma(rng, cfg.dual_size(), -0.9, 3.0);
      const double err = rel_err(parallel_dual(cfg, sigma, plan), dual_objective(cfg, sigma));
      record(suite, err <= 1e-12,
             [&] { return describe("parallel dual mismatch", cfg.n, err); });
    }
  }
  return suite;
}

}  // namespace

std::vector<std::string> verification_suite_names() {
  return {"legendre", "xi",          "stationary", "gradients", "concavity",
          "certificate", "gap",      "sminus",     "parallel"};
}

VerifyReport run_verification(const VerifyOptions& options) {
  const auto names = verification_suite_names();
  if (options.scope != "all" &&
      std::find(names.begin(), names.end(), options.scope) == names.end()) {
    throw std::invalid_argument("unknown verification scope '" + options.scope + "'");
  }
  const auto wants = [&](const char* name) {
    return options.scope == "all" || options.scope == name;
  };
  const long long def = options.samples > 0 ? options.samples : 0;
  const auto count = [&](long long fallback) { return def > 0 ? def : fallback; };

  VerifyReport report;
  if (wants("legendre")) report.suites.push_back(suite_legendre(count(1000), options.rng_seed));
  if (wants("xi")) report.suites.push_back(suite_xi_consistency(count(1000), options.rng_seed));
  if (wants("stationary")) {
    report.suites.push_back(suite_stationary_identity(count(1000), options.rng_seed));
  }
  if (wants("gradients")) report.suites.push_back(suite_gradients(count(200), options.rng_seed));
  if (wants("concavity")) report.suites.push_back(suite_concavity(count(1000), options.rng_seed));
  if (wants("certificate")) {
    report.suites.push_back(suite_certificate(count(1000), options.rng_seed));
  }
  if (wants("gap")) report.suites.push_back(suite_gap(options.rng_seed));
  if (wants("sminus")) report.suites.push_back(suite_s_minus(count(1000), options.rng_seed));
  if (wants("parallel")) report.suites.push_back(suite_parallel(count(100), options.rng_seed));
  return report;
}

}  // namespace cdrosen
