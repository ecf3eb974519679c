#include <cmath>
#include <limits>

#include <doctest.h>

#include "cdrosen/core_model.hpp"
#include "cdrosen/rng.hpp"
#include "oracles.hpp"

using namespace cdrosen;
using testing_oracles::central_difference_gradient;
using testing_oracles::inf_norm;
using testing_oracles::rel_err;

namespace {

// The nonglobal minimizer for n = 5, located offline by damped Newton on the
// primal stationarity system in 50-digit arithmetic.
const Vec kLocalMinimizerN5 = {-0.96205102069475016, 0.93573939597671001, 0.88071360419432059,
                               0.77787767585440633, 0.60509367859265284};

Vec sample_pinned(Rng& rng, std::size_t size, double lo, double hi, double pole_window = 0.0) {
  Vec sigma(size, 0.0);
  for (std::size_t k = 0; k + 1 < size; ++k) {
    double v;
    do {
      v = rng.uniform(lo, hi);
    } while (pole_window > 0.0 && std::fabs(v + 1.0) < pole_window);
    sigma[k] = v;
  }
  return sigma;
}

}  // namespace

TEST_SUITE("core_model") {

TEST_CASE("problem config invariants") {
  const ProblemConfig cfg(4);
  CHECK(cfg.n == 4);
  CHECK(cfg.big_n == 100.0);
  CHECK(cfg.alpha == 200.0);

  const ProblemConfig odd(7, 3.7);
  CHECK(odd.alpha == 2.0 * 3.7);

  CHECK_THROWS_AS(ProblemConfig(1), std::invalid_argument);
  CHECK_THROWS_AS(ProblemConfig(5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ProblemConfig(5, -2.0), std::invalid_argument);
}

TEST_CASE("primal objective anchor values") {
  CHECK(primal_objective(ProblemConfig(4), Vec{1, 1, 1, 1}) == 0.0);
  CHECK(primal_objective(ProblemConfig(5), Vec{-1, 1, 1, 1, 1}) == 4.0);
  CHECK(primal_objective(ProblemConfig(2), Vec{3, 3}) == 3604.0);
  CHECK_THROWS_AS(primal_objective(ProblemConfig(4), Vec{1, 1, 1}), std::invalid_argument);
}

TEST_CASE("primal gradient closed form") {
  const Vec at_ones = primal_gradient(ProblemConfig(4), Vec{1, 1, 1, 1});
  for (double g : at_ones) CHECK(g == 0.0);

  const Vec at33 = primal_gradient(ProblemConfig(2), Vec{3, 3});
  CHECK(at33[0] == doctest::Approx(7204.0).epsilon(1e-14));
  CHECK(at33[1] == doctest::Approx(-1200.0).epsilon(1e-14));

  const ProblemConfig cfg2(2);
  const Vec fd = central_difference_gradient(
      [&](const Vec& x) { return primal_objective(cfg2, x); }, Vec{3, 3});
  CHECK(rel_err(at33[0], fd[0]) <= 1e-6);
  CHECK(rel_err(at33[1], fd[1]) <= 1e-6);
}

TEST_CASE("primal gradient vanishes at the n=5 local minimizer") {
  const Vec g = primal_gradient(ProblemConfig(5), kLocalMinimizerN5);
  CHECK(inf_norm(g) <= 1e-6);
  const double value = primal_objective(ProblemConfig(5), kLocalMinimizerN5);
  CHECK(value == doctest::Approx(3.930839434133028).epsilon(1e-12));
}

TEST_CASE("primal gradient matches finite differences at random points") {
  Rng rng(11);
  for (int sample = 0; sample < 100; ++sample) {
    const ProblemConfig cfg(2 + sample % 9);
    Vec x(static_cast<std::size_t>(cfg.n));
    for (double& v : x) v = rng.uniform(-3.0, 3.0);
    const Vec grad = primal_gradient(cfg, x);
    const Vec fd = central_difference_gradient(
        [&](const Vec& p) { return primal_objective(cfg, p); }, x);
    for (std::size_t j = 0; j < x.size(); ++j) {
      CHECK(rel_err(grad[j], fd[j]) <= 1e-6);
    }
  }
}

TEST_CASE("canonical measure") {
  CHECK(canonical_measure(ProblemConfig(4), Vec{1, 1, 1, 1}) == Vec{0, 0, 0});
  CHECK(canonical_measure(ProblemConfig(2), Vec{3, 3}) == Vec{6});
  CHECK(canonical_measure(ProblemConfig(3), Vec{-1, 1, 1}) == Vec{0, 0});
}

TEST_CASE("canonical function and conjugate") {
  CHECK(canonical_value(ProblemConfig(4), Vec{0, 0, 0}) == 0.0);
  CHECK(canonical_value(ProblemConfig(2), Vec{6}) == 3600.0);
  CHECK(canonical_value(ProblemConfig(3), Vec{1, -1}) == 200.0);

  CHECK(dual_map(ProblemConfig(3), Vec{0, 0}) == Vec{0, 0});
  CHECK(dual_map(ProblemConfig(2), Vec{6}) == Vec{1200});
  CHECK(dual_map(ProblemConfig(2), Vec{0.01})[0] == doctest::Approx(2.0).epsilon(1e-14));

  CHECK(conjugate_value(ProblemConfig(4), Vec{0, 0, 0}) == 0.0);
  CHECK(conjugate_value(ProblemConfig(2), Vec{1200}) == 3600.0);
  CHECK(conjugate_value(ProblemConfig(3), Vec{-0.5, 0}) ==
        doctest::Approx(0.000625).epsilon(1e-14));
}

TEST_CASE("legendre equality holds on random measures") {
  Rng rng(13);
  for (int sample = 0; sample < 1000; ++sample) {
    const ProblemConfig cfg(2 + sample % 9);
    Vec xi(cfg.dual_size());
    for (double& v : xi) v = rng.uniform(-10.0, 10.0);
    const Vec sigma = dual_map(cfg, xi);
    double pairing = 0.0;
    for (std::size_t j = 0; j < xi.size(); ++j) pairing += xi[j] * sigma[j];
    CHECK(rel_err(canonical_value(cfg, xi) + conjugate_value(cfg, sigma), pairing) <= 1e-12);
  }
}

TEST_CASE("total complementary values and consistency") {
  CHECK(total_complementary(ProblemConfig(4), Vec{1, 1, 1, 1}, Vec{0, 0, 0}) == 0.0);
  CHECK(total_complementary(ProblemConfig(2), Vec{3, 3}, Vec{1200}) == 3604.0);
  CHECK(total_complementary(ProblemConfig(2), Vec{0, 0}, Vec{0}) == 1.0);

  Rng rng(17);
  for (int sample = 0; sample < 1000; ++sample) {
    const ProblemConfig cfg(2 + sample % 9);
    Vec x(static_cast<std::size_t>(cfg.n));
    for (double& v : x) v = rng.uniform(-5.0, 5.0);
    const Vec sigma = dual_map(cfg, canonical_measure(cfg, x));
    CHECK(rel_err(total_complementary(cfg, x, sigma), primal_objective(cfg, x)) <= 1e-12);
  }
}

TEST_CASE("dual objective values") {
  CHECK(dual_objective(ProblemConfig(4), Vec{0, 0, 0}) == 0.0);

  // At an almost-zero point the dual value still prints as 0 to 8 decimals.
  CHECK(std::fabs(dual_objective(ProblemConfig(4), Vec{0.0000000119, 0, 0})) <= 5e-9);

  CHECK(dual_objective(ProblemConfig(3), Vec{-0.5, 0}) ==
        doctest::Approx(-0.563125).epsilon(1e-14));

  CHECK_THROWS_AS(dual_objective(ProblemConfig(4), Vec{-1.0, 0, 0}), PoleError);
  CHECK_THROWS_AS(dual_objective(ProblemConfig(4), Vec{-1.0 + 1e-13, 0, 0}), PoleError);
  CHECK_THROWS_AS(dual_objective(ProblemConfig(4), Vec{0, 0}), std::invalid_argument);
}

TEST_CASE("eliminating x from the complementary function gives the dual") {
  Rng rng(19);
  for (int sample = 0; sample < 1000; ++sample) {
    const ProblemConfig cfg(2 + sample % 9);
    const Vec sigma = sample_pinned(rng, cfg.dual_size(), -10.0, 10.0, 0.01);
    const double dual = dual_objective(cfg, sigma);
    const double xi = total_complementary(cfg, recover_primal(cfg, sigma), sigma);
    CHECK(rel_err(dual, xi) <= 1e-10);
  }
}

TEST_CASE("dual gradient closed form") {
  const Vec at_zero = dual_gradient(ProblemConfig(4), Vec{0, 0, 0});
  REQUIRE(at_zero.size() == 2);
  CHECK(at_zero[0] == 0.0);
  CHECK(at_zero[1] == 0.0);

  const Vec g = dual_gradient(ProblemConfig(3), Vec{-0.5, 0});
  REQUIRE(g.size() == 1);
  CHECK(g[0] == doctest::Approx(3.2525).epsilon(1e-14));

  CHECK(dual_gradient(ProblemConfig(2), Vec{0}).empty());
  CHECK_THROWS_AS(dual_gradient(ProblemConfig(3), Vec{0.1, 0.5}), std::invalid_argument);
}

TEST_CASE("dual gradient matches finite differences") {
  const ProblemConfig cfg4(4);
  const Vec point{0.1, 0, 0};
  const Vec grad = dual_gradient(cfg4, point);
  for (std::size_t k = 0; k < grad.size(); ++k) {
    Vec lo = point, hi = point;
    lo[k] -= 1e-7;
    hi[k] += 1e-7;
    const double fd = (dual_objective(cfg4, hi) - dual_objective(cfg4, lo)) / 2e-7;
    CHECK(rel_err(grad[k], fd) <= 1e-6);
  }

  Rng rng(23);
  for (int sample = 0; sample < 100; ++sample) {
    const ProblemConfig cfg(3 + sample % 9);
    const Vec sigma = sample_pinned(rng, cfg.dual_size(), -0.9, 3.0);
    const Vec g2 = dual_gradient(cfg, sigma);
    for (std::size_t k = 0; k < g2.size(); ++k) {
      Vec lo = sigma, hi = sigma;
      lo[k] -= 1e-7;
      hi[k] += 1e-7;
      const double fd = (dual_objective(cfg, hi) - dual_objective(cfg, lo)) / 2e-7;
      CHECK(rel_err(g2[k], fd) <= 1e-6);
    }
  }
}

TEST_CASE("primal recovery") {
  CHECK(recover_primal(ProblemConfig(4), Vec{0, 0, 0}) == Vec{1, 1, 1, 1});
  CHECK(recover_primal(ProblemConfig(3), Vec{-0.5, 0}) == Vec{2, 0.75, 0.5625});

  const ProblemConfig big(4000);
  const Vec ones = recover_primal(big, Vec(big.dual_size(), 0.0));
  for (double v : ones) CHECK(v == 1.0);
  CHECK(primal_objective(big, ones) == 0.0);

  CHECK_THROWS_AS(recover_primal(ProblemConfig(4), Vec{0, -1, 0}), PoleError);
}

TEST_CASE("duality gap report") {
  const GapReport zero = duality_gap(ProblemConfig(10), Vec(9, 0.0));
  CHECK(zero.gap == 0.0);
  CHECK(zero.primal_value == 0.0);
  CHECK(zero.dual_value == 0.0);
  CHECK(zero.xi_value == 0.0);

  // Not a critical point: the report is informational and the gap is large.
  const GapReport off = duality_gap(ProblemConfig(3), Vec{-0.5, 0});
  CHECK(off.primal_value == doctest::Approx(1057.3125).epsilon(1e-14));
  CHECK(off.gap == doctest::Approx(1057.875625).epsilon(1e-14));
  CHECK(std::fabs(off.gap) > 0.1);

  Rng rng(29);
  for (int sample = 0; sample < 200; ++sample) {
    const ProblemConfig cfg(2 + sample % 9);
    const Vec sigma = sample_pinned(rng, cfg.dual_size(), -5.0, 5.0, 0.01);
    const GapReport report = duality_gap(cfg, sigma);
    CHECK(report.gap == report.primal_value - report.dual_value);
  }
}

TEST_CASE("region predicates") {
  const ProblemConfig cfg(4);
  CHECK(in_dual_feasible(cfg, Vec{0, 0, 0}));
  CHECK(in_s_plus(cfg, Vec{0, 0, 0}));
  CHECK_FALSE(in_s_minus(cfg, Vec{0, 0, 0}));

  CHECK(in_dual_feasible(cfg, Vec{-2, 0.5, 0}));
  CHECK_FALSE(in_s_plus(cfg, Vec{-2, 0.5, 0}));
  CHECK_FALSE(in_s_minus(cfg, Vec{-2, 0.5, 0}));

  CHECK_FALSE(in_dual_feasible(cfg, Vec{-1, 0, 0}));
  CHECK_FALSE(in_dual_feasible(cfg, Vec{0, 0, 0.5}));  // pin violated
  CHECK_FALSE(in_dual_feasible(cfg, Vec{0, 0}));       // wrong length

  Rng rng(31);
  for (int sample = 0; sample < 1000; ++sample) {
    const ProblemConfig c(2 + sample % 9);
    Vec sigma(c.dual_size());
    for (double& v : sigma) v = rng.uniform(-5.0, 3.0);
    if (sample % 2 == 0) sigma.back() = 0.0;
    const bool in_both = in_s_minus(c, sigma) && in_dual_feasible(c, sigma);
    CHECK_FALSE(in_both);
  }
}

TEST_CASE("penalized dual objective") {
  const ProblemConfig cfg(4);
  CHECK(penalized_dual_objective(cfg, Vec{0, 0, 0}, 1e6) == 0.0);

  // A violated shifted-sign constraint dominates the value.
  const double violated = penalized_dual_objective(cfg, Vec{-2, 0, 0}, 1e6);
  CHECK(violated > 9.9e5);
  CHECK(violated == doctest::Approx(-2.99 + 1e6 * (1.0 + 1e-8) * (1.0 + 1e-8)).epsilon(1e-12));

  // A violated pin adds weight * sigma_last^2 on top of the shifted dual term.
  const double pinned = penalized_dual_objective(cfg, Vec{0, 0, 0.5}, 1e4);
  CHECK(pinned == doctest::Approx(2499.6672916666667).epsilon(1e-12));

  CHECK(std::isinf(penalized_dual_objective(cfg, Vec{-1, 0, 0}, 1e6)));
  CHECK_THROWS_AS(penalized_dual_objective(cfg, Vec{0, 0, 0}, 0.0), std::invalid_argument);
}

}  // TEST_SUITE
