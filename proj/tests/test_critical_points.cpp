#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "cdrosen/core_model.hpp"
#include "cdrosen/critical_points.hpp"
#include "cdrosen/rng.hpp"
#include "oracles.hpp"

using namespace cdrosen;
using testing_oracles::inf_dist;
using testing_oracles::inf_norm;
using testing_oracles::rel_err;

namespace {

// Reference values for the nonglobal minimum, from damped Newton on the
// stationarity system in 50-digit arithmetic.
constexpr double kLocalMinValueN5 = 3.930839434133028;
constexpr double kLocalMinValueN6 = 3.973940500930295;
constexpr double kLocalMinValueN7 = 3.983600536424854;
constexpr double kSaddleValueN5 = 4.657371428200575;

std::vector<const CriticalPair*> pairs_of_class(const Atlas& atlas, PrimalClass cls) {
  std::vector<const CriticalPair*> out;
  for (const CriticalPair& pair : atlas.pairs) {
    if (pair.primal_class == cls) out.push_back(&pair);
  }
  return out;
}

}  // namespace

TEST_SUITE("critical_points") {

TEST_CASE("stationarity residual") {
  const Vec at_zero = stationarity_residual(ProblemConfig(5), Vec(4, 0.0));
  for (double r : at_zero) CHECK(r == 0.0);

  const Vec r = stationarity_residual(ProblemConfig(3), Vec{-0.5, 0});
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(-650.5).epsilon(1e-14));
  CHECK(r[1] == 0.0);
}

TEST_CASE("residual equals -alpha times the dual gradient") {
  Rng rng(41);
  for (int sample = 0; sample < 200; ++sample) {
    const ProblemConfig cfg(3 + sample % 8);
    Vec sigma(cfg.dual_size(), 0.0);
    for (std::size_t k = 0; k + 1 < sigma.size(); ++k) {
      double v;
      do {
        v = rng.uniform(-4.0, 4.0);
      } while (std::fabs(v + 1.0) < 0.01);
      sigma[k] = v;
    }
    const Vec residual = stationarity_residual(cfg, sigma);
    const Vec grad = dual_gradient(cfg, sigma);
    for (std::size_t k = 0; k < grad.size(); ++k) {
      CHECK(rel_err(residual[k], -cfg.alpha * grad[k]) <= 1e-12);
    }
  }
}

TEST_CASE("newton from the origin returns the global pair") {
  const CriticalPair pair = find_critical_point(ProblemConfig(6), Vec(5, 0.0));
  CHECK(pair.sigma == Vec(5, 0.0));
  CHECK(pair.x == Vec(6, 1.0));
  CHECK(pair.primal_value == 0.0);
  CHECK(pair.dual_value == 0.0);
  CHECK(pair.gap == 0.0);
  CHECK(pair.region == Region::SPlus);
  CHECK(pair.primal_class == PrimalClass::LocalMin);
}

TEST_CASE("newton from the perturbed start finds the n=5 local minimum") {
  const ProblemConfig cfg(5);
  const CriticalPair pair =
      find_critical_point(cfg, Vec{-2.0, 0.0, 0.0, 0.0}, kAtlasResidualTol);
  CHECK(pair.primal_value == doctest::Approx(kLocalMinValueN5).epsilon(1e-10));
  CHECK(pair.primal_value >= 3.9);
  CHECK(pair.primal_value <= 4.0);
  CHECK(pair.region == Region::Mixed);
  CHECK(pair.primal_class == PrimalClass::LocalMin);
  CHECK(pair.x[0] == doctest::Approx(-0.96205102069475).epsilon(1e-9));
  CHECK(std::fabs(pair.gap) <= 1e-9 * std::max(1.0, std::fabs(pair.dual_value)));
  CHECK(inf_norm(stationarity_residual(cfg, pair.sigma)) <= kAtlasResidualTol);
}

TEST_CASE("newton reports failure when the tolerance is unreachable") {
  // Near-pole recovery denominators put the attainable residual floor around
  // 1e-11 for this point; 1e-16 cannot be reached in double precision.
  CHECK_THROWS_AS(
      find_critical_point(ProblemConfig(5), Vec{-2.0, 0.0, 0.0, 0.0}, 1e-16),
      NoConvergenceError);
  CHECK_THROWS_AS(find_critical_point(ProblemConfig(5), Vec{-1.0, 0, 0, 0}),
                  std::invalid_argument);
}

TEST_CASE("atlas for n=5 finds exactly the two minima") {
  const Atlas atlas = enumerate_critical_points(ProblemConfig(5), 200, 42);
  const auto minima = pairs_of_class(atlas, PrimalClass::LocalMin);
  REQUIRE(minima.size() == 2);
  CHECK(minima[0]->primal_value == 0.0);
  CHECK(minima[0]->region == Region::SPlus);
  CHECK(inf_norm(minima[0]->sigma) == 0.0);
  CHECK(minima[1]->primal_value == doctest::Approx(kLocalMinValueN5).epsilon(1e-9));
  CHECK(minima[1]->region == Region::Mixed);
  CHECK(minima[1]->x[0] < 0.0);

  const auto saddles = pairs_of_class(atlas, PrimalClass::Saddle);
  REQUIRE(saddles.size() >= 1);
  CHECK(saddles[0]->primal_value == doctest::Approx(kSaddleValueN5).epsilon(1e-9));
}

TEST_CASE("atlas for n=6 and n=7") {
  const Atlas six = enumerate_critical_points(ProblemConfig(6), 200, 42);
  const auto minima6 = pairs_of_class(six, PrimalClass::LocalMin);
  REQUIRE(minima6.size() == 2);
  CHECK(minima6[0]->primal_value == 0.0);
  CHECK(minima6[1]->primal_value == doctest::Approx(kLocalMinValueN6).epsilon(1e-9));
  CHECK(minima6[1]->primal_value >= 3.9);
  CHECK(minima6[1]->primal_value <= 4.02);

  const Atlas seven = enumerate_critical_points(ProblemConfig(7), 200, 42);
  const auto minima7 = pairs_of_class(seven, PrimalClass::LocalMin);
  REQUIRE(minima7.size() == 2);
  CHECK(minima7[1]->primal_value == doctest::Approx(kLocalMinValueN7).epsilon(1e-9));
  CHECK(minima7[1]->primal_value >= 3.9);
  CHECK(minima7[1]->primal_value <= 4.1);
  CHECK(minima7[1]->x[0] == doctest::Approx(-1.0).epsilon(0.02));
}

TEST_CASE("atlas for n=2 is the single global pair") {
  const Atlas atlas = enumerate_critical_points(ProblemConfig(2), 50, 42);
  REQUIRE(atlas.pairs.size() == 1);
  CHECK(atlas.pairs[0].primal_class == PrimalClass::LocalMin);
  CHECK(atlas.pairs[0].primal_value == 0.0);
  CHECK(atlas.failed_starts == 0);
}

TEST_CASE("atlas pairs satisfy the recovery and gap invariants") {
  for (int n : {3, 4, 5, 6, 7, 8}) {
    const ProblemConfig cfg(n);
    const Atlas atlas = enumerate_critical_points(cfg, 100, 42);
    REQUIRE(!atlas.pairs.empty());

    int s_plus_count = 0;
    for (const CriticalPair& pair : atlas.pairs) {
      // Recovered points are primal critical points.
      const double gnorm = inf_norm(primal_gradient(cfg, pair.x));
      CHECK(gnorm <= 1e-7 * std::max(1.0, std::fabs(pair.primal_value)));

      // Three-way equality chain.
      const double bound = 1e-9 * std::max(1.0, std::fabs(pair.dual_value));
      CHECK(std::fabs(pair.primal_value - total_complementary(cfg, pair.x, pair.sigma)) <=
            bound);
      CHECK(std::fabs(total_complementary(cfg, pair.x, pair.sigma) - pair.dual_value) <=
            bound);
      CHECK(pair.x == recover_primal(cfg, pair.sigma));

      if (pair.region == Region::SPlus) {
        ++s_plus_count;
        CHECK(inf_norm(pair.sigma) == 0.0);
        CHECK(pair.primal_value == 0.0);
        CHECK(pair.dual_value == 0.0);
      }
    }
    // The positive-region pair is unique; it is the dual maximum over that
    // region (mixed-region pairs can carry larger dual values since the dual
    // is only concave where every shifted component is positive).
    CHECK(s_plus_count == 1);
    Rng rng(61);
    for (int sample = 0; sample < 100; ++sample) {
      Vec sigma(cfg.dual_size(), 0.0);
      for (std::size_t k = 0; k + 1 < sigma.size(); ++k) sigma[k] = rng.uniform(-0.99, 10.0);
      CHECK(dual_objective(cfg, sigma) <= 0.0);
    }
  }
}

TEST_CASE("atlas rejects problems beyond desk scale") {
  CHECK_THROWS_AS(enumerate_critical_points(ProblemConfig(13), 10, 1), std::invalid_argument);
}

TEST_CASE("classification by the primal spectrum") {
  const ProblemConfig cfg(4);
  CHECK(classify_primal_point(cfg, Vec{1, 1, 1, 1}) == PrimalClass::LocalMin);
  const Vec ev = primal_hessian_eigenvalues(cfg, Vec{1, 1, 1, 1});
  for (double v : ev) CHECK(v > 0.0);
}

TEST_CASE("the all-negative region cannot meet the feasible set") {
  for (int n : {2, 5, 1000}) {
    const auto proof = check_s_minus_empty(ProblemConfig(n));
    CHECK(proof.empty);
    CHECK(!proof.witness.empty());
  }
}

}  // TEST_SUITE
