#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cdrosen {

struct VerifySuiteResult {
  std::string name;
  long long checks = 0;
  long long failures = 0;
  std::string detail;  // first failure, when any
  bool passed() const { return failures == 0 && checks > 0; }
};

struct VerifyReport {
  std::vector<VerifySuiteResult> suites;
  bool all_passed() const {
    for (const auto& suite : suites) {
      if (!suite.passed()) return false;
    }
    return !suites.empty();
  }
};

struct VerifyOptions {
  std::string scope = "all";  // a suite name, or "all"
  long long samples = 0;      // 0 keeps per-suite defaults
  std::uint64_t rng_seed = 42;
};

// Property suites over randomly sampled inputs: the Legendre equality, the
// complementary-function consistency, the stationary-point elimination
// identity, closed-form gradients against central finite differences,
// midpoint concavity and nonpositivity of the dual on the positive region,
// zero duality gap at enumerated critical points, emptiness of the
// all-negative region, and parallel-vs-serial evaluation agreement.
VerifyReport run_verification(const VerifyOptions& options);

std::vector<std::string> verification_suite_names();

}  // namespace cdrosen
