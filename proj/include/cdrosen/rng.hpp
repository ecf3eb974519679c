#pragma once

#include <cstdint>
#include <random>

namespace cdrosen {

// mt19937_64 with hand-rolled uniforms. std::uniform_real_distribution is
// implementation-defined, which would break byte-level reproducibility of
// result files across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // [0, 1)
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace cdrosen
