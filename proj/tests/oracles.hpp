// Test-only numerical oracles, independent of the library code paths they
// check.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace testing_oracles {

using Vec = std::vector<double>;

inline double rel_err(double a, double b) {
  return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

// Central finite differences with per-coordinate step h_j = scale * max(1, |x_j|).
inline Vec central_difference_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                                       double scale = 1e-6) {
  Vec g(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double h = scale * std::max(1.0, std::fabs(x[j]));
    Vec lo = x, hi = x;
    lo[j] -= h;
    hi[j] += h;
    g[j] = (f(hi) - f(lo)) / (2.0 * h);
  }
  return g;
}

inline double inf_norm(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

inline double inf_dist(const Vec& v, double target) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x - target));
  return m;
}

}  // namespace testing_oracles
