#pragma once

// Test-only reference computations. Nothing here calls into the library code
// paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using Real = boost::multiprecision::cpp_bin_float_50;  // 166-bit mantissa

/// sum_{n>=1} s^(2n) gamma^(2^(n-1)), summed in 50-digit arithmetic until the
/// terms stop registering.
inline Real series_sum(double gamma_d, double s_d) {
  const Real gamma(gamma_d);
  const Real s(s_d);
  Real total = 0;
  Real g_pow = gamma;  // gamma^(2^(n-1))
  Real s_pow = s * s;  // s^(2n)
  for (int n = 1; n <= 200; ++n) {
    const Real term = s_pow * g_pow;
    total += term;
    if (n > 4 && term < total * Real("1e-45")) break;
    g_pow *= g_pow;
    s_pow *= s * s;
  }
  return total;
}

/// Directed sup-min over a dense distance matrix, with explicit index lists.
inline double directed(const std::vector<double>& d, std::size_t n, const std::vector<std::size_t>& a,
                       const std::vector<std::size_t>& b) {
  double sup = 0.0;
  for (auto i : a) {
    double inf = INFINITY;
    for (auto j : b) inf = std::min(inf, d[i * n + j]);
    sup = std::max(sup, inf);
  }
  return sup;
}

/// Fixed points of a table map: every id u with u listed in its own image.
inline std::vector<std::size_t> table_fixed_points(const std::vector<std::vector<std::size_t>>& images) {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < images.size(); ++u)
    if (std::find(images[u].begin(), images[u].end(), u) != images[u].end()) out.push_back(u);
  return out;
}

/// Independent splitmix64 for test-side randomness.
struct Rng {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
};

}  // namespace oracle
