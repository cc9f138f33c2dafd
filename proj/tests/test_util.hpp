#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "polya/grid.hpp"

namespace polya::testing {

inline std::vector<double> random_cells(std::mt19937_64& rng, std::size_t n, bool integer_levels) {
  std::vector<double> v(n);
  if (integer_levels) {
    std::uniform_int_distribution<int> d(0, 3);
    for (auto& x : v) x = d(rng);
  } else {
    std::uniform_real_distribution<double> d(0.0, 3.0);
    for (auto& x : v) x = d(rng);
  }
  return v;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace polya::testing
