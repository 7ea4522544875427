#pragma once

#include <cmath>
#include <vector>

#include "lhdkit/design.hpp"
#include "lhdkit/rng.hpp"

namespace lhd::testing {

inline Design random_unit_design(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Design x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) x(i, k) = rng.uniform();
  }
  return x;
}

// Naive pairwise evaluations written independently of criterion_full
// (no factoring, no log-domain switch); cross-validation oracles.
inline double naive_ws(const Design& x) {
  double minsq = 1e300;
  for (std::size_t i = 0; i < x.n(); ++i) {
    for (std::size_t j = 0; j < x.n(); ++j) {
      if (i == j) continue;
      double s = 0.0;
      for (std::size_t k = 0; k < x.d(); ++k) {
        const double z = x(i, k) - x(j, k);
        const double w = std::abs(z - std::round(z));
        s += w * w;
      }
      if (s < minsq) minsq = s;
    }
  }
  return 1.0 / std::sqrt(minsq);
}

inline double naive_wd(const Design& x) {
  const double n = static_cast<double>(x.n());
  double total = 0.0;
  for (std::size_t i = 0; i < x.n(); ++i) {
    for (std::size_t j = 0; j < x.n(); ++j) {
      double prod = 1.0;
      for (std::size_t k = 0; k < x.d(); ++k) {
        const double z = x(i, k) - x(j, k) + 0.5;
        const double w = std::abs(z - std::round(z));
        prod *= 1.25 + w * w;
      }
      total += prod;
    }
  }
  return std::sqrt(total / (n * n) - std::pow(4.0 / 3.0, static_cast<double>(x.d())));
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace lhd::testing
