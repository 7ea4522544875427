#pragma once

#include <cstddef>

#include "lhdkit/design.hpp"

namespace lhd {

struct CriterionOptions {
  // Exponent of the WA/AS power sums. 50 is the conventional choice.
  double power_exponent = 50.0;
  // Per-pair products in WP and WD switch to log-domain accumulation above
  // this dimension; (w^-2)^d overflows double precision for small w.
  std::size_t log_domain_dim = 20;
  // Grid resolution used per projection when criterion_full evaluates WF2.
  std::size_t wf2_resolution = 256;
};

// Definitional O(n^2 d) criterion evaluation over all pairs; the ground-truth
// oracle for the lattice shortcut formulas. WS/WP (and RS/AS) return +infinity
// when points coincide on all (WP: any) relevant coordinates; that is a valid
// comparable value, not an error.
double criterion_full(const Design& design, Criterion kind,
                      const CriterionOptions& opt = {});

// Grid-search oracle for the fill distance (covering radius): maximum over a
// resolution^d grid of the distance to the nearest design point, within
// sqrt(d)/(2*resolution) of the true supremum. Restricted to d <= 3.
double fill_distance_grid(const Design& design, std::size_t resolution, bool wrap);

}  // namespace lhd
