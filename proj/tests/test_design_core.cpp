#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "helpers.hpp"
#include "lhdkit/criteria.hpp"
#include "lhdkit/lattice.hpp"
#include "lhdkit/optimize.hpp"

using namespace lhd;
using lhd::testing::random_unit_design;

namespace {

Design design_1d(std::initializer_list<double> vals) {
  Design x(vals.size(), 1);
  std::size_t i = 0;
  for (double v : vals) x(i++, 0) = v;
  return x;
}

}  // namespace

TEST_SUITE("design_core") {

TEST_CASE("wrap distance scalar") {
  CHECK(wrap_dist_1d(0.5) == doctest::Approx(0.5));
  CHECK(wrap_dist_1d(0.9) == doctest::Approx(0.1));
  CHECK(wrap_dist_1d(-0.3) == doctest::Approx(0.3));

  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const double z = (rng.uniform() - 0.5) * 20.0;
    const double w = wrap_dist_1d(z);
    CHECK(w >= 0.0);
    CHECK(w <= 0.5);
    CHECK(wrap_dist_1d(z + 3.0) == doctest::Approx(w).epsilon(1e-12));  // periodic
    CHECK(wrap_dist_1d(-z) == doctest::Approx(w).epsilon(1e-12));       // even
  }
}

TEST_CASE("validate_lhd") {
  CHECK(validate_lhd(design_1d({0.25, 0.75})));
  CHECK_FALSE(validate_lhd(design_1d({0.25, 0.25})));
  const LatticeSpec spec(5, {1, 2}, {0, 0});
  CHECK(validate_lhd(lattice_points(spec)));
}

TEST_CASE("criterion_full worked examples") {
  const Design two = design_1d({0.25, 0.75});
  // WD: sum of products 5.5 -> sqrt(5.5/4 - 4/3)
  CHECK(criterion_full(two, Criterion::WD) ==
        doctest::Approx(std::sqrt(5.5 / 4.0 - 4.0 / 3.0)).epsilon(1e-12));
  CHECK(criterion_full(two, Criterion::WA) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(criterion_full(two, Criterion::WP) == doctest::Approx(4.0).epsilon(1e-12));

  // WS of L(5,(1,2)): brute force over the 10 pairs gives min dist sqrt(0.2)
  const Design pts = lattice_points(LatticeSpec(5, {1, 2}, {0, 0}));
  double minsq = 1e300;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = i + 1; j < 5; ++j) {
      minsq = std::min(minsq, wrap_dist_sq(pts.row(i), pts.row(j)));
    }
  }
  CHECK(minsq == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(criterion_full(pts, Criterion::WS) ==
        doctest::Approx(1.0 / std::sqrt(0.2)).epsilon(1e-12));
}

TEST_CASE("lattice point example rows") {
  const Design pts = lattice_points(LatticeSpec(5, {1, 2}, {0, 0}));
  const double want[5][2] = {{0.1, 0.1}, {0.3, 0.5}, {0.5, 0.9}, {0.7, 0.3}, {0.9, 0.7}};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(pts(i, 0) == doctest::Approx(want[i][0]).epsilon(1e-14));
    CHECK(pts(i, 1) == doctest::Approx(want[i][1]).epsilon(1e-14));
  }
}

TEST_CASE("coincident points yield infinity, not errors") {
  Design x(3, 2);
  x(0, 0) = 0.2; x(0, 1) = 0.4;
  x(1, 0) = 0.2; x(1, 1) = 0.4;  // full duplicate of row 0
  x(2, 0) = 0.7; x(2, 1) = 0.9;
  CHECK(std::isinf(criterion_full(x, Criterion::WS)));
  CHECK(std::isinf(criterion_full(x, Criterion::WA)));
  CHECK(std::isinf(criterion_full(x, Criterion::RS)));
  CHECK(std::isinf(criterion_full(x, Criterion::WP)));
  CHECK(std::isfinite(criterion_full(x, Criterion::WD)));

  // one shared coordinate: WP infinite, WS finite
  Design y(2, 2);
  y(0, 0) = 0.2; y(0, 1) = 0.4;
  y(1, 0) = 0.2; y(1, 1) = 0.9;
  CHECK(std::isinf(criterion_full(y, Criterion::WP)));
  CHECK(std::isfinite(criterion_full(y, Criterion::WS)));
}

TEST_CASE("rejects designs outside the unit cube") {
  Design x(2, 1);
  x(0, 0) = 0.5;
  x(1, 0) = 1.5;
  CHECK_THROWS_AS(criterion_full(x, Criterion::WD), ValidationError);
}

TEST_CASE("naive oracle agreement on random designs") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Design x = random_unit_design(12, 3, 100 + s);
    CHECK(lhd::testing::rel_err(criterion_full(x, Criterion::WS),
                                lhd::testing::naive_ws(x)) < 1e-12);
    CHECK(lhd::testing::rel_err(criterion_full(x, Criterion::WD),
                                lhd::testing::naive_wd(x)) < 1e-11);
  }
}

TEST_CASE("wrap separation dominates Euclidean separation reciprocal") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Design x = random_lhd(24, 3, 500 + s);
    CHECK(criterion_full(x, Criterion::WS) >= criterion_full(x, Criterion::RS));
  }
}

TEST_CASE("permutation invariance of criteria") {
  Rng rng(42);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Design x = random_unit_design(14, 3, 900 + s);
    std::vector<std::size_t> rows(x.n()), cols(x.d());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    rng.shuffle(rows);
    rng.shuffle(cols);
    Design y(x.n(), x.d());
    for (std::size_t i = 0; i < x.n(); ++i) {
      for (std::size_t k = 0; k < x.d(); ++k) y(i, k) = x(rows[i], cols[k]);
    }
    for (Criterion kind : {Criterion::WS, Criterion::WA, Criterion::WP, Criterion::WD,
                           Criterion::RS, Criterion::AS, Criterion::WS2, Criterion::RS2}) {
      const double a = criterion_full(x, kind);
      const double b = criterion_full(y, kind);
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("wrap-shift invariance of wrap criteria") {
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const Design x = random_unit_design(10, 3, 2000 + static_cast<std::uint64_t>(t));
    Design shifted(x.n(), x.d());
    std::vector<double> s(x.d());
    for (auto& sk : s) sk = rng.uniform();
    for (std::size_t i = 0; i < x.n(); ++i) {
      for (std::size_t k = 0; k < x.d(); ++k) {
        double v = x(i, k) + s[k];
        v -= std::floor(v);
        shifted(i, k) = v;
      }
    }
    for (Criterion kind : {Criterion::WS, Criterion::WA, Criterion::WP, Criterion::WD}) {
      const double a = criterion_full(x, kind);
      const double b = criterion_full(shifted, kind);
      CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("WD kernel identity 1.25 + w(u+1/2)^2 = 1.5 - |u|(1-|u|)") {
  Rng rng(33);
  for (int t = 0; t < 1000; ++t) {
    const double u = rng.uniform() * 2.0 - 1.0;
    const double lhs = 1.25 + wrap_dist_1d(u + 0.5) * wrap_dist_1d(u + 0.5);
    const double rhs = 1.5 - std::abs(u) * (1.0 - std::abs(u));
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }
}

TEST_CASE("log-domain products agree with direct products at the threshold") {
  const Design x = random_lhd(8, 21, 77);  // d = 21 takes the log path by default
  CriterionOptions direct;
  direct.log_domain_dim = 100;  // force direct products
  for (Criterion kind : {Criterion::WP, Criterion::WD}) {
    const double a = criterion_full(x, kind);
    const double b = criterion_full(x, kind, direct);
    CHECK(lhd::testing::rel_err(a, b) < 1e-9);
  }
  // exactly at d = 20 both option sets take the direct path
  const Design y = random_lhd(8, 20, 78);
  CHECK(criterion_full(y, Criterion::WP) == criterion_full(y, Criterion::WP, direct));
}

TEST_CASE("fill distance oracle: single points") {
  Design one(1, 2);
  one(0, 0) = 0.5;
  one(0, 1) = 0.5;
  const double w = fill_distance_grid(one, 64, true);
  CHECK(std::abs(w - std::sqrt(0.5)) <= std::sqrt(2.0) / 128.0 + 1e-12);

  const double f = fill_distance_grid(design_1d({0.5}), 64, false);
  CHECK(std::abs(f - 0.5) <= 0.5 / 64.0 + 1e-12);
}

TEST_CASE("fill distance oracle: lattice matches closed form") {
  const Design pts = lattice_points(LatticeSpec(5, {1, 2}, {0, 0}));
  const double grid = fill_distance_grid(pts, 500, true);
  CHECK(std::abs(grid - 0.31622776601683794) <= std::sqrt(2.0) / 1000.0 + 1e-12);
}

TEST_CASE("fill distance bucket accelerator equals direct scan") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Design x = random_unit_design(20, 2, 3000 + s);
    for (bool wrap : {true, false}) {
      const double fast = fill_distance_grid(x, 32, wrap);
      double worst = 0.0;
      const std::size_t nodes = wrap ? 32 : 33;
      for (std::size_t a = 0; a < nodes; ++a) {
        for (std::size_t b = 0; b < nodes; ++b) {
          const double q[2] = {a / 32.0, b / 32.0};
          double best = 1e300;
          for (std::size_t i = 0; i < x.n(); ++i) {
            const double sq = wrap ? wrap_dist_sq({q, 2}, x.row(i))
                                   : euclid_dist_sq({q, 2}, x.row(i));
            best = std::min(best, sq);
          }
          worst = std::max(worst, best);
        }
      }
      CHECK(fast == doctest::Approx(std::sqrt(worst)).epsilon(1e-12));
    }
  }
}

TEST_CASE("fill distance rejects unsupported inputs") {
  const Design x = random_unit_design(4, 4, 1);
  CHECK_THROWS_AS(fill_distance_grid(x, 64, true), ValidationError);
  const Design y = random_unit_design(4, 2, 2);
  CHECK_THROWS_AS(fill_distance_grid(y, 8, true), ValidationError);
}

TEST_CASE("stratification helper") {
  CHECK(is_stratified(design_1d({0.125, 0.625}), 2, {}, {}));
  CHECK_FALSE(is_stratified(design_1d({0.125, 0.375}), 2, {}, {}));
}

}  // TEST_SUITE
