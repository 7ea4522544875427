#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "helpers.hpp"
#include "lhdkit/criteria.hpp"
#include "lhdkit/rlhd.hpp"

using namespace lhd;

namespace {

const RlhdSpec& figure_spec() {
  static const RlhdSpec spec(50, 18, {1, 7}, {13, 12});
  return spec;
}

std::vector<long long> grid_coords(const Design& x, std::size_t row, long long n) {
  std::vector<long long> c(x.d());
  for (std::size_t k = 0; k < x.d(); ++k) {
    c[k] = std::llround(x(row, k) * static_cast<double>(n) - 0.5);
  }
  return c;
}

// Independent membership oracle straight from the residue congruences.
bool member_oracle(const RlhdSpec& spec, const std::vector<long long>& coords) {
  const long long i =
      ((coords[0] - spec.delta[0]) % spec.m + spec.m) % spec.m *
      mod_inverse(spec.v[0], spec.m) % spec.m;
  for (std::size_t k = 0; k < spec.dim(); ++k) {
    if (((i * spec.v[k] + spec.delta[k] - coords[k]) % spec.m + spec.m) % spec.m != 0) {
      return false;
    }
  }
  return true;
}

std::set<std::vector<long long>> enumerate_oracle(const RlhdSpec& spec) {
  std::set<std::vector<long long>> pts;
  std::vector<long long> c(spec.dim(), 0);
  for (;;) {
    if (member_oracle(spec, c)) pts.insert(c);
    std::size_t k = 0;
    while (k < spec.dim() && c[k] == spec.n - 1) c[k++] = 0;
    if (k == spec.dim()) break;
    ++c[k];
  }
  return pts;
}

}  // namespace

TEST_SUITE("rlhd") {

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(RlhdSpec(10, 1, {1}, {0}), ValidationError);
  CHECK_THROWS_AS(RlhdSpec(5, 6, {1}, {0}), ValidationError);
  CHECK_THROWS_AS(RlhdSpec(10, 4, {2}, {0}), ValidationError);  // gcd(2,4)=2
}

TEST_CASE("n = m reduces to the plain lattice design") {
  const RlhdSpec spec(5, 5, {1, 2}, {3, 1});
  const auto [pts, index] = rlhd_points(spec);
  const Design lat = lattice_points(LatticeSpec(5, {1, 2}, {3, 1}));
  CHECK(pts.data() == lat.data());
  CHECK(index.size() == 5);
}

TEST_CASE("1-D degenerate case fills every grid cell") {
  const RlhdSpec spec(4, 2, {1}, {0});
  const auto [pts, index] = rlhd_points(spec);
  REQUIRE(pts.n() == 4);
  std::vector<double> got(pts.data());
  std::sort(got.begin(), got.end());
  const std::vector<double> want{0.125, 0.375, 0.625, 0.875};
  for (std::size_t i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));
}

TEST_CASE("figure spec: size and full enumeration oracle") {
  const auto [pts, index] = rlhd_points(figure_spec());
  CHECK(pts.n() == 139);  // within the expected {138, 139, 140}
  CHECK(rlhd_size(figure_spec()) == 139);
  CHECK(index.size() == 139);

  const auto oracle = enumerate_oracle(figure_spec());
  REQUIRE(oracle.size() == 139);
  std::set<std::vector<long long>> got;
  for (std::size_t r = 0; r < pts.n(); ++r) got.insert(grid_coords(pts, r, 50));
  CHECK(got == oracle);
}

TEST_CASE("point index is bijective with the rows") {
  const auto [pts, index] = rlhd_points(figure_spec());
  for (std::size_t r = 0; r < pts.n(); ++r) {
    const auto got = index.lookup(grid_coords(pts, r, 50));
    REQUIRE(got.has_value());
    CHECK(*got == r);
  }
  // non-members miss
  Rng rng(5);
  int misses = 0;
  for (int t = 0; t < 200; ++t) {
    std::vector<long long> c{static_cast<long long>(rng.below(50)),
                             static_cast<long long>(rng.below(50))};
    const bool member = member_oracle(figure_spec(), c);
    CHECK(index.lookup(c).has_value() == member);
    misses += member ? 0 : 1;
  }
  CHECK(misses > 0);
}

TEST_CASE("size cap rejection names the projected size") {
  const RlhdSpec spec(1000, 2, {1, 1, 1, 1}, {0, 0, 0, 0});
  try {
    rlhd_points(spec);
    FAIL("expected a size-cap rejection");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("125000000000") != std::string::npos);
  }
}

TEST_CASE("streaming enumeration matches stored enumeration") {
  const auto [pts, index] = rlhd_points(figure_spec());
  std::size_t count = 0;
  rlhd_visit(figure_spec(), [&](std::size_t row, std::span<const double> p) {
    REQUIRE(row < pts.n());
    for (std::size_t k = 0; k < 2; ++k) CHECK(p[k] == pts(row, k));
    ++count;
  });
  CHECK(count == pts.n());
}

TEST_CASE("local windows equal the filtered enumeration exactly") {
  const RlhdSpec& spec = figure_spec();
  const auto [pts, index] = rlhd_points(spec);
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    std::vector<long long> L{static_cast<long long>(rng.below(33)),
                             static_cast<long long>(rng.below(33))};
    const Design win = local_window_at(spec, L);
    REQUIRE(win.n() == 18);

    // brute-force intersection with the closed box, bitwise comparison
    std::vector<std::vector<double>> expect;
    for (std::size_t r = 0; r < pts.n(); ++r) {
      const auto c = grid_coords(pts, r, 50);
      if (c[0] >= L[0] && c[0] < L[0] + 18 && c[1] >= L[1] && c[1] < L[1] + 18) {
        expect.emplace_back(pts.row(r).begin(), pts.row(r).end());
      }
    }
    std::vector<std::vector<double>> got;
    for (std::size_t r = 0; r < win.n(); ++r) {
      got.emplace_back(win.row(r).begin(), win.row(r).end());
    }
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());
    CHECK(got == expect);

    // each window is an m-point local LHD in its box
    const std::vector<double> lo{L[0] / 50.0, L[1] / 50.0};
    const std::vector<double> hi{lo[0] + 18.0 / 50.0, lo[1] + 18.0 / 50.0};
    CHECK(is_stratified(win, 18, lo, hi));
  }
}

TEST_CASE("corner validation") {
  const RlhdSpec& spec = figure_spec();
  const std::vector<double> off_grid{0.01 / 3.0, 0.0};
  CHECK_THROWS_AS(local_window(spec, off_grid), ValidationError);
  const std::vector<double> out_of_range{0.9, 0.0};  // 0.9 > 1 - 18/50
  CHECK_THROWS_AS(local_window(spec, out_of_range), ValidationError);
}

TEST_CASE("translate membership worked examples") {
  const RlhdSpec& spec = figure_spec();
  CHECK(translate_member(spec, std::vector<double>{0.0, 0.0}));
  CHECK(translate_member(spec, std::vector<double>{1.0 / 50.0, 7.0 / 50.0}));
  CHECK_FALSE(translate_member(spec, std::vector<double>{1.0 / 50.0, 0.0}));
}

TEST_CASE("translation law: identical configurations iff member") {
  const RlhdSpec& spec = figure_spec();
  Rng rng(71);
  int members = 0, nonmembers = 0;
  while (members < 10 || nonmembers < 10) {
    std::vector<long long> A{static_cast<long long>(rng.below(33)),
                             static_cast<long long>(rng.below(33))};
    std::vector<long long> B{static_cast<long long>(rng.below(33)),
                             static_cast<long long>(rng.below(33))};
    const std::vector<double> diff{(A[0] - B[0]) / 50.0, (A[1] - B[1]) / 50.0};
    const bool member = translate_member(spec, diff);

    auto rel_config = [&](const std::vector<long long>& L) {
      const Design win = local_window_at(spec, L);
      std::set<std::vector<long long>> rel;
      for (std::size_t r = 0; r < win.n(); ++r) {
        auto c = grid_coords(win, r, 50);
        for (std::size_t k = 0; k < 2; ++k) c[k] -= L[k];
        rel.insert(c);
      }
      return rel;
    };
    const bool equal = rel_config(A) == rel_config(B);
    CHECK(equal == member);
    (member ? members : nonmembers) += 1;
  }
}

TEST_CASE("nearest window corner matches the exhaustive minimizer") {
  const RlhdSpec& spec = figure_spec();

  // all translation-lattice corners, residue by residue
  std::vector<std::vector<long long>> corners;
  for (long long i = 0; i < 18; ++i) {
    std::vector<std::vector<long long>> axis(2);
    bool ok = true;
    for (std::size_t k = 0; k < 2; ++k) {
      const long long r = (i * spec.v[k]) % 18;
      for (long long c = r; c <= 32; c += 18) axis[k].push_back(c);
      if (axis[k].empty()) ok = false;
    }
    if (!ok) continue;
    for (long long a : axis[0]) {
      for (long long b : axis[1]) corners.push_back({a, b});
    }
  }
  REQUIRE(!corners.empty());

  auto center_dist_sq = [&](const std::vector<long long>& C, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      const double g = (static_cast<double>(C[k]) + 9.0) / 50.0 - x[k];
      s += g * g;
    }
    return s;
  };

  Rng rng(44);
  for (int t = 0; t < 200; ++t) {
    const std::vector<double> x{rng.uniform(), rng.uniform()};
    const std::vector<long long> got = nearest_window_corner(spec, x);
    REQUIRE(got.size() == 2);
    double best = 1e300;
    for (const auto& C : corners) best = std::min(best, center_dist_sq(C, x));
    CHECK(center_dist_sq(got, x) == doctest::Approx(best).epsilon(1e-12));
  }

  // exactly at a window center
  const std::vector<long long>& C0 = corners[7];
  const std::vector<double> center{(C0[0] + 9.0) / 50.0, (C0[1] + 9.0) / 50.0};
  CHECK(nearest_window_corner(spec, center) == C0);

  // clamping at the upper corner
  const std::vector<double> ones{1.0, 1.0};
  const auto top = nearest_window_corner(spec, ones);
  for (long long c : top) CHECK(c <= 32);
}

TEST_CASE("expected size, including the exact shift averages") {
  CHECK(expected_size(4, 2, 2) == doctest::Approx(8.0));
  CHECK(expected_size(5, 5, 1) == doctest::Approx(5.0));  // n = m degenerate
  CHECK(expected_size(50, 18, 2) == doctest::Approx(2500.0 / 18.0).epsilon(1e-12));

  // n=4, m=2, d=2: mean over all 4 shifts is exactly 8
  double total = 0.0;
  for (long long d1 = 0; d1 < 2; ++d1) {
    for (long long d2 = 0; d2 < 2; ++d2) {
      total += static_cast<double>(rlhd_size(RlhdSpec(4, 2, {1, 1}, {d1, d2})));
    }
  }
  CHECK(total / 4.0 == doctest::Approx(8.0));

  // n=12, m=3, d=2: mean over all 9 shifts is exactly 48
  total = 0.0;
  for (long long d1 = 0; d1 < 3; ++d1) {
    for (long long d2 = 0; d2 < 3; ++d2) {
      total += static_cast<double>(rlhd_size(RlhdSpec(12, 3, {1, 2}, {d1, d2})));
    }
  }
  CHECK(total / 9.0 == doctest::Approx(48.0));
}

TEST_CASE("size accounting bound for random specs") {
  Rng rng(2024);
  for (int t = 0; t < 40; ++t) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng.below(2));
    const long long m = 3 + static_cast<long long>(rng.below(10));
    const long long n = m * (4 * static_cast<long long>(d)) +
                        static_cast<long long>(rng.below(static_cast<std::uint64_t>(m)));
    std::vector<long long> v(d), delta(d);
    for (std::size_t k = 0; k < d; ++k) {
      for (;;) {
        v[k] = 1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(m - 1)));
        if (std::gcd(v[k], m) == 1) break;
      }
      delta[k] = static_cast<long long>(rng.below(static_cast<std::uint64_t>(m)));
    }
    const RlhdSpec spec(n, m, v, delta);
    const double size = static_cast<double>(rlhd_size(spec));
    const double expect = expected_size(n, m, d);
    const double ratio = static_cast<double>(n) / static_cast<double>(m);
    CHECK(std::abs(size - expect) <=
          static_cast<double>(d) * std::pow(ratio, static_cast<double>(d) - 1.0));
  }
}

}  // TEST_SUITE
