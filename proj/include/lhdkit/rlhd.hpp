#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lhdkit/design.hpp"
#include "lhdkit/lattice.hpp"

namespace lhd {

// Regularly repeated lattice design on the 1/n grid: the union over residues
// i = 0..m-1 of the axis-aligned grids { a : a = (i*v_k + delta_k) mod m } of
// step m, mapped to points (a + 1/2)/n. Every width-m/n window is an m-point
// local LHD, and windows at corners differing by a translation-lattice vector
// are exact translations of one another.
struct RlhdSpec {
  long long n = 0;  // global grid resolution
  long long m = 0;  // local design size; window width m/n
  std::vector<long long> v;      // gcd(v_k, m) = 1, stored mod m
  std::vector<long long> delta;  // stored mod m

  RlhdSpec(long long n_, long long m_, std::vector<long long> v_,
           std::vector<long long> delta_);
  std::size_t dim() const { return v.size(); }
};

// Maps the integer grid coordinates round(x*n - 0.5) of a design point to its
// row in the enumeration. Rows are grouped by residue, lexicographic in the
// per-axis grid index, so lookups are pure modular arithmetic.
class PointIndex {
 public:
  std::optional<std::size_t> lookup(std::span<const long long> coords) const;
  std::size_t size() const { return total_; }
  long long residue_count() const { return m_; }

 private:
  friend std::pair<Design, PointIndex> rlhd_points(const RlhdSpec&, std::uint64_t);
  struct ResidueBlock {
    std::vector<long long> base;    // per-axis residue in {0..m-1}
    std::vector<long long> count;   // grid points per axis
    std::vector<std::size_t> stride;
    std::size_t offset = 0;
  };
  long long n_ = 0, m_ = 0;
  std::size_t d_ = 0;
  std::vector<long long> v_inv_;  // v_k^{-1} mod m
  std::vector<long long> delta_;
  std::vector<ResidueBlock> blocks_;
  std::size_t total_ = 0;
};

// Exact point count without enumeration.
std::uint64_t rlhd_size(const RlhdSpec& spec);

// Average point count over uniform shifts: n^d * m^{-(d-1)}.
double expected_size(long long n, long long m, std::size_t d);

// Enumerates the design (rows sorted by (residue, grid index)) and its index.
// Rejects projected sizes above size_cap with the projected size in the
// message; use rlhd_visit for streaming beyond the cap.
std::pair<Design, PointIndex> rlhd_points(const RlhdSpec& spec,
                                          std::uint64_t size_cap = 10'000'000);

// Streaming enumeration in the same order; f(row_index, span<const double>).
void rlhd_visit(const RlhdSpec& spec,
                const std::function<void(std::size_t, std::span<const double>)>& f);

// The m points of the design inside [l, l + m/n] for an on-grid corner l,
// computed from the closed form (no global enumeration). Row t corresponds to
// local lattice index t.
Design local_window(const RlhdSpec& spec, std::span<const double> corner);
Design local_window_at(const RlhdSpec& spec, std::span<const long long> corner_coords);

// Membership of a corner displacement in the translation lattice: true iff
// delta_l * n = i*v (mod m) componentwise for a single residue i. Windows at
// corners differing by delta_l have identical configurations iff true.
bool translate_member(const RlhdSpec& spec, std::span<const double> delta_corner);

// Integer corner coordinates of the translation-lattice window whose center
// is nearest to x; per residue each axis is solved independently by clamped
// rounding, O(m d) total.
std::vector<long long> nearest_window_corner(const RlhdSpec& spec,
                                             std::span<const double> x);

// Window used for prediction: the nearest translation-lattice window whose
// box contains x, falling back to nearest_window_corner when no lattice
// window contains x (possible near the boundary unless m divides n).
std::vector<long long> prediction_window_corner(const RlhdSpec& spec,
                                                std::span<const double> x);

}  // namespace lhd
