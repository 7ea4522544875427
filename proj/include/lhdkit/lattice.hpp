#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "lhdkit/criteria.hpp"
#include "lhdkit/design.hpp"

namespace lhd {

long long gcd_ll(long long a, long long b);
// Modular inverse of a mod n; throws ValidationError when gcd(a, n) != 1.
long long mod_inverse(long long a, long long n);

// P(n): positive integers smaller than n/2 that are coprime to n, ascending.
std::vector<long long> coprime_residues(long long n);

// A good-lattice-point LHD: points frac(i*v/n + delta/n + 1/(2n)), i = 0..n-1.
//
// The constructor reduces v mod n into {1..n-1} and delta mod n into {0..n-1},
// requires gcd(v_k, n) = 1, and canonicalizes mirrored generators: v_k > n/2
// is folded to (n - v_k, n - 1 - delta_k), which reflects the emitted points
// along axis k and leaves every criterion unchanged.
struct LatticeSpec {
  long long n = 0;
  std::vector<long long> v;
  std::vector<long long> delta;

  LatticeSpec(long long n_, std::vector<long long> v_, std::vector<long long> delta_);
  std::size_t dim() const { return v.size(); }
};

// Enumerates the n points of the lattice design, row i = index i.
Design lattice_points(const LatticeSpec& spec);

// O(nd) criterion via the single-loop difference-class formulas
// (WS, WA, WP, WD only). Independent of delta by construction.
double lattice_criterion(const LatticeSpec& spec, Criterion kind,
                         const CriterionOptions& opt = {});
double lattice_criterion(long long n, std::span<const long long> v, Criterion kind,
                         const CriterionOptions& opt = {});

// v_bar2 = v2 * v1^{-1} mod n, so that L(n, (v1,v2), delta) = L(n, (1,v_bar2), delta).
long long canonical_2d(long long n, long long v1, long long v2);

// Gauss-reduced basis of the integer lattice generated by (1, v_bar2) and
// (0, n). `a` is its shortest nonzero vector; ||a||/n is the wrap-around
// separation distance of the 2-D lattice design.
struct ReducedBasis {
  long long n = 0;
  std::array<long long, 2> a{};
  std::array<long long, 2> b{};
  double y = 0.0;    // a.b / ||a||^2, in [-1/2, 1/2]
  double z = 0.0;    // ||b - y a|| / ||a|| = n / ||a||^2, always > 0
  int iterations = 0;

  double norm_a() const;
  double norm_b() const;
  double separation() const;  // ||a|| / n
  double fill() const;        // torus covering radius of the projected lattice
};

ReducedBasis gaussian_reduce(long long n, long long v1, long long v2);

// Bivariate criteria summed over the d(d-1)/2 projections, each pair through
// gaussian_reduce: O(d^2 log n), never touching the n points.
double ws2_fast(long long n, std::span<const long long> v);
double wf2_fast(long long n, std::span<const long long> v);

// Per-pair term cache for WS2/WF2 (optionally plus the slice-0 sub-lattice
// terms): changing one generator entry recomputes only the d-1 pairs that
// touch it, O(d log n).
class ProjectionPairCache {
 public:
  // kind must be WS2 or WF2; slices > 1 adds the criterion of the n/slices
  // sub-lattice (the sliced objective).
  ProjectionPairCache(long long n, std::vector<long long> v, Criterion kind,
                      long long slices = 1);

  double value() const { return value_; }
  const std::vector<long long>& generator() const { return v_; }

  // Replaces v[k] by new_vk and returns the updated criterion. new_vk must be
  // coprime to n and must not duplicate another entry (new_vk == v[k] is a
  // no-op). Applying the inverse change restores the previous value exactly.
  double update(std::size_t k, long long new_vk);

 private:
  double pair_term_at(long long n, long long a, long long b) const;
  void recompute_value();

  long long n_;
  long long sub_n_;  // n / slices, 0 when slices == 1
  std::vector<long long> v_;
  Criterion kind_;
  std::vector<double> terms_;      // full-lattice pair terms, (k,l) k<l
  std::vector<double> sub_terms_;  // sub-lattice pair terms when sliced
  double value_ = 0.0;
};

// Slice j of a lattice design under s | n: the rows with index i = j (mod s).
// The points are produced bitwise-identically to filtering the parent
// enumeration; `shift` records the closed-form real-valued shift of the
// equivalent (n/s)-point lattice, informational only.
struct LatticeSlice {
  long long parent_n = 0;
  long long s = 0;
  long long j = 0;
  long long n = 0;                // n/s
  std::vector<long long> v;
  std::vector<long long> parent_delta;
  std::vector<double> shift;      // delta/s - 1/2 + 1/(2s) + j*v/s

  Design points() const;
};

LatticeSlice slice_extract(const LatticeSpec& spec, long long s, long long j);

// Criterion shared by every slice (difference classes depend only on n/s and
// v mod n/s). WS/WA/WP/WD via the fast formulas; WS2/WF2 via ws2/wf2_fast.
double slice_criterion(const LatticeSpec& spec, long long s, Criterion kind,
                       const CriterionOptions& opt = {});

}  // namespace lhd
