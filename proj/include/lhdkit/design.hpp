#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lhdkit/errors.hpp"

namespace lhd {

// Space-filling criteria. All are lower-is-better.
//
//   WS  reciprocal wrap-around separation distance
//   WA  approximated wrap-around separation distance (power sum, exponent 50)
//   WP  wrap-around projective separation distance
//   WD  wrap-around L2 discrepancy
//   RS  reciprocal Euclidean separation distance
//   AS  approximated Euclidean separation distance
//   WS2 / RS2 / WF2  sums of WS / RS / wrap-around fill distance over the
//                    d(d-1)/2 bivariate projections
enum class Criterion { WS, WA, WP, WD, RS, AS, WS2, RS2, WF2 };

const char* to_string(Criterion kind);
Criterion criterion_from_string(std::string_view name);
bool is_projection_criterion(Criterion kind);  // WS2, RS2, WF2

struct Provenance {
  std::string generator;  // "lhd", "olhd", "llhd", "plhd", "sliced-llhd", "rlhd"
  std::optional<std::uint64_t> seed;
  std::string note;
};

// An n x d point set in [0,1]^d, row-major.
class Design {
 public:
  Design() = default;
  Design(std::size_t n, std::size_t d) : n_(n), d_(d), data_(n * d, 0.0) {}
  Design(std::size_t n, std::size_t d, std::vector<double> data)
      : n_(n), d_(d), data_(std::move(data)) {
    if (data_.size() != n_ * d_) {
      throw ValidationError("design data size does not match n*d");
    }
  }

  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }

  double operator()(std::size_t i, std::size_t k) const { return data_[i * d_ + k]; }
  double& operator()(std::size_t i, std::size_t k) { return data_[i * d_ + k]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * d_, d_};
  }
  const std::vector<double>& data() const { return data_; }

  std::vector<double> column(std::size_t k) const;

  // Two-column projection, used by the bivariate criteria.
  Design project(std::size_t k, std::size_t l) const;

  Provenance provenance;

 private:
  std::size_t n_ = 0, d_ = 0;
  std::vector<double> data_;
};

// Scalar wrap-around (torus) distance: |z - round(z)|, in [0, 0.5].
inline double wrap_dist_1d(double z) { return std::abs(z - std::nearbyint(z)); }

// Squared toroidal / Euclidean distances between rows.
double wrap_dist_sq(std::span<const double> a, std::span<const double> b);
double euclid_dist_sq(std::span<const double> a, std::span<const double> b);

// True iff every column, sorted, equals {(2i-1)/(2n)} within tol per entry.
bool validate_lhd(const Design& design, double tol = 1e-12);

// True iff every axis has exactly one point in each of `strata` equal bins
// of [lo, hi) per coordinate. With the design's own n this is the
// (non-centered) Latin hypercube property; it is what slices of a lattice
// design satisfy.
bool is_stratified(const Design& design, std::size_t strata,
                   std::span<const double> lo = {}, std::span<const double> hi = {});

// Throws ValidationError if any coordinate is outside [0,1] or non-finite.
void require_unit_cube(const Design& design);

namespace stats {
// Number of full lattice point enumerations performed by lattice_points()
// since the last reset. Search code must never enumerate; tests assert on it.
std::uint64_t lattice_enumerations();
void reset_lattice_enumerations();
}  // namespace stats

}  // namespace lhd
