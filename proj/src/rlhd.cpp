#include "lhdkit/rlhd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

namespace lhd {

RlhdSpec::RlhdSpec(long long n_, long long m_, std::vector<long long> v_,
                   std::vector<long long> delta_)
    : n(n_), m(m_), v(std::move(v_)), delta(std::move(delta_)) {
  if (m < 2) throw ValidationError("rlhd requires m >= 2");
  if (n < m) throw ValidationError("rlhd requires n >= m");
  if (v.empty()) throw ValidationError("rlhd generator is empty");
  if (delta.empty()) delta.assign(v.size(), 0);
  if (delta.size() != v.size()) {
    throw ValidationError("generator and shift dimension mismatch");
  }
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = ((v[k] % m) + m) % m;
    delta[k] = ((delta[k] % m) + m) % m;
    if (v[k] == 0 || std::gcd(v[k], m) != 1) {
      throw ValidationError("rlhd generator entry " + std::to_string(k + 1) +
                            " is not coprime to m");
    }
  }
}

namespace {

// Points on {0..n-1} congruent to r mod m.
long long residue_count(long long n, long long m, long long r) {
  return (n - 1 - r) / m + 1;
}

}  // namespace

std::uint64_t rlhd_size(const RlhdSpec& spec) {
  const std::size_t d = spec.dim();
  unsigned __int128 total = 0;
  const unsigned __int128 cap = static_cast<unsigned __int128>(1) << 90;
  for (long long i = 0; i < spec.m; ++i) {
    unsigned __int128 prod = 1;
    for (std::size_t k = 0; k < d; ++k) {
      const long long r = (i * spec.v[k] + spec.delta[k]) % spec.m;
      prod *= static_cast<unsigned __int128>(residue_count(spec.n, spec.m, r));
      if (prod > cap) return std::numeric_limits<std::uint64_t>::max();
    }
    total += prod;
    if (total > cap) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(total);
}

double expected_size(long long n, long long m, std::size_t d) {
  if (m < 2 || n < m) throw ValidationError("expected_size requires n >= m >= 2");
  const double ratio = static_cast<double>(n) / static_cast<double>(m);
  return static_cast<double>(n) * std::pow(ratio, static_cast<double>(d) - 1.0);
}

std::optional<std::size_t> PointIndex::lookup(std::span<const long long> coords) const {
  if (coords.size() != d_) return std::nullopt;
  // The first axis pins the residue: i = (c0 - delta0) * v0^{-1} mod m.
  const long long c0 = coords[0];
  if (c0 < 0 || c0 >= n_) return std::nullopt;
  const long long i = (((c0 - delta_[0]) % m_ + m_) % m_) * v_inv_[0] % m_;
  const ResidueBlock& blk = blocks_[static_cast<std::size_t>(i)];
  std::size_t row = blk.offset;
  for (std::size_t k = 0; k < d_; ++k) {
    const long long c = coords[k];
    if (c < 0 || c >= n_) return std::nullopt;
    const long long rel = c - blk.base[k];
    if (rel < 0 || rel % m_ != 0) return std::nullopt;
    const long long z = rel / m_;
    if (z >= blk.count[k]) return std::nullopt;
    row += static_cast<std::size_t>(z) * blk.stride[k];
  }
  return row;
}

std::pair<Design, PointIndex> rlhd_points(const RlhdSpec& spec, std::uint64_t size_cap) {
  const std::uint64_t total = rlhd_size(spec);
  if (total > size_cap) {
    throw ValidationError("rlhd enumeration of " + std::to_string(total) +
                          " points exceeds the cap of " + std::to_string(size_cap) +
                          "; use rlhd_visit for streaming");
  }
  const std::size_t d = spec.dim();

  PointIndex index;
  index.n_ = spec.n;
  index.m_ = spec.m;
  index.d_ = d;
  index.delta_ = spec.delta;
  index.v_inv_.resize(d);
  for (std::size_t k = 0; k < d; ++k) index.v_inv_[k] = mod_inverse(spec.v[k], spec.m);
  index.blocks_.resize(static_cast<std::size_t>(spec.m));

  Design x(static_cast<std::size_t>(total), d);
  std::size_t row = 0;
  std::vector<long long> z(d);
  for (long long i = 0; i < spec.m; ++i) {
    auto& blk = index.blocks_[static_cast<std::size_t>(i)];
    blk.base.resize(d);
    blk.count.resize(d);
    blk.stride.resize(d);
    blk.offset = row;
    for (std::size_t k = 0; k < d; ++k) {
      blk.base[k] = (i * spec.v[k] + spec.delta[k]) % spec.m;
      blk.count[k] = residue_count(spec.n, spec.m, blk.base[k]);
    }
    // row-major: axis 0 outermost
    std::size_t stride = 1;
    for (std::size_t k = d; k-- > 0;) {
      blk.stride[k] = stride;
      stride *= static_cast<std::size_t>(blk.count[k]);
    }
    std::fill(z.begin(), z.end(), 0);
    const std::size_t block_points = stride;
    for (std::size_t p = 0; p < block_points; ++p, ++row) {
      for (std::size_t k = 0; k < d; ++k) {
        const long long c = blk.base[k] + z[k] * spec.m;
        x(row, k) = (static_cast<double>(c) + 0.5) / static_cast<double>(spec.n);
      }
      // advance the innermost axis first
      std::size_t k = d;
      while (k-- > 0) {
        if (++z[k] < blk.count[k]) break;
        z[k] = 0;
      }
    }
  }
  index.total_ = row;
  x.provenance.generator = "rlhd";
  return {std::move(x), std::move(index)};
}

void rlhd_visit(const RlhdSpec& spec,
                const std::function<void(std::size_t, std::span<const double>)>& f) {
  const std::size_t d = spec.dim();
  std::vector<long long> z(d), base(d), count(d);
  std::vector<double> pt(d);
  std::size_t row = 0;
  for (long long i = 0; i < spec.m; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      base[k] = (i * spec.v[k] + spec.delta[k]) % spec.m;
      count[k] = residue_count(spec.n, spec.m, base[k]);
    }
    std::fill(z.begin(), z.end(), 0);
    for (;;) {
      for (std::size_t k = 0; k < d; ++k) {
        pt[k] = (static_cast<double>(base[k] + z[k] * spec.m) + 0.5) /
                static_cast<double>(spec.n);
      }
      f(row++, pt);
      std::size_t k = d;
      bool done = true;
      while (k-- > 0) {
        if (++z[k] < count[k]) {
          done = false;
          break;
        }
        z[k] = 0;
      }
      if (done) break;
    }
  }
}

namespace {

std::vector<long long> corner_to_coords(const RlhdSpec& spec,
                                        std::span<const double> corner) {
  if (corner.size() != spec.dim()) {
    throw ValidationError("corner dimension mismatch");
  }
  std::vector<long long> L(corner.size());
  for (std::size_t k = 0; k < corner.size(); ++k) {
    const double scaled = corner[k] * static_cast<double>(spec.n);
    const long long c = std::llround(scaled);
    if (std::abs(scaled - static_cast<double>(c)) > 1e-6) {
      throw ValidationError("window corner is not on the 1/n grid");
    }
    if (c < 0 || c > spec.n - spec.m) {
      throw ValidationError("window corner out of range [0, 1 - m/n]");
    }
    L[k] = c;
  }
  return L;
}

}  // namespace

Design local_window_at(const RlhdSpec& spec, std::span<const long long> corner_coords) {
  const std::size_t d = spec.dim();
  if (corner_coords.size() != d) throw ValidationError("corner dimension mismatch");
  for (std::size_t k = 0; k < d; ++k) {
    if (corner_coords[k] < 0 || corner_coords[k] > spec.n - spec.m) {
      throw ValidationError("window corner out of range [0, 1 - m/n]");
    }
  }
  // Theorem: the window contents are L(m, v, delta - l*n) * (m/n) + l; in grid
  // coordinates, row t has c_k = L_k + ((t*v_k + delta_k - L_k) mod m).
  Design win(static_cast<std::size_t>(spec.m), d);
  for (long long t = 0; t < spec.m; ++t) {
    for (std::size_t k = 0; k < d; ++k) {
      const long long rel =
          (((t * spec.v[k] + spec.delta[k] - corner_coords[k]) % spec.m) + spec.m) %
          spec.m;
      const long long c = corner_coords[k] + rel;
      win(static_cast<std::size_t>(t), k) =
          (static_cast<double>(c) + 0.5) / static_cast<double>(spec.n);
    }
  }
  win.provenance.generator = "rlhd-window";
  return win;
}

Design local_window(const RlhdSpec& spec, std::span<const double> corner) {
  return local_window_at(spec, corner_to_coords(spec, corner));
}

bool translate_member(const RlhdSpec& spec, std::span<const double> delta_corner) {
  const std::size_t d = spec.dim();
  if (delta_corner.size() != d) throw ValidationError("corner dimension mismatch");
  std::vector<long long> D(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double scaled = delta_corner[k] * static_cast<double>(spec.n);
    D[k] = std::llround(scaled);
    if (std::abs(scaled - static_cast<double>(D[k])) > 1e-6) {
      throw ValidationError("corner displacement is not on the 1/n grid");
    }
  }
  // Need one residue i with D_k = i*v_k (mod m) for every axis.
  const long long i0 =
      ((D[0] % spec.m + spec.m) % spec.m) * mod_inverse(spec.v[0], spec.m) % spec.m;
  for (std::size_t k = 0; k < d; ++k) {
    if (((i0 * spec.v[k] - D[k]) % spec.m + spec.m) % spec.m != 0) return false;
  }
  return true;
}

namespace {

// Best corner per residue; each axis is solved independently by clamped
// rounding over C_k = r + z*m in [0, n-m]. With require_containing, only
// candidates whose closed box [C, C+m] contains x_k*n are admitted; the
// result is empty when no translation-lattice window contains x.
std::vector<long long> nearest_corner_impl(const RlhdSpec& spec,
                                           std::span<const double> x,
                                           bool require_containing) {
  const std::size_t d = spec.dim();
  const double half_width = static_cast<double>(spec.m) / 2.0;
  const long long cmax = spec.n - spec.m;

  std::vector<long long> best;
  double best_sq = std::numeric_limits<double>::infinity();
  std::vector<long long> corner(d);
  for (long long i = 0; i < spec.m; ++i) {
    bool feasible = true;
    double sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const long long r = (i * spec.v[k]) % spec.m;
      if (r > cmax) {  // no corner with this residue fits on this axis
        feasible = false;
        break;
      }
      const double scaled = x[k] * static_cast<double>(spec.n);
      const double target = scaled - half_width;
      long long z = std::llround((target - static_cast<double>(r)) /
                                 static_cast<double>(spec.m));
      const long long zmax = (cmax - r) / spec.m;
      z = std::clamp<long long>(z, 0, zmax);
      long long c = r + z * spec.m;
      if (require_containing) {
        // at most two candidates can contain x; pick the closer center
        long long chosen = -1;
        double chosen_gap = std::numeric_limits<double>::infinity();
        for (long long dz : {-1LL, 0LL, 1LL}) {
          const long long zz = z + dz;
          if (zz < 0 || zz > zmax) continue;
          const long long cc = r + zz * spec.m;
          if (scaled < static_cast<double>(cc) - 1e-9 ||
              scaled > static_cast<double>(cc + spec.m) + 1e-9) {
            continue;
          }
          const double gap = std::abs(static_cast<double>(cc) + half_width - scaled);
          if (gap < chosen_gap) {
            chosen_gap = gap;
            chosen = cc;
          }
        }
        if (chosen < 0) {
          feasible = false;
          break;
        }
        c = chosen;
      }
      const double gap =
          (static_cast<double>(c) + half_width) / static_cast<double>(spec.n) - x[k];
      sq += gap * gap;
      corner[k] = c;
    }
    if (feasible && sq < best_sq) {
      best_sq = sq;
      best = corner;
    }
  }
  return best;
}

void validate_query(const RlhdSpec& spec, std::span<const double> x) {
  if (x.size() != spec.dim()) throw ValidationError("query dimension mismatch");
  for (double xk : x) {
    if (!(xk >= 0.0 && xk <= 1.0)) throw ValidationError("query outside [0,1]^d");
  }
}

}  // namespace

std::vector<long long> nearest_window_corner(const RlhdSpec& spec,
                                             std::span<const double> x) {
  validate_query(spec, x);
  return nearest_corner_impl(spec, x, false);
}

std::vector<long long> prediction_window_corner(const RlhdSpec& spec,
                                                std::span<const double> x) {
  validate_query(spec, x);
  std::vector<long long> corner = nearest_corner_impl(spec, x, true);
  if (corner.empty()) corner = nearest_corner_impl(spec, x, false);
  return corner;
}

}  // namespace lhd
