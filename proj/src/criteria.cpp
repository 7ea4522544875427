#include "lhdkit/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lhd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// min over pairs of the squared pairwise distance (wrap or Euclidean).
double min_pair_sq(const Design& x, bool wrap) {
  double best = kInf;
  for (std::size_t i = 0; i + 1 < x.n(); ++i) {
    for (std::size_t j = i + 1; j < x.n(); ++j) {
      const double sq = wrap ? wrap_dist_sq(x.row(i), x.row(j))
                             : euclid_dist_sq(x.row(i), x.row(j));
      best = std::min(best, sq);
    }
  }
  return best;
}

double reciprocal_separation(const Design& x, bool wrap) {
  const double sq = min_pair_sq(x, wrap);
  if (sq == 0.0) return kInf;
  return 1.0 / std::sqrt(sq);
}

// [ sum_{i<j} dist^-p ]^{1/p}, evaluated with the smallest distance factored
// out so the power sum cannot overflow while the result is representable.
double power_separation(const Design& x, bool wrap, double p) {
  const double sqmin = min_pair_sq(x, wrap);
  if (sqmin == 0.0) return kInf;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.n(); ++i) {
    for (std::size_t j = i + 1; j < x.n(); ++j) {
      const double sq = wrap ? wrap_dist_sq(x.row(i), x.row(j))
                             : euclid_dist_sq(x.row(i), x.row(j));
      sum += std::pow(sqmin / sq, p / 2.0);
    }
  }
  return std::pow(sum, 1.0 / p) / std::sqrt(sqmin);
}

double projective_separation(const Design& x, const CriterionOptions& opt) {
  const std::size_t n = x.n();
  const std::size_t d = x.d();
  const bool logdom = d > opt.log_domain_dim;
  double sum = 0.0;
  bool any_inf = false;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double term;
      if (logdom) {
        double logsum = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double w = wrap_dist_1d(x(i, k) - x(j, k));
          logsum += std::log(w);
        }
        term = std::exp(-2.0 * logsum);
      } else {
        term = 1.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double w = wrap_dist_1d(x(i, k) - x(j, k));
          term *= 1.0 / (w * w);
        }
      }
      if (std::isinf(term)) any_inf = true;
      sum += term;
    }
  }
  if (any_inf) return kInf;
  const double npairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return std::pow(sum / npairs, 1.0 / static_cast<double>(d));
}

// Hickernell closed form: c^2 = sum_{i,j} prod_k {1.25 + w(x_ik-x_jk+0.5)^2} / n^2 - (4/3)^d
double wrap_discrepancy(const Design& x, const CriterionOptions& opt) {
  const std::size_t n = x.n();
  const std::size_t d = x.d();
  const bool logdom = d > opt.log_domain_dim;
  // Diagonal terms contribute n * 1.5^d; off-diagonal pairs count twice.
  double offdiag = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double term;
      if (logdom) {
        double logsum = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double w = wrap_dist_1d(x(i, k) - x(j, k) + 0.5);
          logsum += std::log(1.25 + w * w);
        }
        term = std::exp(logsum);
      } else {
        term = 1.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double w = wrap_dist_1d(x(i, k) - x(j, k) + 0.5);
          term *= 1.25 + w * w;
        }
      }
      offdiag += term;
    }
  }
  const double nn = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const double total = 2.0 * offdiag + nn * std::pow(1.5, dd);
  const double sq = total / (nn * nn) - std::pow(4.0 / 3.0, dd);
  return std::sqrt(std::max(sq, 0.0));
}

double projection_sum(const Design& x, Criterion base, const CriterionOptions& opt) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < x.d(); ++k) {
    for (std::size_t l = k + 1; l < x.d(); ++l) {
      const Design proj = x.project(k, l);
      switch (base) {
        case Criterion::WS: sum += reciprocal_separation(proj, true); break;
        case Criterion::RS: sum += reciprocal_separation(proj, false); break;
        case Criterion::WF2: sum += fill_distance_grid(proj, opt.wf2_resolution, true); break;
        default: break;
      }
    }
  }
  return sum;
}

}  // namespace

double criterion_full(const Design& x, Criterion kind, const CriterionOptions& opt) {
  require_unit_cube(x);
  const bool pairwise = kind != Criterion::WF2;
  if (pairwise && x.n() < 2) {
    throw ValidationError("criterion requires at least two points");
  }
  if (is_projection_criterion(kind) && x.d() < 2) {
    throw ValidationError("projection criteria require d >= 2");
  }
  switch (kind) {
    case Criterion::WS: return reciprocal_separation(x, true);
    case Criterion::RS: return reciprocal_separation(x, false);
    case Criterion::WA: return power_separation(x, true, opt.power_exponent);
    case Criterion::AS: return power_separation(x, false, opt.power_exponent);
    case Criterion::WP: return projective_separation(x, opt);
    case Criterion::WD: return wrap_discrepancy(x, opt);
    case Criterion::WS2: return projection_sum(x, Criterion::WS, opt);
    case Criterion::RS2: return projection_sum(x, Criterion::RS, opt);
    case Criterion::WF2: return projection_sum(x, Criterion::WF2, opt);
  }
  throw ValidationError("unknown criterion kind");
}

namespace {

// Bucketed nearest-point queries for the fill oracle. Cells are searched in
// growing Chebyshev rings; a ring at distance rho can only contain points at
// Euclidean distance >= (rho-1)*cellw, which bounds the search.
struct BucketGrid {
  std::size_t d;
  std::size_t cells_per_axis;
  double cellw;
  bool wrap;
  std::vector<std::vector<std::size_t>> cells;  // point indices per cell
  const Design* pts;

  BucketGrid(const Design& x, bool wrap_) : d(x.d()), wrap(wrap_), pts(&x) {
    cells_per_axis = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(x.n()),
                                                        1.0 / static_cast<double>(d)))));
    cellw = 1.0 / static_cast<double>(cells_per_axis);
    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k) total *= cells_per_axis;
    cells.resize(total);
    for (std::size_t i = 0; i < x.n(); ++i) {
      cells[cell_of(x.row(i))].push_back(i);
    }
  }

  std::size_t axis_cell(double v) const {
    auto c = static_cast<std::size_t>(v * static_cast<double>(cells_per_axis));
    return std::min(c, cells_per_axis - 1);
  }

  std::size_t cell_of(std::span<const double> p) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < d; ++k) idx = idx * cells_per_axis + axis_cell(p[k]);
    return idx;
  }

  double point_sq(std::span<const double> q, std::size_t i) const {
    return wrap ? wrap_dist_sq(q, pts->row(i)) : euclid_dist_sq(q, pts->row(i));
  }

  // Squared distance from q to its nearest design point.
  double nearest_sq(std::span<const double> q) const {
    const long long B = static_cast<long long>(cells_per_axis);
    std::vector<long long> base(d);
    for (std::size_t k = 0; k < d; ++k) base[k] = static_cast<long long>(axis_cell(q[k]));
    double best = std::numeric_limits<double>::infinity();
    const long long rho_max = wrap ? B / 2 + 1 : B;
    for (long long rho = 0; rho <= rho_max; ++rho) {
      if (rho > 0) {
        const double lb = static_cast<double>(rho - 1) * cellw;
        if (best <= lb * lb) break;
      }
      visit_ring(base, rho, [&](std::size_t cell_idx) {
        for (std::size_t i : cells[cell_idx]) best = std::min(best, point_sq(q, i));
      });
    }
    return best;
  }

  template <typename F>
  void visit_ring(const std::vector<long long>& base, long long rho, F&& f) const {
    const long long B = static_cast<long long>(cells_per_axis);
    std::vector<long long> off(d, -rho);
    for (;;) {
      long long cheb = 0;
      for (std::size_t k = 0; k < d; ++k) cheb = std::max(cheb, std::llabs(off[k]));
      if (cheb == rho) {
        std::size_t idx = 0;
        bool ok = true;
        for (std::size_t k = 0; k < d; ++k) {
          long long c = base[k] + off[k];
          if (wrap) {
            c = ((c % B) + B) % B;
          } else if (c < 0 || c >= B) {
            ok = false;
            break;
          }
          idx = idx * cells_per_axis + static_cast<std::size_t>(c);
        }
        if (ok) f(idx);
      }
      // next offset in [-rho, rho]^d
      std::size_t k = 0;
      while (k < d && off[k] == rho) {
        off[k] = -rho;
        ++k;
      }
      if (k == d) break;
      ++off[k];
    }
  }
};

}  // namespace

double fill_distance_grid(const Design& x, std::size_t resolution, bool wrap) {
  require_unit_cube(x);
  if (x.n() == 0) throw ValidationError("fill distance of an empty design");
  if (x.d() > 3) {
    throw ValidationError("fill_distance_grid supports d <= 3 (oracle-scale only)");
  }
  if (resolution < 16) throw ValidationError("fill grid resolution must be >= 16");

  const BucketGrid grid(x, wrap);
  const std::size_t d = x.d();
  // Wrap: nodes j/res for j < res (period 1). Non-wrap: include both endpoints.
  const std::size_t nodes = wrap ? resolution : resolution + 1;
  std::vector<std::size_t> j(d, 0);
  std::vector<double> q(d);
  double worst = 0.0;
  for (;;) {
    for (std::size_t k = 0; k < d; ++k) {
      q[k] = static_cast<double>(j[k]) / static_cast<double>(resolution);
    }
    worst = std::max(worst, grid.nearest_sq(q));
    std::size_t k = 0;
    while (k < d && j[k] == nodes - 1) {
      j[k] = 0;
      ++k;
    }
    if (k == d) break;
    ++j[k];
  }
  return std::sqrt(worst);
}

}  // namespace lhd
