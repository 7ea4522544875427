#include "lhdkit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>

#include "lhdkit/rng.hpp"

namespace lhd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Design random_lhd(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0 || d == 0) throw ValidationError("random_lhd requires n, d >= 1");
  Rng rng(seed);
  Design x(n, d);
  std::vector<std::size_t> perm(n);
  for (std::size_t k = 0; k < d; ++k) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(perm);
    for (std::size_t i = 0; i < n; ++i) {
      x(i, k) = (static_cast<double>(perm[i]) + 0.5) / static_cast<double>(n);
    }
  }
  x.provenance.generator = "lhd";
  x.provenance.seed = seed;
  return x;
}

SwapCriterionState::SwapCriterionState(Design design, Criterion kind,
                                       CriterionOptions opt)
    : x_(std::move(design)), kind_(kind), opt_(opt) {
  require_unit_cube(x_);
  if (x_.n() < 2) throw ValidationError("swap state requires n >= 2");
  switch (kind_) {
    case Criterion::WS:
    case Criterion::WA:
    case Criterion::WP:
    case Criterion::WD:
      wrap_ = true;
      break;
    case Criterion::RS:
    case Criterion::AS:
      wrap_ = false;
      break;
    default:
      throw ValidationError("swap updates support WS, RS, WA, AS, WP, WD");
  }
  const std::size_t n = x_.n();
  metric_.resize(n * (n - 1) / 2);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      metric_[pair_index(i, j)] = pair_metric(i, j);
    }
  }
  refresh_period_ = std::max<std::size_t>(64, n);
  rebuild_aggregates();
  value_ = current_value();
}

std::size_t SwapCriterionState::pair_index(std::size_t i, std::size_t j) const {
  // i < j
  return i * x_.n() - i * (i + 1) / 2 + (j - i - 1);
}

double SwapCriterionState::pair_metric(std::size_t i, std::size_t j) const {
  const std::size_t d = x_.d();
  switch (kind_) {
    case Criterion::WS:
    case Criterion::WA:
      return wrap_dist_sq(x_.row(i), x_.row(j));
    case Criterion::RS:
    case Criterion::AS:
      return euclid_dist_sq(x_.row(i), x_.row(j));
    case Criterion::WP: {
      double logsum = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        logsum += std::log(wrap_dist_1d(x_(i, k) - x_(j, k)));
      }
      return logsum;  // -inf when some coordinate coincides
    }
    case Criterion::WD: {
      if (d > opt_.log_domain_dim) {
        double logsum = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double w = wrap_dist_1d(x_(i, k) - x_(j, k) + 0.5);
          logsum += std::log(1.25 + w * w);
        }
        return std::exp(logsum);
      }
      double prod = 1.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double w = wrap_dist_1d(x_(i, k) - x_(j, k) + 0.5);
        prod *= 1.25 + w * w;
      }
      return prod;
    }
    default:
      return 0.0;
  }
}

void SwapCriterionState::rebuild_aggregates() {
  agg_sum_ = 0.0;
  agg_inf_count_ = 0;
  agg_dirty_ = false;
  switch (kind_) {
    case Criterion::WS:
    case Criterion::RS:
      sorted_sq_ = metric_;
      std::sort(sorted_sq_.begin(), sorted_sq_.end());
      break;
    case Criterion::WA:
    case Criterion::AS:
      for (double sq : metric_) {
        const double t = (sq == 0.0) ? kInf : std::pow(sq, -opt_.power_exponent / 2.0);
        if (std::isinf(t)) {
          ++agg_inf_count_;
        } else {
          agg_sum_ += t;
        }
      }
      break;
    case Criterion::WP:
      for (double logw : metric_) {
        const double t = std::exp(-2.0 * logw);
        if (std::isinf(t)) {
          ++agg_inf_count_;
        } else {
          agg_sum_ += t;
        }
      }
      break;
    case Criterion::WD:
      for (double p : metric_) agg_sum_ += p;
      break;
    default:
      break;
  }
  updates_since_refresh_ = 0;
}

double SwapCriterionState::current_value() const {
  const double n = static_cast<double>(x_.n());
  const double d = static_cast<double>(x_.d());
  const double npairs = 0.5 * n * (n - 1.0);
  switch (kind_) {
    case Criterion::WS:
    case Criterion::RS: {
      const double minsq = sorted_sq_.front();
      return minsq == 0.0 ? kInf : 1.0 / std::sqrt(minsq);
    }
    case Criterion::WA:
    case Criterion::AS:
      if (agg_inf_count_ > 0) return kInf;
      return std::pow(agg_sum_, 1.0 / opt_.power_exponent);
    case Criterion::WP:
      if (agg_inf_count_ > 0) return kInf;
      return std::pow(agg_sum_ / npairs, 1.0 / d);
    case Criterion::WD: {
      const double total = 2.0 * agg_sum_ + n * std::pow(1.5, d);
      const double sq = total / (n * n) - std::pow(4.0 / 3.0, d);
      return std::sqrt(std::max(sq, 0.0));
    }
    default:
      return 0.0;
  }
}

// Power sums are dominated by a handful of close pairs; removing a dominant
// term leaves a remainder that inherits the old sum's absolute rounding error.
// Flag heavy cancellation so the aggregates are rebuilt from the pair cache.
void SwapCriterionState::subtract_term(double term) {
  const double remainder = agg_sum_ - term;
  if (remainder < 1e-2 * agg_sum_) agg_dirty_ = true;
  agg_sum_ = remainder;
}

void SwapCriterionState::replace_metric(std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  const std::size_t p = pair_index(i, j);
  const double old_m = metric_[p];
  const double new_m = pair_metric(i, j);
  metric_[p] = new_m;
  switch (kind_) {
    case Criterion::WS:
    case Criterion::RS: {
      auto it = std::lower_bound(sorted_sq_.begin(), sorted_sq_.end(), old_m);
      sorted_sq_.erase(it);
      sorted_sq_.insert(std::lower_bound(sorted_sq_.begin(), sorted_sq_.end(), new_m),
                        new_m);
      break;
    }
    case Criterion::WA:
    case Criterion::AS: {
      const double t_old = (old_m == 0.0) ? kInf : std::pow(old_m, -opt_.power_exponent / 2.0);
      const double t_new = (new_m == 0.0) ? kInf : std::pow(new_m, -opt_.power_exponent / 2.0);
      if (std::isinf(t_old)) --agg_inf_count_; else subtract_term(t_old);
      if (std::isinf(t_new)) ++agg_inf_count_; else agg_sum_ += t_new;
      break;
    }
    case Criterion::WP: {
      const double t_old = std::exp(-2.0 * old_m);
      const double t_new = std::exp(-2.0 * new_m);
      if (std::isinf(t_old)) --agg_inf_count_; else subtract_term(t_old);
      if (std::isinf(t_new)) ++agg_inf_count_; else agg_sum_ += t_new;
      break;
    }
    case Criterion::WD:
      agg_sum_ += new_m - old_m;
      break;
    default:
      break;
  }
}

double SwapCriterionState::apply_swap(std::size_t i, std::size_t j, std::size_t k) {
  if (i >= x_.n() || j >= x_.n() || k >= x_.d()) {
    throw ValidationError("swap index out of range");
  }
  if (i == j) return value_;
  std::swap(x_(i, k), x_(j, k));
  // The (i,j) pair itself only flips the sign of its coordinate difference.
  for (std::size_t h = 0; h < x_.n(); ++h) {
    if (h == i || h == j) continue;
    replace_metric(h, i);
    replace_metric(h, j);
  }
  if (agg_dirty_ || ++updates_since_refresh_ >= refresh_period_) {
    rebuild_aggregates();  // shed accumulated floating-point drift
  }
  value_ = current_value();
  return value_;
}

Design sa_optimize_lhd(const SaConfig& cfg) {
  if (cfg.n < 1 || cfg.d < 1) throw ValidationError("sa config requires n, d >= 1");
  if (!(cfg.cool > 0.0 && cfg.cool < 1.0)) {
    throw ValidationError("cooling rate must be in (0,1)");
  }
  if (!(cfg.init_temp > 0.0)) throw ValidationError("initial temperature must be > 0");
  if (cfg.iters < 0) throw ValidationError("iteration count must be >= 0");

  Design init = random_lhd(cfg.n, cfg.d, cfg.seed);
  init.provenance.generator = "olhd";
  if (cfg.iters == 0 || cfg.n < 2) return init;

  Rng rng(derive_seed(cfg.seed, 0x5a5a));
  SwapCriterionState state(init, cfg.kind, cfg.criterion_opt);

  double r = cfg.init_temp;
  if (cfg.auto_temp) {
    // Scale the temperature to the criterion's local variability.
    std::vector<double> samples;
    samples.reserve(50);
    for (int s = 0; s < 50; ++s) {
      const auto k = static_cast<std::size_t>(rng.below(cfg.d));
      const auto i = static_cast<std::size_t>(rng.below(cfg.n));
      std::size_t j = i;
      while (j == i) j = static_cast<std::size_t>(rng.below(cfg.n));
      samples.push_back(state.apply_swap(i, j, k));
      state.apply_swap(i, j, k);  // revert
    }
    double mean = 0.0;
    for (double c : samples) mean += c;
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double c : samples) var += (c - mean) * (c - mean);
    var /= static_cast<double>(samples.size());
    r = std::max(std::sqrt(var), 1e-12);
  }

  Design best = state.design();
  double c_best = state.value();
  double c_cur = c_best;
  double temp = r;
  for (long long t = 1; t <= cfg.iters; ++t) {
    temp *= cfg.cool;
    const auto k = static_cast<std::size_t>(rng.below(cfg.d));
    const auto i = static_cast<std::size_t>(rng.below(cfg.n));
    std::size_t j = i;
    while (j == i) j = static_cast<std::size_t>(rng.below(cfg.n));
    const double c_try = state.apply_swap(i, j, k);
    if (c_try < c_best) {
      best = state.design();
      c_best = c_try;
    }
    const double accept = std::exp(-(c_try - c_cur) / temp);
    if (rng.uniform() < std::min(accept, 1.0)) {
      c_cur = c_try;
    } else {
      c_cur = state.apply_swap(i, j, k);  // revert
    }
    if (cfg.best_trace) cfg.best_trace->push_back(c_best);
    if (cfg.progress && cfg.progress_stride > 0 && t % cfg.progress_stride == 0) {
      (*cfg.progress) << t << ',' << c_best << '\n';
    }
  }
  best.provenance.generator = "olhd";
  best.provenance.seed = cfg.seed;
  return best;
}

namespace {

// Criterion of a candidate generator during the lattice search.
double llhd_eval(long long n, std::span<const long long> v, Criterion kind,
                 long long slices, const CriterionOptions& opt) {
  double c = lattice_criterion(n, v, kind, opt);
  if (slices > 1) {
    const long long sub_n = n / slices;
    std::vector<long long> sub_v(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) sub_v[k] = v[k] % sub_n;
    c += lattice_criterion(sub_n, sub_v, kind, opt);
  }
  return c;
}

}  // namespace

std::pair<std::vector<long long>, double> llhd_restart(
    long long n, std::size_t d, long long iters, Criterion kind, long long slices,
    std::uint64_t restart_seed, const std::vector<long long>& pool,
    const CriterionOptions& opt, const SearchProgress& progress) {
  if (d > pool.size()) {
    throw ValidationError("restart requires d <= p(n) distinct generator entries");
  }
  Rng rng(restart_seed);
  // Sample v without replacement (partial Fisher-Yates).
  std::vector<long long> candidates = pool;
  std::vector<long long> v(d);
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t pick = k + static_cast<std::size_t>(rng.below(candidates.size() - k));
    std::swap(candidates[k], candidates[pick]);
    v[k] = candidates[k];
  }

  const bool pairwise_fast = kind == Criterion::WS2 || kind == Criterion::WF2;
  std::optional<ProjectionPairCache> cache;
  double c_cur;
  if (pairwise_fast) {
    cache.emplace(n, v, kind, slices);
    c_cur = cache->value();
  } else {
    c_cur = llhd_eval(n, v, kind, slices, opt);
  }

  const bool movable = pool.size() > d;
  for (long long t = 1; t <= iters; ++t) {
    if (movable) {
      const auto k = static_cast<std::size_t>(rng.below(d));
      // Uniform over P(n) minus the current entries, via rejection.
      long long cand;
      for (;;) {
        cand = pool[static_cast<std::size_t>(rng.below(pool.size()))];
        if (std::find(v.begin(), v.end(), cand) == v.end()) break;
      }
      if (pairwise_fast) {
        const double c_new = cache->update(k, cand);
        if (c_new <= c_cur) {
          v[k] = cand;
          c_cur = c_new;
        } else {
          cache->update(k, v[k]);  // revert
        }
      } else {
        const long long old = v[k];
        v[k] = cand;
        const double c_new = llhd_eval(n, v, kind, slices, opt);
        if (c_new <= c_cur) {
          c_cur = c_new;
        } else {
          v[k] = old;
        }
      }
    }
    if (progress.out && progress.stride > 0 &&
        (progress.iter_offset + t) % progress.stride == 0) {
      (*progress.out) << (progress.iter_offset + t) << ','
                      << std::min(progress.best_incoming, c_cur) << '\n';
    }
  }
  return {std::move(v), c_cur};
}

LlhdResult llhd_optimize(const LlhdConfig& cfg) {
  if (cfg.n < 3) throw ValidationError("lattice search requires n >= 3");
  if (cfg.d < 1) throw ValidationError("lattice search requires d >= 1");
  const bool pairwise_fast = cfg.kind == Criterion::WS2 || cfg.kind == Criterion::WF2;
  if (pairwise_fast && cfg.d < 2) {
    throw ValidationError("WS2/WF2 require d >= 2");
  }
  switch (cfg.kind) {
    case Criterion::WS:
    case Criterion::WA:
    case Criterion::WP:
    case Criterion::WD:
    case Criterion::WS2:
    case Criterion::WF2:
      break;
    default:
      throw ValidationError("lattice search supports WS, WA, WP, WD, WS2, WF2");
  }
  if (cfg.slices < 1 || cfg.n % cfg.slices != 0) {
    throw ValidationError("slice count must divide n");
  }
  if (cfg.slices > 1 && cfg.n / cfg.slices < 2) {
    throw ValidationError("slice size must be >= 2");
  }

  const std::vector<long long> pool = coprime_residues(cfg.n);
  const auto p = static_cast<long long>(pool.size());

  std::size_t d_opt = cfg.d;
  std::size_t blocks = 0;
  if (static_cast<long long>(cfg.d) > p) {
    blocks = cfg.d / static_cast<std::size_t>(p);
    d_opt = cfg.d % static_cast<std::size_t>(p);
  }

  const long long default_span = 5 * p * static_cast<long long>(cfg.d);
  const long long iters = cfg.iters > 0 ? cfg.iters : default_span;
  const long long restarts =
      cfg.restarts > 0 ? cfg.restarts : std::max<long long>(iters / default_span, 1);

  // delta is drawn once per call: the criteria never read it, it only shifts
  // the emitted points.
  Rng master(derive_seed(cfg.seed, 0));
  std::vector<long long> delta(cfg.d);
  for (auto& dk : delta) dk = static_cast<long long>(master.below(static_cast<std::uint64_t>(cfg.n)));

  std::vector<long long> v_best;
  double c_best = kInf;
  if (d_opt >= 1) {
    const long long per_restart = iters / restarts;
    for (long long q = 0; q < restarts; ++q) {
      SearchProgress prog{cfg.progress, cfg.progress_stride, q * per_restart, c_best};
      auto [v, c] = llhd_restart(cfg.n, d_opt, per_restart, cfg.kind, cfg.slices,
                                 derive_seed(cfg.seed, static_cast<std::uint64_t>(q + 1)),
                                 pool, cfg.criterion_opt, prog);
      if (c < c_best) {
        c_best = c;
        v_best = std::move(v);
      }
      if (cfg.best_trace) cfg.best_trace->push_back(c_best);
    }
  }

  std::vector<long long> v_full = v_best;
  for (std::size_t b = 0; b < blocks; ++b) {
    v_full.insert(v_full.end(), pool.begin(), pool.end());
  }

  LatticeSpec spec(cfg.n, v_full, delta);
  double criterion;
  if (cfg.slices > 1) {
    criterion = sliced_objective(spec, cfg.slices, cfg.kind, cfg.criterion_opt);
  } else if (pairwise_fast) {
    criterion = cfg.kind == Criterion::WS2 ? ws2_fast(spec.n, spec.v)
                                           : wf2_fast(spec.n, spec.v);
  } else {
    criterion = lattice_criterion(spec, cfg.kind, cfg.criterion_opt);
  }

  Design points = lattice_points(spec);
  points.provenance.generator = cfg.slices > 1 ? "sliced-llhd" : "llhd";
  points.provenance.seed = cfg.seed;
  if (blocks > 0) {
    points.provenance.note = "optimized_cols=" + std::to_string(d_opt) +
                             " pool_blocks=" + std::to_string(blocks);
  }
  return {std::move(spec), std::move(points), criterion};
}

LlhdResult korobov_search(long long n, std::size_t d, Criterion kind,
                          const CriterionOptions& opt) {
  if (n < 3) throw ValidationError("korobov search requires n >= 3");
  if (d < 1) throw ValidationError("korobov search requires d >= 1");
  const bool pairwise_fast = kind == Criterion::WS2 || kind == Criterion::WF2;
  if (pairwise_fast && d < 2) throw ValidationError("WS2/WF2 require d >= 2");

  std::vector<long long> best_v;
  double c_best = kInf;
  std::vector<long long> v(d);
  for (long long g = 1; g < n; ++g) {
    if (std::gcd(g, n) != 1) continue;
    v[0] = 1 % n;
    for (std::size_t k = 1; k < d; ++k) v[k] = (v[k - 1] * g) % n;
    double c;
    if (kind == Criterion::WS2) {
      c = ws2_fast(n, v);
    } else if (kind == Criterion::WF2) {
      c = wf2_fast(n, v);
    } else {
      c = lattice_criterion(n, v, kind, opt);
    }
    if (c < c_best) {
      c_best = c;
      best_v = v;
    }
  }

  LatticeSpec spec(n, best_v, std::vector<long long>(d, 0));
  Design points = lattice_points(spec);
  points.provenance.generator = "plhd";
  return {std::move(spec), std::move(points), c_best};
}

double sliced_objective(const LatticeSpec& spec, long long s, Criterion kind,
                        const CriterionOptions& opt) {
  double full;
  if (kind == Criterion::WS2) {
    full = ws2_fast(spec.n, spec.v);
  } else if (kind == Criterion::WF2) {
    full = wf2_fast(spec.n, spec.v);
  } else {
    full = lattice_criterion(spec, kind, opt);
  }
  return full + slice_criterion(spec, s, kind, opt);
}

}  // namespace lhd
