#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "lhdkit/criteria.hpp"
#include "lhdkit/design.hpp"
#include "lhdkit/lattice.hpp"

namespace lhd {

// Random centered LHD: d independent uniform permutations, x = pi(i)/n - 1/(2n).
Design random_lhd(std::size_t n, std::size_t d, std::uint64_t seed);

// Incremental criterion state over column-entry swaps. Swapping entries (i,k)
// and (j,k) touches only the 2(n-2) pairs through rows i and j, so the update
// costs O(nd) instead of the O(n^2 d) full evaluation. Supported kinds:
// WS, RS, WA, AS, WP, WD.
class SwapCriterionState {
 public:
  SwapCriterionState(Design design, Criterion kind, CriterionOptions opt = {});

  double value() const { return value_; }
  const Design& design() const { return x_; }

  // Applies the swap and returns the updated criterion; i == j is a no-op.
  // Applying the same swap again restores the design exactly.
  double apply_swap(std::size_t i, std::size_t j, std::size_t k);

 private:
  double pair_metric(std::size_t i, std::size_t j) const;
  void rebuild_aggregates();
  void subtract_term(double term);
  void replace_metric(std::size_t i, std::size_t j);
  double current_value() const;
  std::size_t pair_index(std::size_t i, std::size_t j) const;

  Design x_;
  Criterion kind_;
  CriterionOptions opt_;
  bool wrap_ = true;
  // metric_ holds, per pair: squared distance (WS/RS/WA/AS), sum of log wrap
  // distances (WP), or the WD per-pair product.
  std::vector<double> metric_;
  std::vector<double> sorted_sq_;  // WS/RS: sorted multiset of squared distances
  double agg_sum_ = 0.0;
  std::size_t agg_inf_count_ = 0;
  bool agg_dirty_ = false;
  std::size_t updates_since_refresh_ = 0;
  std::size_t refresh_period_ = 0;
  double value_ = 0.0;
};

struct SaConfig {
  std::size_t n = 0;
  std::size_t d = 0;
  long long iters = 2000;      // T
  double cool = 0.95;          // temperature decay q
  double init_temp = 10.0;     // r
  bool auto_temp = false;      // r <- stddev of 50 random perturbations
  Criterion kind = Criterion::WD;
  std::uint64_t seed = 0;
  CriterionOptions criterion_opt;
  long long progress_stride = 0;      // 0 disables "iter,best" lines
  std::ostream* progress = nullptr;
  std::vector<double>* best_trace = nullptr;  // best-so-far after each iteration
};

// Simulated annealing over column-entry swaps; acceptance probability
// min[exp(-(c_try - c_cur) / (cool^t * r)), 1], best-so-far returned.
Design sa_optimize_lhd(const SaConfig& config);

struct LlhdConfig {
  long long n = 0;
  std::size_t d = 0;
  long long iters = 0;     // T; 0 means the 5*p(n)*d default
  long long restarts = 0;  // Q; 0 means max(T / (5*p(n)*d), 1)
  Criterion kind = Criterion::WD;  // WS, WA, WP, WD, WS2, WF2
  long long slices = 1;            // >1 optimizes c(full) + c(slice 0)
  std::uint64_t seed = 0;
  CriterionOptions criterion_opt;
  long long progress_stride = 0;
  std::ostream* progress = nullptr;
  std::vector<double>* best_trace = nullptr;
};

struct LlhdResult {
  LatticeSpec spec;
  Design points;
  double criterion = 0.0;
};

// "iter,best" lines written at a fixed stride during a search.
struct SearchProgress {
  std::ostream* out = nullptr;
  long long stride = 0;
  long long iter_offset = 0;  // iterations spent in earlier restarts
  double best_incoming = std::numeric_limits<double>::infinity();
};

// One restart of the neighborhood search over generators with distinct
// entries from P(n); exposed so the restart-decomposition property of
// llhd_optimize is directly testable. Criteria never read delta.
std::pair<std::vector<long long>, double> llhd_restart(
    long long n, std::size_t d, long long iters, Criterion kind, long long slices,
    std::uint64_t restart_seed, const std::vector<long long>& pool,
    const CriterionOptions& opt = {}, const SearchProgress& progress = {});

// Restart-based generator search. delta is drawn once per call; restart q
// runs on the stream derive_seed(seed, q+1), so llhd_optimize equals the min
// over single restarts by (criterion, restart index). When d > p(n) the
// optimized block of d mod p(n) columns is supplemented with full copies of
// P(n), appended after the optimized columns.
LlhdResult llhd_optimize(const LlhdConfig& config);

// Exhaustive search over power generators v = (1, g, g^2, ...) mod n with
// gcd(g, n) = 1; deterministic (smallest minimizing g, delta = 0).
LlhdResult korobov_search(long long n, std::size_t d, Criterion kind,
                          const CriterionOptions& opt = {});

// c(full design) + c(slice 0); every slice shares the same value.
double sliced_objective(const LatticeSpec& spec, long long s, Criterion kind,
                        const CriterionOptions& opt = {});

}  // namespace lhd
