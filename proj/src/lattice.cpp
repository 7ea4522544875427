#include "lhdkit/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace lhd {

namespace stats {
void bump_lattice_enumerations();
}

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

long long mod_inverse(long long a, long long n) {
  // extended Euclid
  long long t = 0, new_t = 1;
  long long r = n, new_r = ((a % n) + n) % n;
  while (new_r != 0) {
    const long long q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) {
    throw ValidationError("no modular inverse: gcd(" + std::to_string(a) + ", " +
                          std::to_string(n) + ") != 1");
  }
  return ((t % n) + n) % n;
}

std::vector<long long> coprime_residues(long long n) {
  if (n < 3) throw ValidationError("coprime_residues requires n >= 3");
  std::vector<long long> out;
  for (long long k = 1; 2 * k < n; ++k) {
    if (std::gcd(k, n) == 1) out.push_back(k);
  }
  return out;
}

LatticeSpec::LatticeSpec(long long n_, std::vector<long long> v_,
                         std::vector<long long> delta_)
    : n(n_), v(std::move(v_)), delta(std::move(delta_)) {
  if (n < 2) throw ValidationError("lattice requires n >= 2");
  if (v.empty()) throw ValidationError("lattice generator is empty");
  if (delta.empty()) delta.assign(v.size(), 0);
  if (delta.size() != v.size()) {
    throw ValidationError("generator and shift dimension mismatch");
  }
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = ((v[k] % n) + n) % n;
    delta[k] = ((delta[k] % n) + n) % n;
    if (v[k] == 0 || std::gcd(v[k], n) != 1) {
      throw ValidationError("generator entry " + std::to_string(k + 1) +
                            " is not coprime to n");
    }
    if (2 * v[k] > n) {  // fold mirrored generator; reflects axis k
      v[k] = n - v[k];
      delta[k] = n - 1 - delta[k];
    }
  }
}

Design lattice_points(const LatticeSpec& spec) {
  stats::bump_lattice_enumerations();
  const auto n = static_cast<std::size_t>(spec.n);
  const std::size_t d = spec.dim();
  Design x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const long long c = (static_cast<long long>(i) * spec.v[k] + spec.delta[k]) % spec.n;
      x(i, k) = (static_cast<double>(c) + 0.5) / static_cast<double>(spec.n);
    }
  }
  x.provenance.generator = "llhd";
  return x;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Difference-class criteria: all pairwise wrap distances of a lattice design
// are w(i*v/n), i = 1..n-1, each class holding n ordered pairs.
double lattice_ws(long long n, std::span<const long long> v) {
  long long best = std::numeric_limits<long long>::max();
  std::vector<long long> r(v.size(), 0);
  for (long long i = 1; i < n; ++i) {
    long long sumsq = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      r[k] += v[k];
      if (r[k] >= n) r[k] -= n;
      const long long m = std::min(r[k], n - r[k]);
      sumsq += m * m;
    }
    best = std::min(best, sumsq);
  }
  return static_cast<double>(n) / std::sqrt(static_cast<double>(best));
}

double lattice_wa(long long n, std::span<const long long> v, double p) {
  // [ (n/2) sum_i dist_i^-p ]^{1/p}, factored by the smallest class distance.
  std::vector<long long> sumsq(static_cast<std::size_t>(n - 1));
  std::vector<long long> r(v.size(), 0);
  long long minsq = std::numeric_limits<long long>::max();
  for (long long i = 1; i < n; ++i) {
    long long s = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      r[k] += v[k];
      if (r[k] >= n) r[k] -= n;
      const long long m = std::min(r[k], n - r[k]);
      s += m * m;
    }
    sumsq[static_cast<std::size_t>(i - 1)] = s;
    minsq = std::min(minsq, s);
  }
  double sum = 0.0;
  for (long long s : sumsq) {
    sum += std::pow(static_cast<double>(minsq) / static_cast<double>(s), p / 2.0);
  }
  const double scaled = std::pow(0.5 * static_cast<double>(n) * sum, 1.0 / p);
  return scaled * static_cast<double>(n) / std::sqrt(static_cast<double>(minsq));
}

double lattice_wp(long long n, std::span<const long long> v,
                  const CriterionOptions& opt) {
  const std::size_t d = v.size();
  const bool logdom = d > opt.log_domain_dim;
  std::vector<long long> r(d, 0);
  double sum = 0.0;
  double max_log = -kInf;
  std::vector<double> logs;
  if (logdom) logs.reserve(static_cast<std::size_t>(n - 1));
  for (long long i = 1; i < n; ++i) {
    double term = 1.0;
    double logsum = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      r[k] += v[k];
      if (r[k] >= n) r[k] -= n;
      const double w = static_cast<double>(std::min(r[k], n - r[k])) / static_cast<double>(n);
      if (logdom) {
        logsum -= 2.0 * std::log(w);
      } else {
        term *= 1.0 / (w * w);
      }
    }
    if (logdom) {
      logs.push_back(logsum);
      max_log = std::max(max_log, logsum);
    } else {
      sum += term;
    }
  }
  const double dd = static_cast<double>(d);
  if (logdom) {
    double scaled = 0.0;
    for (double l : logs) scaled += std::exp(l - max_log);
    return std::exp((max_log + std::log(scaled / static_cast<double>(n - 1))) / dd);
  }
  return std::pow(sum / static_cast<double>(n - 1), 1.0 / dd);
}

double lattice_wd(long long n, std::span<const long long> v,
                  const CriterionOptions& opt) {
  const std::size_t d = v.size();
  const bool logdom = d > opt.log_domain_dim;
  std::vector<long long> r(d, 0);
  double sum = 0.0;
  // i runs to n inclusive; class n is the diagonal, contributing 1.5^d.
  for (long long i = 1; i <= n; ++i) {
    double term = 1.0;
    double logsum = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      r[k] += v[k];
      if (r[k] >= n) r[k] -= n;
      // w(i v_k/n - 1/2) = |2 r - n| / (2n), exact in integers
      const double w = static_cast<double>(std::llabs(2 * r[k] - n)) /
                       (2.0 * static_cast<double>(n));
      if (logdom) {
        logsum += std::log(1.25 + w * w);
      } else {
        term *= 1.25 + w * w;
      }
    }
    sum += logdom ? std::exp(logsum) : term;
  }
  const double dd = static_cast<double>(d);
  const double sq = sum / static_cast<double>(n) - std::pow(4.0 / 3.0, dd);
  return std::sqrt(std::max(sq, 0.0));
}

}  // namespace

double lattice_criterion(long long n, std::span<const long long> v, Criterion kind,
                         const CriterionOptions& opt) {
  if (n < 2) throw ValidationError("lattice criterion requires n >= 2");
  for (long long vk : v) {
    if (vk <= 0 || vk >= n || std::gcd(vk, n) != 1) {
      throw ValidationError("generator entry not in {1..n-1} coprime to n");
    }
  }
  switch (kind) {
    case Criterion::WS: return lattice_ws(n, v);
    case Criterion::WA: return lattice_wa(n, v, opt.power_exponent);
    case Criterion::WP: return lattice_wp(n, v, opt);
    case Criterion::WD: return lattice_wd(n, v, opt);
    default:
      throw ValidationError("lattice_criterion supports WS, WA, WP, WD");
  }
}

double lattice_criterion(const LatticeSpec& spec, Criterion kind,
                         const CriterionOptions& opt) {
  return lattice_criterion(spec.n, spec.v, kind, opt);
}

long long canonical_2d(long long n, long long v1, long long v2) {
  if (n < 2) throw ValidationError("canonical_2d requires n >= 2");
  v1 = ((v1 % n) + n) % n;
  v2 = ((v2 % n) + n) % n;
  if (v1 == 0 || v2 == 0 || std::gcd(v1, n) != 1 || std::gcd(v2, n) != 1) {
    throw ValidationError("canonical_2d requires both entries coprime to n");
  }
  return (v2 * mod_inverse(v1, n)) % n;
}

namespace {

long long dot2(const std::array<long long, 2>& a, const std::array<long long, 2>& b) {
  return a[0] * b[0] + a[1] * b[1];
}

// round(num/den) with half-integer ties toward zero; den > 0.
long long round_ratio(long long num, long long den) {
  long long q = num / den;  // truncation is already toward zero
  const long long rem = num % den;
  if (2 * std::llabs(rem) > den) q += (num > 0) ? 1 : -1;
  return q;
}

}  // namespace

ReducedBasis gaussian_reduce(long long n, long long v1, long long v2) {
  ReducedBasis rb;
  rb.n = n;
  const long long vbar = canonical_2d(n, v1, v2);
  std::array<long long, 2> a{1, vbar};
  std::array<long long, 2> b{0, n};
  auto reduce_b = [&]() {
    const long long mu = round_ratio(dot2(a, b), dot2(a, a));
    b[0] -= mu * a[0];
    b[1] -= mu * a[1];
  };
  reduce_b();
  ++rb.iterations;
  while (dot2(b, b) < dot2(a, a)) {
    std::swap(a, b);
    reduce_b();
    ++rb.iterations;
  }
  rb.a = a;
  rb.b = b;
  const double normsq_a = static_cast<double>(dot2(a, a));
  rb.y = static_cast<double>(dot2(a, b)) / normsq_a;
  // |det(a,b)| = n, so ||b - y a|| = n/||a|| and z = n/||a||^2 exactly.
  rb.z = static_cast<double>(n) / normsq_a;
  return rb;
}

double ReducedBasis::norm_a() const {
  return std::sqrt(static_cast<double>(a[0] * a[0] + a[1] * a[1]));
}
double ReducedBasis::norm_b() const {
  return std::sqrt(static_cast<double>(b[0] * b[0] + b[1] * b[1]));
}
double ReducedBasis::separation() const { return norm_a() / static_cast<double>(n); }

double ReducedBasis::fill() const {
  const double ay = std::abs(y);
  const double t = z * z - ay + y * y;
  return std::sqrt(z * z + t * t) / (2.0 * z) * norm_a() / static_cast<double>(n);
}

double ws2_fast(long long n, std::span<const long long> v) {
  if (v.size() < 2) throw ValidationError("WS2 requires d >= 2");
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    for (std::size_t l = k + 1; l < v.size(); ++l) {
      sum += static_cast<double>(n) / gaussian_reduce(n, v[k], v[l]).norm_a();
    }
  }
  return sum;
}

double wf2_fast(long long n, std::span<const long long> v) {
  if (v.size() < 2) throw ValidationError("WF2 requires d >= 2");
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    for (std::size_t l = k + 1; l < v.size(); ++l) {
      sum += gaussian_reduce(n, v[k], v[l]).fill();
    }
  }
  return sum;
}

ProjectionPairCache::ProjectionPairCache(long long n, std::vector<long long> v,
                                         Criterion kind, long long slices)
    : n_(n), sub_n_(0), v_(std::move(v)), kind_(kind) {
  if (kind_ != Criterion::WS2 && kind_ != Criterion::WF2) {
    throw ValidationError("pair cache supports WS2 and WF2");
  }
  if (v_.size() < 2) throw ValidationError("pair cache requires d >= 2");
  if (slices < 1 || n_ % slices != 0) {
    throw ValidationError("slice count must divide n");
  }
  if (slices > 1) {
    sub_n_ = n_ / slices;
    if (sub_n_ < 2) throw ValidationError("slice size must be >= 2");
  }
  const std::size_t d = v_.size();
  terms_.resize(d * (d - 1) / 2);
  if (sub_n_ > 0) sub_terms_.resize(terms_.size());
  std::size_t p = 0;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    for (std::size_t l = k + 1; l < d; ++l, ++p) {
      terms_[p] = pair_term_at(n_, v_[k], v_[l]);
      if (sub_n_ > 0) sub_terms_[p] = pair_term_at(sub_n_, v_[k], v_[l]);
    }
  }
  recompute_value();
}

double ProjectionPairCache::pair_term_at(long long n, long long a, long long b) const {
  const ReducedBasis rb = gaussian_reduce(n, a, b);
  return kind_ == Criterion::WS2 ? static_cast<double>(n) / rb.norm_a() : rb.fill();
}

double ProjectionPairCache::update(std::size_t k, long long new_vk) {
  const std::size_t d = v_.size();
  if (k >= d) throw ValidationError("pair cache coordinate out of range");
  new_vk = ((new_vk % n_) + n_) % n_;
  if (new_vk == 0 || std::gcd(new_vk, n_) != 1) {
    throw ValidationError("replacement entry not coprime to n");
  }
  for (std::size_t l = 0; l < d; ++l) {
    if (l != k && v_[l] == new_vk) {
      throw ValidationError("replacement entry duplicates another generator entry");
    }
  }
  if (new_vk == v_[k]) return value_;
  v_[k] = new_vk;
  std::size_t p = 0;
  for (std::size_t a = 0; a + 1 < d; ++a) {
    for (std::size_t b = a + 1; b < d; ++b, ++p) {
      if (a == k || b == k) {
        terms_[p] = pair_term_at(n_, v_[a], v_[b]);
        if (sub_n_ > 0) sub_terms_[p] = pair_term_at(sub_n_, v_[a], v_[b]);
      }
    }
  }
  recompute_value();
  return value_;
}

void ProjectionPairCache::recompute_value() {
  double s = 0.0;
  for (double t : terms_) s += t;
  for (double t : sub_terms_) s += t;
  value_ = s;
}

LatticeSlice slice_extract(const LatticeSpec& spec, long long s, long long j) {
  if (s < 1 || spec.n % s != 0) {
    throw ValidationError("slice count must divide n");
  }
  if (j < 0 || j >= s) throw ValidationError("slice index out of range");
  LatticeSlice out;
  out.parent_n = spec.n;
  out.s = s;
  out.j = j;
  out.n = spec.n / s;
  out.v = spec.v;
  out.parent_delta = spec.delta;
  out.shift.resize(spec.dim());
  const double sd = static_cast<double>(s);
  for (std::size_t k = 0; k < spec.dim(); ++k) {
    out.shift[k] = static_cast<double>(spec.delta[k]) / sd - 0.5 + 1.0 / (2.0 * sd) +
                   static_cast<double>(j) * static_cast<double>(spec.v[k]) / sd;
  }
  return out;
}

Design LatticeSlice::points() const {
  // Rows i = j, j+s, ... of the parent enumeration, generated with the same
  // integer arithmetic so the partition is bitwise exact.
  const auto rows = static_cast<std::size_t>(n);
  const std::size_t d = v.size();
  Design x(rows, d);
  for (std::size_t q = 0; q < rows; ++q) {
    const long long i = j + static_cast<long long>(q) * s;
    for (std::size_t k = 0; k < d; ++k) {
      const long long c = (i * v[k] + parent_delta[k]) % parent_n;
      x(q, k) = (static_cast<double>(c) + 0.5) / static_cast<double>(parent_n);
    }
  }
  x.provenance.generator = "llhd-slice";
  return x;
}

double slice_criterion(const LatticeSpec& spec, long long s, Criterion kind,
                       const CriterionOptions& opt) {
  if (s < 1 || spec.n % s != 0) {
    throw ValidationError("slice count must divide n");
  }
  const long long sub_n = spec.n / s;
  if (sub_n < 2) throw ValidationError("slice size must be >= 2");
  std::vector<long long> sub_v(spec.dim());
  for (std::size_t k = 0; k < spec.dim(); ++k) {
    sub_v[k] = spec.v[k] % sub_n;
  }
  if (kind == Criterion::WS2) return ws2_fast(sub_n, sub_v);
  if (kind == Criterion::WF2) return wf2_fast(sub_n, sub_v);
  return lattice_criterion(sub_n, sub_v, kind, opt);
}

}  // namespace lhd
