#include "lhdkit/design.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>

namespace lhd {

const char* to_string(Criterion kind) {
  switch (kind) {
    case Criterion::WS: return "WS";
    case Criterion::WA: return "WA";
    case Criterion::WP: return "WP";
    case Criterion::WD: return "WD";
    case Criterion::RS: return "RS";
    case Criterion::AS: return "AS";
    case Criterion::WS2: return "WS2";
    case Criterion::RS2: return "RS2";
    case Criterion::WF2: return "WF2";
  }
  return "?";
}

Criterion criterion_from_string(std::string_view name) {
  std::string up;
  up.reserve(name.size());
  for (char c : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (up == "WS") return Criterion::WS;
  if (up == "WA") return Criterion::WA;
  if (up == "WP") return Criterion::WP;
  if (up == "WD") return Criterion::WD;
  if (up == "RS") return Criterion::RS;
  if (up == "AS") return Criterion::AS;
  if (up == "WS2") return Criterion::WS2;
  if (up == "RS2") return Criterion::RS2;
  if (up == "WF2") return Criterion::WF2;
  throw ValidationError("unknown criterion: " + std::string(name));
}

bool is_projection_criterion(Criterion kind) {
  return kind == Criterion::WS2 || kind == Criterion::RS2 || kind == Criterion::WF2;
}

std::vector<double> Design::column(std::size_t k) const {
  std::vector<double> col(n_);
  for (std::size_t i = 0; i < n_; ++i) col[i] = (*this)(i, k);
  return col;
}

Design Design::project(std::size_t k, std::size_t l) const {
  Design proj(n_, 2);
  for (std::size_t i = 0; i < n_; ++i) {
    proj(i, 0) = (*this)(i, k);
    proj(i, 1) = (*this)(i, l);
  }
  return proj;
}

double wrap_dist_sq(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double w = wrap_dist_1d(a[k] - b[k]);
    s += w * w;
  }
  return s;
}

double euclid_dist_sq(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double h = a[k] - b[k];
    s += h * h;
  }
  return s;
}

bool validate_lhd(const Design& design, double tol) {
  const std::size_t n = design.n();
  if (n == 0 || design.d() == 0) return false;
  for (std::size_t k = 0; k < design.d(); ++k) {
    std::vector<double> col = design.column(k);
    std::sort(col.begin(), col.end());
    for (std::size_t i = 0; i < n; ++i) {
      const double center = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(n));
      if (std::abs(col[i] - center) > tol) return false;
    }
  }
  return true;
}

bool is_stratified(const Design& design, std::size_t strata,
                   std::span<const double> lo, std::span<const double> hi) {
  const std::size_t n = design.n();
  const std::size_t d = design.d();
  if (strata == 0 || n != strata) return false;
  std::vector<char> seen(strata);
  for (std::size_t k = 0; k < d; ++k) {
    std::fill(seen.begin(), seen.end(), 0);
    const double a = lo.empty() ? 0.0 : lo[k];
    const double b = hi.empty() ? 1.0 : hi[k];
    const double width = b - a;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = (design(i, k) - a) / width;
      if (t < 0.0 || t >= 1.0 + 1e-12) return false;
      auto bin = static_cast<std::size_t>(t * static_cast<double>(strata));
      if (bin >= strata) bin = strata - 1;
      if (seen[bin]) return false;
      seen[bin] = 1;
    }
  }
  return true;
}

void require_unit_cube(const Design& design) {
  for (double x : design.data()) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw ValidationError("design coordinate outside [0,1]");
    }
  }
}

namespace stats {
namespace {
std::atomic<std::uint64_t> g_lattice_enumerations{0};
}
std::uint64_t lattice_enumerations() { return g_lattice_enumerations.load(); }
void reset_lattice_enumerations() { g_lattice_enumerations.store(0); }
void bump_lattice_enumerations() { g_lattice_enumerations.fetch_add(1); }
}  // namespace stats

}  // namespace lhd
