#include "lhdkit/test_functions.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>

namespace lhd {

double TestFunction::evaluate_unit(std::span<const double> u) const {
  if (u.size() != dim) {
    throw ValidationError(name + " expects d=" + std::to_string(dim) + ", got " +
                          std::to_string(u.size()));
  }
  std::vector<double> x(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    if (!(u[k] >= 0.0 && u[k] <= 1.0)) {
      throw ValidationError("evaluation point outside the unit cube");
    }
    x[k] = bounds[k][0] + u[k] * (bounds[k][1] - bounds[k][0]);
  }
  return eval_native(x);
}

namespace {

using std::numbers::pi;

// Genz product peak with a_i = 5, u_i = 0.5.
constexpr double kGenzA = 5.0;
constexpr double kGenzU = 0.5;

double prpeak(std::span<const double> x) {
  double prod = 1.0;
  for (double xi : x) {
    const double t = xi - kGenzU;
    prod *= 1.0 / (1.0 / (kGenzA * kGenzA) + t * t);
  }
  return prod;
}

double prpeak_mean(std::size_t d) {
  // per-axis integral: a * [atan(a(1-u)) + atan(a u)]
  const double per = kGenzA * (std::atan(kGenzA * (1.0 - kGenzU)) +
                               std::atan(kGenzA * kGenzU));
  return std::pow(per, static_cast<double>(d));
}

// Genz oscillatory with a_i = 5, u_1 = 0.5.
double oscil(std::span<const double> x) {
  double s = 2.0 * pi * kGenzU;
  for (double xi : x) s += kGenzA * xi;
  return std::cos(s);
}

double oscil_mean(std::size_t d) {
  // Re{ e^{2 pi i u1} prod_k (e^{i a} - 1) / (i a) }
  const std::complex<double> I(0.0, 1.0);
  std::complex<double> prod = std::exp(2.0 * pi * kGenzU * I);
  for (std::size_t k = 0; k < d; ++k) {
    prod *= (std::exp(I * kGenzA) - 1.0) / (I * kGenzA);
  }
  return prod.real();
}

// Sobol' g-function with a_i = (i - 1) / 2; each factor integrates to 1.
double gfunction(std::span<const double> x) {
  double prod = 1.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double a = static_cast<double>(k) / 2.0;
    prod *= (std::abs(4.0 * x[k] - 2.0) + a) / (1.0 + a);
  }
  return prod;
}

double borehole(std::span<const double> x) {
  const double rw = x[0], r = x[1], Tu = x[2], Hu = x[3];
  const double Tl = x[4], Hl = x[5], L = x[6], Kw = x[7];
  const double lnr = std::log(r / rw);
  const double num = 2.0 * pi * Tu * (Hu - Hl);
  const double den = lnr * (1.0 + 2.0 * L * Tu / (lnr * rw * rw * Kw) + Tu / Tl);
  return num / den;
}

double ackley(std::span<const double> x) {
  const double a = 20.0, b = 0.2, c = 2.0 * pi;
  double sq = 0.0, cs = 0.0;
  for (double xi : x) {
    sq += xi * xi;
    cs += std::cos(c * xi);
  }
  const double n = static_cast<double>(x.size());
  return -a * std::exp(-b * std::sqrt(sq / n)) - std::exp(cs / n) + a + std::exp(1.0);
}

double shekel(std::span<const double> x) {
  static constexpr double C[4][10] = {
      {4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0},
      {4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6},
      {4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0},
      {4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6}};
  static constexpr double B[10] = {0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5};
  double s = 0.0;
  for (int i = 0; i < 10; ++i) {
    double inner = B[i];
    for (int k = 0; k < 4; ++k) {
      const double t = x[static_cast<std::size_t>(k)] - C[k][i];
      inner += t * t;
    }
    s -= 1.0 / inner;
  }
  return s;
}

double michalewicz(std::span<const double> x) {
  constexpr double m = 10.0;
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double term =
        std::sin(x[k]) *
        std::pow(std::sin(static_cast<double>(k + 1) * x[k] * x[k] / pi), 2.0 * m);
    s -= term;
  }
  return s;
}

std::map<std::string, TestFunction, std::less<>> build_registry() {
  std::map<std::string, TestFunction, std::less<>> reg;

  auto unit_bounds = [](std::size_t d) {
    return std::vector<std::array<double, 2>>(d, {0.0, 1.0});
  };

  {
    TestFunction f;
    f.name = "prpeak";
    f.dim = 3;
    f.bounds = unit_bounds(3);
    f.eval_native = prpeak;
    f.reference_mean = prpeak_mean(3);
    f.reference_note = "analytic (Genz product peak, a=5, u=0.5)";
    reg.emplace(f.name, std::move(f));
  }
  {
    TestFunction f;
    f.name = "oscil";
    f.dim = 12;
    f.bounds = unit_bounds(12);
    f.eval_native = oscil;
    f.reference_mean = oscil_mean(12);
    f.reference_note = "analytic (Genz oscillatory, a=5, u1=0.5)";
    reg.emplace(f.name, std::move(f));
  }
  {
    TestFunction f;
    f.name = "gfunction";
    f.dim = 5;
    f.bounds = unit_bounds(5);
    f.eval_native = gfunction;
    f.reference_mean = 1.0;
    f.reference_note = "analytic (each factor integrates to 1)";
    reg.emplace(f.name, std::move(f));
  }
  {
    TestFunction f;
    f.name = "borehole";
    f.dim = 8;
    f.bounds = {{0.05, 0.15}, {100.0, 50000.0}, {63070.0, 115600.0}, {990.0, 1110.0},
                {63.1, 116.0}, {700.0, 820.0},  {1120.0, 1680.0},    {9855.0, 12045.0}};
    f.eval_native = borehole;
    f.reference_mean = 77.651361984146433;
    f.reference_note =
        "rank-1 lattice estimate, n=1048573, Korobov g=297178, shift seed 20240801; cross-checked against an independent n=2000003 lattice";
    reg.emplace(f.name, std::move(f));
  }
  {
    TestFunction f;
    f.name = "ackley";
    f.dim = 3;
    f.bounds = std::vector<std::array<double, 2>>(3, {-32.768, 32.768});
    f.eval_native = ackley;
    f.reference_mean = 20.674445054457273;
    f.reference_note =
        "rank-1 lattice estimate, n=1048573, Korobov g=297178, shift seed 20240801; cross-checked against an independent n=2000003 lattice";
    reg.emplace(f.name, std::move(f));
  }
  {
    TestFunction f;
    f.name = "shekel";
    f.dim = 4;
    f.bounds = std::vector<std::array<double, 2>>(4, {0.0, 10.0});
    f.eval_native = shekel;
    f.reference_mean = -0.3030476160290187;
    f.reference_note =
        "rank-1 lattice estimate, n=1048573, Korobov g=297178, shift seed 20240801; cross-checked against an independent n=2000003 lattice";
    reg.emplace(f.name, std::move(f));
  }
  {
    TestFunction f;
    f.name = "michalewicz";
    f.dim = 6;
    f.bounds = std::vector<std::array<double, 2>>(6, {0.0, pi});
    f.eval_native = michalewicz;
    f.reference_mean = -0.65463844587366615;
    f.reference_note =
        "rank-1 lattice estimate, n=1048573, Korobov g=297178, shift seed 20240801; cross-checked against an independent n=2000003 lattice";
    reg.emplace(f.name, std::move(f));
  }
  return reg;
}

const std::map<std::string, TestFunction, std::less<>>& registry() {
  static const auto reg = build_registry();
  return reg;
}

}  // namespace

const TestFunction& test_function(std::string_view name) {
  const auto& reg = registry();
  const auto it = reg.find(name);
  if (it == reg.end()) {
    throw ValidationError("unknown test function: " + std::string(name));
  }
  return it->second;
}

std::vector<std::string> test_function_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

double evaluate_function(std::string_view name, std::span<const double> unit_x) {
  return test_function(name).evaluate_unit(unit_x);
}

}  // namespace lhd
