#include "lhdkit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "lhdkit/emulator.hpp"
#include "lhdkit/io.hpp"
#include "lhdkit/optimize.hpp"
#include "lhdkit/rng.hpp"
#include "lhdkit/test_functions.hpp"

namespace lhd {

std::string bench_metadata_line(std::uint64_t seed, const std::string& config) {
  std::ostringstream os;
  os << "# lhdkit " << kToolVersion << " seed=" << seed << " config=" << std::hex
     << fnv1a64(config);
  return os.str();
}

namespace {

double design_mean(const Design& x, const TestFunction& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.n(); ++i) s += f.evaluate_unit(x.row(i));
  return s / static_cast<double>(x.n());
}

Design shifted_lattice(const LatticeSpec& base, Rng& rng) {
  std::vector<long long> delta(base.dim());
  for (auto& dk : delta) dk = static_cast<long long>(rng.below(static_cast<std::uint64_t>(base.n)));
  return lattice_points(LatticeSpec(base.n, base.v, delta));
}

Design build_method_design(const std::string& method, const TestFunction& f,
                           long long n, std::uint64_t cell_seed) {
  const auto d = f.dim;
  if (method == "lhd") {
    return random_lhd(static_cast<std::size_t>(n), d, cell_seed);
  }
  if (method == "olhd-wd") {
    SaConfig cfg;
    cfg.n = static_cast<std::size_t>(n);
    cfg.d = d;
    cfg.kind = Criterion::WD;
    cfg.seed = cell_seed;
    return sa_optimize_lhd(cfg);
  }
  if (method == "llhd-wd" || method == "llhd-ws2") {
    LlhdConfig cfg;
    cfg.n = n;
    cfg.d = d;
    cfg.kind = method == "llhd-wd" ? Criterion::WD : Criterion::WS2;
    cfg.seed = cell_seed;
    return llhd_optimize(cfg).points;
  }
  if (method == "plhd") {
    // Deterministic Korobov search plus a random per-replicate shift
    // (criteria are shift-invariant; the estimator is not).
    const LlhdResult res = korobov_search(n, d, Criterion::WD);
    Rng rng(derive_seed(cell_seed, 0x9d));
    return shifted_lattice(res.spec, rng);
  }
  throw ValidationError("unknown integration method: " + method);
}

}  // namespace

IntegrationResult integration_benchmark(const std::vector<std::string>& functions,
                                        const std::vector<std::string>& methods,
                                        const std::vector<long long>& n_grid,
                                        int replicates, std::uint64_t seed,
                                        int threads) {
  if (replicates < 1) throw ValidationError("replicates must be >= 1");
  for (const auto& fn : functions) (void)test_function(fn);  // validate early

  struct Cell {
    std::string function, method;
    long long n;
    int replicate;
  };
  std::vector<Cell> cells;
  for (const auto& fn : functions) {
    for (const auto& method : methods) {
      for (long long n : n_grid) {
        for (int r = 0; r < replicates; ++r) cells.push_back({fn, method, n, r});
      }
    }
  }

  IntegrationResult out;
  out.rows.resize(cells.size());
  auto run_cell = [&](std::size_t c) {
    const Cell& cell = cells[c];
    const TestFunction& f = test_function(cell.function);
    const std::string tag = cell.function + "|" + cell.method + "|" +
                            std::to_string(cell.n) + "|" + std::to_string(cell.replicate);
    const std::uint64_t cell_seed = derive_seed(seed, fnv1a64(tag));
    const Design x = build_method_design(cell.method, f, cell.n, cell_seed);
    const double err = std::abs(design_mean(x, f) - f.reference_mean);
    out.rows[c] = {cell.function, cell.method, cell.n, cell.replicate, err};
  };

  const int nthreads = std::max(1, threads);
  if (nthreads == 1) {
    for (std::size_t c = 0; c < cells.size(); ++c) run_cell(c);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&]() {
        for (;;) {
          const std::size_t c = next.fetch_add(1);
          if (c >= cells.size()) return;
          run_cell(c);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  std::ostringstream cfg;
  for (const auto& fn : functions) cfg << fn << ';';
  for (const auto& mth : methods) cfg << mth << ';';
  for (long long n : n_grid) cfg << n << ';';
  cfg << replicates;
  out.metadata = bench_metadata_line(seed, cfg.str());
  return out;
}

std::string integration_csv(const IntegrationResult& result) {
  std::ostringstream os;
  os << result.metadata << '\n';
  os << "function,method,n,replicate,error\n";
  for (const auto& row : result.rows) {
    os << row.function << ',' << row.method << ',' << row.n << ',' << row.replicate
       << ',' << format_double(row.error) << '\n';
  }
  return os.str();
}

namespace {

std::array<std::array<double, 4>, 4> pearson4(const std::vector<std::array<double, 4>>& samples) {
  std::array<double, 4> mean{};
  for (const auto& s : samples) {
    for (int k = 0; k < 4; ++k) mean[static_cast<std::size_t>(k)] += s[static_cast<std::size_t>(k)];
  }
  for (auto& m : mean) m /= static_cast<double>(samples.size());
  std::array<std::array<double, 4>, 4> cov{};
  for (const auto& s : samples) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        cov[a][b] += (s[a] - mean[a]) * (s[b] - mean[b]);
      }
    }
  }
  std::array<std::array<double, 4>, 4> corr{};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      corr[a][b] = cov[a][b] / std::sqrt(cov[a][a] * cov[b][b]);
    }
  }
  return corr;
}

}  // namespace

CorrelationStudy correlation_study(long long n, std::size_t d, int num_designs,
                                   std::uint64_t seed) {
  if (num_designs < 100) throw ValidationError("correlation study needs >= 100 designs");
  const std::vector<long long> pool = coprime_residues(n);
  if (pool.size() < d) {
    throw ValidationError("correlation study requires d <= p(n) for distinct generators");
  }

  std::vector<std::array<double, 4>> llhd_vals, lhd_vals;
  llhd_vals.reserve(static_cast<std::size_t>(num_designs));
  lhd_vals.reserve(static_cast<std::size_t>(num_designs));

  Rng rng(derive_seed(seed, 0xc0));
  std::vector<long long> pool_copy = pool;
  std::vector<long long> v(d);
  for (int j = 0; j < num_designs; ++j) {
    // random distinct-entry generator, random shift
    pool_copy = pool;
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t pick = k + static_cast<std::size_t>(rng.below(pool_copy.size() - k));
      std::swap(pool_copy[k], pool_copy[pick]);
      v[k] = pool_copy[k];
    }
    llhd_vals.push_back({lattice_criterion(n, v, Criterion::WS),
                         lattice_criterion(n, v, Criterion::WP),
                         lattice_criterion(n, v, Criterion::WD), ws2_fast(n, v)});

    const Design x = random_lhd(static_cast<std::size_t>(n), d,
                                derive_seed(seed, 0x1000 + static_cast<std::uint64_t>(j)));
    lhd_vals.push_back({criterion_full(x, Criterion::WS), criterion_full(x, Criterion::WP),
                        criterion_full(x, Criterion::WD), criterion_full(x, Criterion::WS2)});
  }

  CorrelationStudy study;
  study.llhd = pearson4(llhd_vals);
  study.lhd = pearson4(lhd_vals);
  study.metadata = bench_metadata_line(
      seed, "corr;" + std::to_string(n) + ";" + std::to_string(d) + ";" +
                std::to_string(num_designs));
  return study;
}

std::string correlation_csv(const CorrelationStudy& study) {
  std::ostringstream os;
  os << study.metadata << '\n';
  os << "family,ci,cj,corr\n";
  for (int fam = 0; fam < 2; ++fam) {
    const auto& mat = fam == 0 ? study.lhd : study.llhd;
    const char* name = fam == 0 ? "lhd" : "llhd";
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        os << name << ',' << CorrelationStudy::kCriteria[static_cast<std::size_t>(a)]
           << ',' << CorrelationStudy::kCriteria[static_cast<std::size_t>(b)] << ','
           << format_double(mat[a][b]) << '\n';
      }
    }
  }
  return os.str();
}

namespace {

double rmse(const std::vector<double>& pred, const std::vector<double>& truth) {
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double e = pred[i] - truth[i];
    s += e * e;
  }
  return std::sqrt(s / static_cast<double>(pred.size()));
}

Design uniform_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Design x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) x(i, k) = rng.uniform();
  }
  return x;
}

}  // namespace

EmulationReport emulation_benchmark(const std::string& function, long long n_target,
                                    long long m, long long q_window, int n_test,
                                    std::uint64_t seed) {
  const TestFunction& f = test_function(function);
  const std::size_t d = f.dim;
  if (m < 3) throw ValidationError("emulation requires m >= 3");
  if (n_test < 1) throw ValidationError("emulation requires n_test >= 1");

  EmulationReport report;
  using clock = std::chrono::steady_clock;

  // ---- RLHD arm: one shared factorization for every window -----------------
  const auto t0 = clock::now();
  const LlhdConfig vcfg{.n = m, .d = d, .kind = Criterion::WS, .seed = derive_seed(seed, 1)};
  const std::vector<long long> v = llhd_optimize(vcfg).spec.v;

  Rng delta_rng(derive_seed(seed, 2));
  std::vector<long long> delta(d);
  for (auto& dk : delta) dk = static_cast<long long>(delta_rng.below(static_cast<std::uint64_t>(m)));

  // n chosen so the expected size n^d / m^{d-1} matches the target budget,
  // rounded to a multiple of m so every point lies in a translation-lattice
  // window and training sites interpolate.
  const double n_real = std::pow(static_cast<double>(n_target) *
                                     std::pow(static_cast<double>(m), static_cast<double>(d) - 1.0),
                                 1.0 / static_cast<double>(d));
  const long long n_grid =
      m * std::max<long long>(1, std::llround(n_real / static_cast<double>(m)));
  const RlhdSpec spec(n_grid, m, v, delta);
  auto [design, index] = rlhd_points(spec);

  std::vector<double> outputs(design.n());
  for (std::size_t i = 0; i < design.n(); ++i) outputs[i] = f.evaluate_unit(design.row(i));

  const GpHyperParams theta = estimate_lengthscales(spec, index, outputs, q_window, 10,
                                                    derive_seed(seed, 3));
  const LocalGpModel model = LocalGpModel::fit(spec, index, outputs, theta);

  const Design test = uniform_points(static_cast<std::size_t>(n_test), d, derive_seed(seed, 4));
  std::vector<double> truth(test.n());
  for (std::size_t i = 0; i < test.n(); ++i) truth[i] = f.evaluate_unit(test.row(i));

  std::vector<double> mean, var;
  model.predict_batch(test, mean, var);
  report.rmse_rlhd = rmse(mean, truth);

  std::vector<double> train_mean, train_var;
  model.predict_batch(design, train_mean, train_var);
  report.training_rmse = rmse(train_mean, outputs);

  report.n_grid = n_grid;
  report.design_size = design.n();
  report.theta = theta.theta;
  report.rlhd_factorizations = model.factorization_count();
  report.rlhd_windows = model.window_count();
  report.seconds_rlhd = std::chrono::duration<double>(clock::now() - t0).count();

  // ---- PD baseline: 2^d equal subcubes, random LHD + kriging each ----------
  const auto t1 = clock::now();
  const std::size_t cubes = std::size_t{1} << d;
  const std::size_t m_pd = std::max<std::size_t>(4, design.n() / cubes);

  std::vector<KrigingModel> pd_models;
  pd_models.reserve(cubes);
  GpHyperParams pd_theta;
  for (std::size_t cube = 0; cube < cubes; ++cube) {
    const Design local = random_lhd(m_pd, d, derive_seed(seed, 100 + cube));
    Eigen::MatrixXd sites(static_cast<Eigen::Index>(m_pd), static_cast<Eigen::Index>(d));
    Eigen::VectorXd y(static_cast<Eigen::Index>(m_pd));
    for (std::size_t i = 0; i < m_pd; ++i) {
      std::vector<double> pt(d);
      for (std::size_t k = 0; k < d; ++k) {
        const double lo = (cube >> k) & 1U ? 0.5 : 0.0;
        pt[k] = lo + 0.5 * local(i, k);
        sites(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = pt[k];
      }
      y(static_cast<Eigen::Index>(i)) = f.evaluate_unit(pt);
    }
    if (cube == 0) {
      // ML lengthscales on the first subcube, shared across all of them.
      std::vector<Eigen::VectorXd> ys{y};
      std::vector<double> buf(d);
      auto obj = [&](std::span<const double> logt) {
        for (std::size_t k = 0; k < d; ++k) buf[k] = std::exp(logt[k]);
        return composite_negloglik(sites, ys, buf, 1e-8);
      };
      const std::vector<double> log0(d, std::log(0.25));
      const SimplexResult sr = simplex_minimize(obj, log0, std::log(100.0), 120);
      pd_theta.theta.resize(d);
      for (std::size_t k = 0; k < d; ++k) pd_theta.theta[k] = std::exp(sr.x[k]);
      pd_theta.nugget = 1e-8;
    }
    pd_models.push_back(KrigingModel::fit(std::move(sites), std::move(y), pd_theta));
  }

  std::vector<double> pd_pred(test.n());
  for (std::size_t i = 0; i < test.n(); ++i) {
    std::size_t cube = 0;
    for (std::size_t k = 0; k < d; ++k) {
      if (test(i, k) >= 0.5) cube |= std::size_t{1} << k;
    }
    pd_pred[i] = pd_models[cube].predict(test.row(i)).first;
  }
  report.rmse_pd = rmse(pd_pred, truth);
  report.seconds_pd = std::chrono::duration<double>(clock::now() - t1).count();

  report.metadata = bench_metadata_line(
      seed, "emulate;" + function + ";" + std::to_string(n_target) + ";" +
                std::to_string(m) + ";" + std::to_string(q_window) + ";" +
                std::to_string(n_test));
  return report;
}

std::string emulation_csv(const EmulationReport& report) {
  std::ostringstream os;
  os << report.metadata << '\n';
  os << "metric,value\n";
  os << "n_grid," << report.n_grid << '\n';
  os << "design_size," << report.design_size << '\n';
  for (std::size_t k = 0; k < report.theta.size(); ++k) {
    os << "theta" << (k + 1) << ',' << format_double(report.theta[k]) << '\n';
  }
  os << "rmse_rlhd," << format_double(report.rmse_rlhd) << '\n';
  os << "rmse_pd," << format_double(report.rmse_pd) << '\n';
  os << "training_rmse," << format_double(report.training_rmse) << '\n';
  os << "rlhd_factorizations," << report.rlhd_factorizations << '\n';
  os << "rlhd_windows," << report.rlhd_windows << '\n';
  os << "seconds_rlhd," << format_double(report.seconds_rlhd) << '\n';
  os << "seconds_pd," << format_double(report.seconds_pd) << '\n';
  return os.str();
}

}  // namespace lhd
