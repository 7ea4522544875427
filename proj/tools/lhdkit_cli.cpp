// lhdkit command-line tool: design generation, criterion evaluation, basis
// reduction, and the integration/emulation benchmark harness.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lhdkit/bench.hpp"
#include "lhdkit/emulator.hpp"
#include "lhdkit/io.hpp"
#include "lhdkit/optimize.hpp"
#include "lhdkit/rng.hpp"
#include "lhdkit/test_functions.hpp"

namespace {

using namespace lhd;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << text;
}

std::string sidecar_path_for(const std::string& design_path) {
  const auto dot = design_path.rfind('.');
  const std::string stem =
      dot == std::string::npos ? design_path : design_path.substr(0, dot);
  return stem + ".json";
}

struct GenerateArgs {
  std::string method = "lhd";
  long long n = 0;
  std::size_t d = 0;
  std::string criterion = "WD";
  long long iters = 0;
  long long restarts = 0;
  long long slices = 2;
  long long m = 0;
  std::vector<long long> v, delta;
  std::string out = "design.csv";
  long long progress_stride = 0;
};

int run_generate(const GenerateArgs& a, std::uint64_t seed) {
  Sidecar sc;
  sc.seed = seed;
  Design design;

  if (a.method == "lhd") {
    design = random_lhd(static_cast<std::size_t>(a.n), a.d, seed);
    sc.type = "lhd";
  } else if (a.method == "olhd") {
    SaConfig cfg;
    cfg.n = static_cast<std::size_t>(a.n);
    cfg.d = a.d;
    cfg.kind = criterion_from_string(a.criterion);
    if (a.iters > 0) cfg.iters = a.iters;
    cfg.seed = seed;
    cfg.progress_stride = a.progress_stride;
    cfg.progress = a.progress_stride > 0 ? &std::cerr : nullptr;
    design = sa_optimize_lhd(cfg);
    sc.type = "olhd";
    sc.criterion = to_string(cfg.kind);
    sc.value = criterion_full(design, cfg.kind);
  } else if (a.method == "llhd" || a.method == "sliced-llhd") {
    LlhdConfig cfg;
    cfg.n = a.n;
    cfg.d = a.d;
    cfg.kind = criterion_from_string(a.criterion);
    cfg.iters = a.iters;
    cfg.restarts = a.restarts;
    cfg.slices = a.method == "sliced-llhd" ? a.slices : 1;
    cfg.seed = seed;
    cfg.progress_stride = a.progress_stride;
    cfg.progress = a.progress_stride > 0 ? &std::cerr : nullptr;
    LlhdResult res = llhd_optimize(cfg);
    design = std::move(res.points);
    sc.type = a.method;
    sc.v = res.spec.v;
    sc.delta = res.spec.delta;
    sc.criterion = to_string(cfg.kind);
    sc.value = res.criterion;
  } else if (a.method == "plhd") {
    LlhdResult res = korobov_search(a.n, a.d, criterion_from_string(a.criterion));
    design = std::move(res.points);
    sc.type = "plhd";
    sc.v = res.spec.v;
    sc.delta = res.spec.delta;
    sc.criterion = a.criterion;
    sc.value = res.criterion;
  } else if (a.method == "rlhd") {
    if (a.m <= 0 || a.v.empty()) {
      throw ValidationError("rlhd needs --m and --v");
    }
    std::vector<long long> delta = a.delta;
    if (delta.empty()) {
      Rng rng(seed);
      delta.resize(a.v.size());
      for (auto& dk : delta) dk = static_cast<long long>(rng.below(static_cast<std::uint64_t>(a.m)));
    }
    const RlhdSpec spec(a.n, a.m, a.v, delta);
    design = rlhd_points(spec).first;
    sc.type = "rlhd";
    sc.m = spec.m;
    sc.v = spec.v;
    sc.delta = spec.delta;
  } else {
    throw ValidationError("unknown method: " + a.method);
  }

  sc.n = static_cast<long long>(design.n());
  sc.d = static_cast<long long>(design.d());
  write_design_csv(a.out, design);
  write_sidecar(sidecar_path_for(a.out), sc);
  std::cerr << "wrote " << design.n() << "x" << design.d() << " design to " << a.out
            << "\n";
  return 0;
}

int run_evaluate(const std::string& design_path, std::vector<std::string> criteria,
                 std::size_t resolution, const std::string& out) {
  const Design design = read_design_csv(design_path);
  if (criteria.empty()) {
    criteria = {"WS", "WA", "WP", "WD", "RS", "AS"};
    if (design.d() >= 2) {
      criteria.push_back("WS2");
      criteria.push_back("RS2");
      if (design.d() <= 3) criteria.push_back("WF2");
    }
  }
  CriterionOptions opt;
  opt.wf2_resolution = resolution;
  std::ostringstream os;
  os << "criterion,value\n";
  for (const auto& name : criteria) {
    const Criterion kind = criterion_from_string(name);
    os << to_string(kind) << ',' << format_double(criterion_full(design, kind, opt))
       << '\n';
  }
  write_text(out, os.str());
  return 0;
}

int run_reduce(long long n, const std::vector<long long>& v, const std::string& out) {
  if (v.size() != 2) throw ValidationError("reduce needs a 2-entry --v");
  const ReducedBasis rb = gaussian_reduce(n, v[0], v[1]);
  std::ostringstream os;
  os << "a,(" << rb.a[0] << ' ' << rb.a[1] << ")\n";
  os << "b,(" << rb.b[0] << ' ' << rb.b[1] << ")\n";
  os << "y," << format_double(rb.y) << '\n';
  os << "z," << format_double(rb.z) << '\n';
  os << "norm_a," << format_double(rb.norm_a()) << '\n';
  os << "separation," << format_double(rb.separation()) << '\n';
  os << "fill," << format_double(rb.fill()) << '\n';
  os << "iterations," << rb.iterations << '\n';
  write_text(out, os.str());
  return 0;
}

int run_emulate(const std::string& design_path, const std::string& sidecar_path,
                const std::string& outputs_path, const std::string& test_path,
                const std::string& pred_path, const std::string& theta_arg,
                long long q_window, int num_windows, double nugget,
                std::uint64_t seed) {
  const Sidecar sc = read_sidecar(sidecar_path);
  const RlhdSpec spec = rlhd_spec_from_sidecar(sc);
  auto [design, index] = rlhd_points(spec);

  // The design file is authoritative for row order; verify it matches.
  const Design from_file = read_design_csv(design_path);
  if (from_file.n() != design.n() || from_file.d() != design.d()) {
    throw ValidationError("design file does not match the sidecar spec");
  }

  const std::vector<double> outputs = read_outputs_csv(outputs_path);
  if (outputs.size() != design.n()) {
    throw ValidationError("outputs length does not match the design");
  }

  GpHyperParams params;
  params.nugget = nugget;
  if (theta_arg == "auto") {
    params = estimate_lengthscales(spec, index, outputs, q_window, num_windows, seed,
                                   nugget);
    std::cerr << "estimated theta:";
    for (double t : params.theta) std::cerr << ' ' << t;
    std::cerr << "\n";
  } else {
    std::stringstream ss(theta_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) params.theta.push_back(std::stod(tok));
    if (params.theta.size() != spec.dim()) {
      throw ValidationError("--theta needs one value per dimension or 'auto'");
    }
  }

  const LocalGpModel model = LocalGpModel::fit(spec, index, outputs, params);
  const Design test = read_design_csv(test_path);
  std::vector<double> mean, var;
  model.predict_batch(test, mean, var);

  std::ostringstream os;
  os << "mean,variance\n";
  for (std::size_t i = 0; i < mean.size(); ++i) {
    os << format_double(mean[i]) << ',' << format_double(var[i]) << '\n';
  }
  write_text(pred_path, os.str());
  std::cerr << "predicted " << mean.size() << " points using "
            << model.window_count() << " windows and "
            << model.factorization_count() << " factorization(s)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"space-filling lattice Latin hypercube designs and local GP emulation"};
  app.require_subcommand(1);
  app.fallthrough();  // global --seed/--threads may follow the subcommand

  std::uint64_t seed = 0;
  int threads = 1;
  app.add_option("--seed", seed, "global RNG seed")->capture_default_str();
  app.add_option("--threads", threads, "worker threads for benchmark cells")
      ->capture_default_str();

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "construct a design");
  generate->add_option("--method", gen.method,
                       "lhd | olhd | llhd | plhd | sliced-llhd | rlhd")
      ->required();
  generate->add_option("--n", gen.n, "points (lattice n for rlhd)")->required();
  generate->add_option("--d", gen.d, "dimensions");
  generate->add_option("--criterion", gen.criterion, "optimization criterion")
      ->capture_default_str();
  generate->add_option("--iters", gen.iters, "iteration budget T");
  generate->add_option("--restarts", gen.restarts, "restart count Q (llhd)");
  generate->add_option("--slices", gen.slices, "slice count (sliced-llhd)");
  generate->add_option("--m", gen.m, "local design size (rlhd)");
  generate->add_option("--v", gen.v, "generator vector (rlhd)")->delimiter(',');
  generate->add_option("--delta", gen.delta, "shift vector (rlhd)")->delimiter(',');
  generate->add_option("--out", gen.out, "output CSV path")->capture_default_str();
  generate->add_option("--progress-stride", gen.progress_stride,
                       "emit iter,best to stderr every N iterations");

  std::string eval_design, eval_out = "-";
  std::vector<std::string> eval_criteria;
  std::size_t eval_resolution = 256;
  auto* evaluate = app.add_subcommand("evaluate", "criteria of a design file");
  evaluate->add_option("--design", eval_design, "design CSV")->required();
  evaluate->add_option("--criterion", eval_criteria, "criteria (default: all)")
      ->delimiter(',');
  evaluate->add_option("--resolution", eval_resolution, "WF2 grid resolution")
      ->capture_default_str();
  evaluate->add_option("--out", eval_out, "output path or - for stdout");

  long long red_n = 0;
  std::vector<long long> red_v;
  std::string red_out = "-";
  auto* reduce = app.add_subcommand("reduce", "Gaussian basis reduction of a 2-D spec");
  reduce->add_option("--n", red_n)->required();
  reduce->add_option("--v", red_v, "two generator entries")->delimiter(',')->required();
  reduce->add_option("--out", red_out);

  long long cs_n = 100;
  std::size_t cs_d = 4;
  int cs_designs = 1000;
  std::string cs_out = "-";
  auto* corr = app.add_subcommand("corr-study", "criterion correlations over random designs");
  corr->add_option("--n", cs_n)->capture_default_str();
  corr->add_option("--d", cs_d)->capture_default_str();
  corr->add_option("--designs", cs_designs)->capture_default_str();
  corr->add_option("--out", cs_out);

  std::vector<std::string> bi_functions{"borehole"};
  std::vector<std::string> bi_methods{"lhd", "llhd-wd"};
  std::vector<long long> bi_ngrid{256, 512, 1024};
  int bi_replicates = 50;
  std::string bi_out = "-";
  auto* bench_int = app.add_subcommand("bench-integrate", "integration error benchmark");
  bench_int->add_option("--functions", bi_functions)->delimiter(',');
  bench_int->add_option("--methods", bi_methods)->delimiter(',');
  bench_int->add_option("--n-grid", bi_ngrid)->delimiter(',');
  bench_int->add_option("--replicates", bi_replicates)->capture_default_str();
  bench_int->add_option("--out", bi_out);

  std::string be_function = "ackley";
  long long be_ntarget = 2000, be_m = 100, be_q = 50;
  int be_ntest = 200;
  std::string be_out = "-";
  auto* bench_emu = app.add_subcommand("bench-emulate", "emulation RMSE benchmark");
  bench_emu->add_option("--function", be_function)->capture_default_str();
  bench_emu->add_option("--n-target", be_ntarget)->capture_default_str();
  bench_emu->add_option("--m", be_m)->capture_default_str();
  bench_emu->add_option("--q", be_q)->capture_default_str();
  bench_emu->add_option("--n-test", be_ntest)->capture_default_str();
  bench_emu->add_option("--out", be_out);

  std::string em_design, em_sidecar, em_outputs, em_test, em_pred = "pred.csv";
  std::string em_theta = "auto";
  long long em_q = 50;
  int em_B = 10;
  double em_nugget = 1e-8;
  auto* emulate = app.add_subcommand("emulate", "local GP prediction over an rlhd design");
  emulate->add_option("--design", em_design)->required();
  emulate->add_option("--sidecar", em_sidecar)->required();
  emulate->add_option("--outputs", em_outputs)->required();
  emulate->add_option("--test", em_test)->required();
  emulate->add_option("--pred", em_pred)->capture_default_str();
  emulate->add_option("--theta", em_theta, "auto or comma-separated values")
      ->capture_default_str();
  emulate->add_option("--q", em_q, "estimation window width")->capture_default_str();
  emulate->add_option("--windows", em_B, "estimation window count")->capture_default_str();
  emulate->add_option("--nugget", em_nugget)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (*generate) return run_generate(gen, seed);
    if (*evaluate) return run_evaluate(eval_design, eval_criteria, eval_resolution, eval_out);
    if (*reduce) return run_reduce(red_n, red_v, red_out);
    if (*corr) {
      const CorrelationStudy study = correlation_study(cs_n, cs_d, cs_designs, seed);
      write_text(cs_out, correlation_csv(study));
      return 0;
    }
    if (*bench_int) {
      const IntegrationResult res = integration_benchmark(
          bi_functions, bi_methods, bi_ngrid, bi_replicates, seed, threads);
      write_text(bi_out, integration_csv(res));
      return 0;
    }
    if (*bench_emu) {
      const EmulationReport rep =
          emulation_benchmark(be_function, be_ntarget, be_m, be_q, be_ntest, seed);
      write_text(be_out, emulation_csv(rep));
      return 0;
    }
    if (*emulate) {
      return run_emulate(em_design, em_sidecar, em_outputs, em_test, em_pred, em_theta,
                         em_q, em_B, em_nugget, seed);
    }
  } catch (const lhd::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lhd::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
