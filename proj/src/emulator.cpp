#include "lhdkit/emulator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <string>

#include "lhdkit/rng.hpp"

namespace lhd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_params(const GpHyperParams& params, std::size_t d) {
  if (params.theta.size() != d) {
    throw ValidationError("lengthscale dimension mismatch");
  }
  for (double t : params.theta) {
    if (!(t > 0.0)) throw ValidationError("lengthscales must be positive");
  }
  if (!(params.nugget >= 0.0)) throw ValidationError("nugget must be >= 0");
}

double corr_value(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b,
                  std::span<const double> theta) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double h = (a[k] - b[k]) / theta[static_cast<std::size_t>(k)];
    s += h * h;
  }
  return std::exp(-s);
}

}  // namespace

Eigen::MatrixXd corr_matrix(const Eigen::MatrixXd& points, const GpHyperParams& params) {
  validate_params(params, static_cast<std::size_t>(points.cols()));
  const Eigen::Index k = points.rows();
  Eigen::MatrixXd R(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    R(i, i) = 1.0 + params.nugget;
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double r = corr_value(points.row(i), points.row(j), params.theta);
      R(i, j) = r;
      R(j, i) = r;
    }
  }
  return R;
}

namespace {

// Condition estimate via the eigenvalue ratio; only used on error paths.
std::string condition_note(const Eigen::MatrixXd& K) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return "lambda_min=" + std::to_string(ev(0)) +
         " lambda_max=" + std::to_string(ev(ev.size() - 1));
}

}  // namespace

KrigingModel KrigingModel::fit(Eigen::MatrixXd sites, Eigen::VectorXd y,
                               GpHyperParams params) {
  if (sites.rows() != y.size() || sites.rows() < 1) {
    throw ValidationError("kriging outputs do not match sites");
  }
  validate_params(params, static_cast<std::size_t>(sites.cols()));
  KrigingModel m;
  m.sites = std::move(sites);
  m.y = std::move(y);
  m.params = std::move(params);
  Eigen::MatrixXd K = corr_matrix(m.sites, m.params);
  m.chol.compute(K);
  if (m.chol.info() != Eigen::Success) {
    throw NumericalError("correlation matrix not positive definite (" +
                         condition_note(K) + ")");
  }
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(m.sites.rows());
  m.kinv_one = m.chol.solve(one);
  m.one_kinv_one = one.dot(m.kinv_one);
  m.beta = m.kinv_one.dot(m.y) / m.one_kinv_one;
  const Eigen::VectorXd resid = m.y.array() - m.beta;
  m.alpha = m.chol.solve(resid);
  m.sigma2 = resid.dot(m.alpha) / static_cast<double>(m.sites.rows());
  return m;
}

std::pair<double, double> KrigingModel::predict(std::span<const double> x) const {
  const Eigen::Index k = sites.rows();
  Eigen::VectorXd r(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < sites.cols(); ++c) {
      const double h = (x[static_cast<std::size_t>(c)] - sites(i, c)) /
                       params.theta[static_cast<std::size_t>(c)];
      s += h * h;
    }
    r(i) = std::exp(-s);
  }
  const double mean = beta + r.dot(alpha);
  const Eigen::VectorXd kinv_r = chol.solve(r);
  const double u = 1.0 - kinv_one.dot(r);
  double var = sigma2 * (1.0 - r.dot(kinv_r) + u * u / one_kinv_one);
  if (var < 0.0) var = 0.0;
  return {mean, var};
}

LocalGpModel::LocalGpModel(RlhdSpec spec, PointIndex index)
    : spec_(std::move(spec)), index_(std::move(index)) {}

LocalGpModel LocalGpModel::fit(const RlhdSpec& spec, const PointIndex& index,
                               std::span<const double> outputs, GpHyperParams params) {
  validate_params(params, spec.dim());
  if (outputs.size() != index.size()) {
    throw ValidationError("outputs do not cover the enumerated design (" +
                          std::to_string(outputs.size()) + " of " +
                          std::to_string(index.size()) + ")");
  }
  LocalGpModel model(spec, index);
  model.outputs_.assign(outputs.begin(), outputs.end());

  const std::size_t d = spec.dim();
  const auto m = static_cast<std::size_t>(spec.m);
  model.rel_coords_.resize(m, std::vector<long long>(d));
  model.rel_sites_.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
  for (std::size_t t = 0; t < m; ++t) {
    for (std::size_t k = 0; k < d; ++k) {
      const long long r = (static_cast<long long>(t) * spec.v[k] + spec.delta[k]) % spec.m;
      model.rel_coords_[t][k] = r;
      model.rel_sites_(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) =
          (static_cast<double>(r) + 0.5) / static_cast<double>(spec.n);
    }
  }

  // Report missing (non-finite) outputs by their integer grid key.
  for (std::size_t t = 0; t < model.outputs_.size(); ++t) {
    if (!std::isfinite(model.outputs_[t])) {
      throw ValidationError("output at design row " + std::to_string(t) +
                            " is not finite");
    }
  }

  GpHyperParams p = std::move(params);
  for (;;) {
    Eigen::MatrixXd K = corr_matrix(model.rel_sites_, p);
    model.chol_.compute(K);
    if (model.chol_.info() == Eigen::Success) break;
    if (p.nugget >= 1e-4) {
      throw NumericalError("shared correlation matrix not positive definite (" +
                           condition_note(K) + ")");
    }
    p.nugget = std::min(p.nugget * 2.0, 1e-4);
    ++model.retries_;
    std::cerr << "warning: factorization failed, doubling nugget to " << p.nugget
              << "\n";
  }
  model.factorizations_ = 1;
  model.params_ = std::move(p);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(m));
  model.kinv_one_ = model.chol_.solve(one);
  model.one_kinv_one_ = one.dot(model.kinv_one_);
  return model;
}

const LocalGpModel::WindowSolve& LocalGpModel::window(
    const std::vector<long long>& corner) const {
  auto it = windows_.find(corner);
  if (it != windows_.end()) return it->second;

  const std::size_t d = spec_.dim();
  const auto m = static_cast<std::size_t>(spec_.m);
  Eigen::VectorXd yw(static_cast<Eigen::Index>(m));
  std::vector<long long> coords(d);
  for (std::size_t t = 0; t < m; ++t) {
    for (std::size_t k = 0; k < d; ++k) coords[k] = corner[k] + rel_coords_[t][k];
    const auto row = index_.lookup(coords);
    if (!row) {
      throw NumericalError("window point missing from the design index");
    }
    yw(static_cast<Eigen::Index>(t)) = outputs_[*row];
  }
  WindowSolve ws;
  ws.beta = kinv_one_.dot(yw) / one_kinv_one_;
  const Eigen::VectorXd resid = yw.array() - ws.beta;
  ws.alpha = chol_.solve(resid);
  ws.sigma2 = resid.dot(ws.alpha) / static_cast<double>(m);
  return windows_.emplace(corner, std::move(ws)).first->second;
}

std::pair<double, double> LocalGpModel::predict(std::span<const double> x) const {
  const std::size_t d = spec_.dim();
  if (x.size() != d) throw ValidationError("query dimension mismatch");
  const std::vector<long long> corner = prediction_window_corner(spec_, x);
  const WindowSolve& ws = window(corner);

  const auto m = static_cast<std::size_t>(spec_.m);
  Eigen::VectorXd r(static_cast<Eigen::Index>(m));
  for (std::size_t t = 0; t < m; ++t) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double site = (static_cast<double>(corner[k] + rel_coords_[t][k]) + 0.5) /
                          static_cast<double>(spec_.n);
      const double h = (x[k] - site) / params_.theta[k];
      s += h * h;
    }
    r(static_cast<Eigen::Index>(t)) = std::exp(-s);
  }
  const double mean = ws.beta + r.dot(ws.alpha);
  const Eigen::VectorXd kinv_r = chol_.solve(r);
  const double u = 1.0 - kinv_one_.dot(r);
  double var = ws.sigma2 * (1.0 - r.dot(kinv_r) + u * u / one_kinv_one_);
  if (var < 0.0) var = 0.0;  // tolerance -1e-10 checked in tests
  return {mean, var};
}

void LocalGpModel::predict_batch(const Design& queries, std::vector<double>& mean,
                                 std::vector<double>& variance) const {
  mean.resize(queries.n());
  variance.resize(queries.n());
  for (std::size_t i = 0; i < queries.n(); ++i) {
    const auto [mu, var] = predict(queries.row(i));
    mean[i] = mu;
    variance[i] = var;
  }
}

double composite_negloglik(const Eigen::MatrixXd& sites,
                           const std::vector<Eigen::VectorXd>& window_outputs,
                           std::span<const double> theta, double nugget) {
  const Eigen::Index q = sites.rows();
  if (q < 2 || window_outputs.empty()) {
    throw ValidationError("composite likelihood needs >= 2 sites and >= 1 window");
  }
  GpHyperParams params;
  params.theta.assign(theta.begin(), theta.end());
  params.nugget = nugget;
  validate_params(params, static_cast<std::size_t>(sites.cols()));

  Eigen::MatrixXd K = corr_matrix(sites, params);
  Eigen::LLT<Eigen::MatrixXd> chol(K);
  if (chol.info() != Eigen::Success) return kInf;
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < q; ++i) {
    logdet += 2.0 * std::log(chol.matrixLLT()(i, i));
  }
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(q);
  const Eigen::VectorXd kinv_one = chol.solve(one);
  const double c = one.dot(kinv_one);

  double quad_total = 0.0;
  for (const Eigen::VectorXd& y : window_outputs) {
    if (y.size() != q) throw ValidationError("window output length mismatch");
    const Eigen::VectorXd u = chol.solve(y);
    const double s = one.dot(u);
    quad_total += y.dot(u) - s * s / c;  // (y - beta 1)' K^{-1} (y - beta 1)
  }
  const double B = static_cast<double>(window_outputs.size());
  const double qq = static_cast<double>(q);
  const double sigma2 = std::max(quad_total / (B * qq), 1e-300);
  return 0.5 * (B * logdet + B * qq * std::log(sigma2) + B * qq);
}

SimplexResult simplex_minimize(const std::function<double(std::span<const double>)>& f,
                               std::span<const double> x0, double span,
                               std::size_t max_evaluations) {
  const std::size_t d = x0.size();
  SimplexResult res;
  std::size_t evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };

  // vertex 0 at x0 - span (all coordinates), vertex j at x0 + span*e_j
  std::vector<std::vector<double>> verts(d + 1, std::vector<double>(x0.begin(), x0.end()));
  for (std::size_t k = 0; k < d; ++k) verts[0][k] -= span;
  for (std::size_t j = 1; j <= d; ++j) verts[j][j - 1] += span;
  std::vector<double> vals(d + 1);
  for (std::size_t j = 0; j <= d && evals < max_evaluations; ++j) vals[j] = eval(verts[j]);

  std::vector<std::size_t> order(d + 1);
  auto sort_order = [&]() {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  };
  sort_order();
  res.best_trace.push_back(vals[order[0]]);

  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
  while (evals < max_evaluations) {
    sort_order();
    const std::size_t best = order[0], worst = order[d];
    const std::size_t second_worst = order[d - 1];
    if (std::abs(vals[worst] - vals[best]) <=
        1e-10 * (std::abs(vals[best]) + std::abs(vals[worst])) + 1e-12) {
      break;
    }
    std::vector<double> centroid(d, 0.0);
    for (std::size_t j = 0; j <= d; ++j) {
      if (j == worst) continue;
      for (std::size_t k = 0; k < d; ++k) centroid[k] += verts[j][k];
    }
    for (double& ck : centroid) ck /= static_cast<double>(d);

    auto blend = [&](double coeff) {
      std::vector<double> x(d);
      for (std::size_t k = 0; k < d; ++k) {
        x[k] = centroid[k] + coeff * (centroid[k] - verts[worst][k]);
      }
      return x;
    };

    const std::vector<double> xr = blend(alpha);
    const double fr = eval(xr);
    if (fr < vals[order[0]]) {
      if (evals < max_evaluations) {
        const std::vector<double> xe = blend(gamma);
        const double fe = eval(xe);
        if (fe < fr) {
          verts[worst] = xe;
          vals[worst] = fe;
        } else {
          verts[worst] = xr;
          vals[worst] = fr;
        }
      } else {
        verts[worst] = xr;
        vals[worst] = fr;
      }
    } else if (fr < vals[second_worst]) {
      verts[worst] = xr;
      vals[worst] = fr;
    } else if (evals < max_evaluations) {
      const std::vector<double> xc = blend(-rho);
      const double fc = eval(xc);
      if (fc < vals[worst]) {
        verts[worst] = xc;
        vals[worst] = fc;
      } else {
        // shrink toward the best vertex
        for (std::size_t j = 0; j <= d && evals < max_evaluations; ++j) {
          if (j == best) continue;
          for (std::size_t k = 0; k < d; ++k) {
            verts[j][k] = verts[best][k] + sigma * (verts[j][k] - verts[best][k]);
          }
          vals[j] = eval(verts[j]);
        }
      }
    }
    sort_order();
    res.best_trace.push_back(vals[order[0]]);
  }

  sort_order();
  res.x = verts[order[0]];
  res.value = vals[order[0]];
  res.evaluations = evals;
  return res;
}

GpHyperParams estimate_lengthscales(const RlhdSpec& spec, const PointIndex& index,
                                    std::span<const double> outputs, long long q_window,
                                    int num_windows, std::uint64_t seed, double nugget,
                                    LengthscaleDiagnostics* diag) {
  const std::size_t d = spec.dim();
  if (q_window < 2 || q_window > spec.n) {
    throw ValidationError("q_window must be in [2, n]");
  }
  if (num_windows < 1) throw ValidationError("need at least one window");
  if (outputs.size() != index.size()) {
    throw ValidationError("outputs do not cover the enumerated design");
  }

  // Base configuration: every design point with grid coordinates in
  // [0, q-1]^d. All translation-lattice windows share it (exact geometry).
  std::vector<std::vector<long long>> offsets;
  for (long long i = 0; i < spec.m; ++i) {
    std::vector<long long> base(d);
    std::vector<long long> count(d);
    bool any = true;
    for (std::size_t k = 0; k < d; ++k) {
      base[k] = (i * spec.v[k] + spec.delta[k]) % spec.m;
      count[k] = base[k] <= q_window - 1 ? (q_window - 1 - base[k]) / spec.m + 1 : 0;
      if (count[k] == 0) any = false;
    }
    if (!any) continue;
    std::vector<long long> z(d, 0);
    for (;;) {
      std::vector<long long> o(d);
      for (std::size_t k = 0; k < d; ++k) o[k] = base[k] + z[k] * spec.m;
      offsets.push_back(std::move(o));
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
  const std::size_t q_pts = offsets.size();
  if (q_pts < 3) {
    // The configuration is corner-independent (Theorem-6 sharing), so
    // redrawing corners cannot produce a larger window.
    throw ValidationError("degenerate estimation window: " + std::to_string(q_pts) +
                          " points shared by every corner; increase q_window");
  }

  Eigen::MatrixXd sites(static_cast<Eigen::Index>(q_pts), static_cast<Eigen::Index>(d));
  for (std::size_t t = 0; t < q_pts; ++t) {
    for (std::size_t k = 0; k < d; ++k) {
      sites(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) =
          (static_cast<double>(offsets[t][k]) + 0.5) / static_cast<double>(spec.n);
    }
  }

  // Draw B corners on the translation lattice, at most 20 redraws each.
  Rng rng(derive_seed(seed, 0xe57));
  const long long cmax = spec.n - q_window;
  std::vector<Eigen::VectorXd> window_outputs;
  std::vector<long long> corner(d), coords(d);
  for (int b = 0; b < num_windows; ++b) {
    bool drawn = false;
    for (int attempt = 0; attempt < 20 && !drawn; ++attempt) {
      const auto i = static_cast<long long>(rng.below(static_cast<std::uint64_t>(spec.m)));
      bool feasible = true;
      for (std::size_t k = 0; k < d; ++k) {
        const long long r = (i * spec.v[k]) % spec.m;
        if (r > cmax) {
          feasible = false;
          break;
        }
        const long long zmax = (cmax - r) / spec.m;
        corner[k] = r + static_cast<long long>(
                            rng.below(static_cast<std::uint64_t>(zmax + 1))) *
                            spec.m;
      }
      if (!feasible) continue;
      Eigen::VectorXd yb(static_cast<Eigen::Index>(q_pts));
      bool ok = true;
      for (std::size_t t = 0; t < q_pts && ok; ++t) {
        for (std::size_t k = 0; k < d; ++k) coords[k] = corner[k] + offsets[t][k];
        const auto row = index.lookup(coords);
        if (!row) {
          ok = false;
        } else {
          yb(static_cast<Eigen::Index>(t)) = outputs[*row];
        }
      }
      if (ok) {
        window_outputs.push_back(std::move(yb));
        drawn = true;
      }
    }
    if (!drawn) {
      throw ValidationError("could not draw a feasible estimation window");
    }
  }

  // Simplex over log(theta); start at half the window width, +/- 2 orders.
  const double theta0 = static_cast<double>(spec.m) / (2.0 * static_cast<double>(spec.n));
  std::vector<double> log0(d, std::log(theta0));
  std::vector<double> theta_buf(d);
  auto objective = [&](std::span<const double> logt) {
    for (std::size_t k = 0; k < d; ++k) theta_buf[k] = std::exp(logt[k]);
    return composite_negloglik(sites, window_outputs, theta_buf, nugget);
  };
  const SimplexResult sr = simplex_minimize(objective, log0, std::log(100.0), 200);

  GpHyperParams out;
  out.theta.resize(d);
  for (std::size_t k = 0; k < d; ++k) out.theta[k] = std::exp(sr.x[k]);
  out.nugget = nugget;
  if (diag) {
    diag->window_points = q_pts;
    diag->objective_evaluations = sr.evaluations;
    diag->final_negloglik = sr.value;
    diag->best_trace = sr.best_trace;
  }
  return out;
}

}  // namespace lhd
