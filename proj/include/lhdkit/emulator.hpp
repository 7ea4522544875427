#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "lhdkit/rlhd.hpp"

namespace lhd {

// Anisotropic Gaussian correlation R(h) = exp(-sum_k h_k^2 / theta_k^2) with
// a nugget on the diagonal.
struct GpHyperParams {
  std::vector<double> theta;
  double nugget = 1e-8;
};

// Entry (i,j) = R(x_i - x_j) + nugget * [i == j].
Eigen::MatrixXd corr_matrix(const Eigen::MatrixXd& points, const GpHyperParams& params);

// Ordinary-kriging model on one fixed set of sites; used for the partitioned
// baseline and inside the local model.
struct KrigingModel {
  Eigen::MatrixXd sites;  // k x d
  Eigen::VectorXd y;
  GpHyperParams params;
  Eigen::LLT<Eigen::MatrixXd> chol;
  Eigen::VectorXd kinv_one;
  double one_kinv_one = 0.0;
  double beta = 0.0;
  double sigma2 = 0.0;
  Eigen::VectorXd alpha;  // K^{-1} (y - beta 1)

  static KrigingModel fit(Eigen::MatrixXd sites, Eigen::VectorXd y, GpHyperParams params);
  std::pair<double, double> predict(std::span<const double> x) const;
};

// Moving-window emulator over an RLHD: one shared m x m factorization serves
// every prediction window, since translation-lattice windows share their
// relative site configuration exactly.
class LocalGpModel {
 public:
  // outputs[row] is the response at design row `row`; all rows must be finite.
  // On factorization failure the nugget is doubled up to 1e-4 with a warning
  // to stderr, then a NumericalError carries a condition estimate.
  static LocalGpModel fit(const RlhdSpec& spec, const PointIndex& index,
                          std::span<const double> outputs, GpHyperParams params);

  std::pair<double, double> predict(std::span<const double> x) const;
  void predict_batch(const Design& queries, std::vector<double>& mean,
                     std::vector<double>& variance) const;

  // Committed m x m factorizations (1 unless refit); retries counts nugget
  // doublings that preceded the committed one.
  std::size_t factorization_count() const { return factorizations_; }
  std::size_t factorization_retries() const { return retries_; }
  std::size_t window_count() const { return windows_.size(); }
  const GpHyperParams& params() const { return params_; }
  const RlhdSpec& spec() const { return spec_; }

 private:
  LocalGpModel(RlhdSpec spec, PointIndex index);

  struct WindowSolve {
    double beta = 0.0;
    double sigma2 = 0.0;
    Eigen::VectorXd alpha;
  };
  const WindowSolve& window(const std::vector<long long>& corner) const;

  RlhdSpec spec_;
  PointIndex index_;
  GpHyperParams params_;
  std::vector<double> outputs_;
  std::vector<std::vector<long long>> rel_coords_;  // m base offsets (integer)
  Eigen::MatrixXd rel_sites_;                       // m x d, offsets scaled by 1/n
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Eigen::VectorXd kinv_one_;
  double one_kinv_one_ = 0.0;
  std::size_t factorizations_ = 0;
  std::size_t retries_ = 0;
  mutable std::map<std::vector<long long>, WindowSolve> windows_;
};

// Summed profiled Gaussian log-likelihood machinery shared by the composite
// estimator and the baseline's plain maximum likelihood (B = 1).
// sigma^2 is profiled in closed form pooled across windows; beta per window.
double composite_negloglik(const Eigen::MatrixXd& sites,
                           const std::vector<Eigen::VectorXd>& window_outputs,
                           std::span<const double> theta, double nugget);

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  std::vector<double> best_trace;  // best value after each accepted step
};

// Deterministic Nelder-Mead with a bounded evaluation budget. vertex0 is the
// start; the initial simplex spans [x0 - span, x0 + span] per coordinate.
SimplexResult simplex_minimize(const std::function<double(std::span<const double>)>& f,
                               std::span<const double> x0, double span,
                               std::size_t max_evaluations);

struct LengthscaleDiagnostics {
  std::size_t window_points = 0;
  std::size_t objective_evaluations = 0;
  double final_negloglik = 0.0;
  std::vector<double> best_trace;
};

// Composite-likelihood lengthscale estimation from B width-q/n windows drawn
// on the translation lattice; all windows share one configuration, so each
// theta trial costs a single q' x q' factorization.
GpHyperParams estimate_lengthscales(const RlhdSpec& spec, const PointIndex& index,
                                    std::span<const double> outputs,
                                    long long q_window = 50, int num_windows = 10,
                                    std::uint64_t seed = 0, double nugget = 1e-8,
                                    LengthscaleDiagnostics* diag = nullptr);

}  // namespace lhd
