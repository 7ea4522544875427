#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lhdkit/design.hpp"

namespace lhd {

inline constexpr const char* kToolVersion = "0.1.0";

// "# lhdkit <version> seed=<seed> config=<fnv64 of the configuration>"
std::string bench_metadata_line(std::uint64_t seed, const std::string& config);

struct IntegrationRow {
  std::string function;
  std::string method;  // lhd | olhd-wd | llhd-wd | llhd-ws2 | plhd
  long long n = 0;
  int replicate = 0;
  double error = 0.0;
};

struct IntegrationResult {
  std::vector<IntegrationRow> rows;
  std::string metadata;
};

// Mean absolute integration error per (function, method, n, replicate) cell.
// Every cell runs on a seed derived from (seed, cell id), so results are
// byte-identical for any thread count.
IntegrationResult integration_benchmark(const std::vector<std::string>& functions,
                                        const std::vector<std::string>& methods,
                                        const std::vector<long long>& n_grid,
                                        int replicates, std::uint64_t seed,
                                        int threads = 1);

std::string integration_csv(const IntegrationResult& result);

// Sample correlations of {WS, WP, WD, WS2} over random designs.
struct CorrelationStudy {
  static constexpr std::array<const char*, 4> kCriteria{"WS", "WP", "WD", "WS2"};
  std::array<std::array<double, 4>, 4> lhd{};   // random LHDs
  std::array<std::array<double, 4>, 4> llhd{};  // random LLHDs (distinct generators)
  std::string metadata;
};

CorrelationStudy correlation_study(long long n, std::size_t d, int num_designs,
                                   std::uint64_t seed);

std::string correlation_csv(const CorrelationStudy& study);

struct EmulationReport {
  long long n_grid = 0;          // RLHD global resolution
  std::size_t design_size = 0;   // actual RLHD point count
  std::vector<double> theta;     // estimated lengthscales (RLHD arm)
  double rmse_rlhd = 0.0;
  double rmse_pd = 0.0;          // partitioned-design baseline
  double training_rmse = 0.0;    // RLHD predictions at its own training sites
  std::size_t rlhd_factorizations = 0;
  std::size_t rlhd_windows = 0;
  double seconds_rlhd = 0.0;
  double seconds_pd = 0.0;
  std::string metadata;
};

// RLHD moving-window emulation versus the partitioned-design baseline
// (2^d equal subcubes, one random-LHD kriging model each, same point budget).
EmulationReport emulation_benchmark(const std::string& function, long long n_target,
                                    long long m, long long q_window, int n_test,
                                    std::uint64_t seed);

std::string emulation_csv(const EmulationReport& report);

}  // namespace lhd
