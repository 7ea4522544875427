#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lhdkit/design.hpp"
#include "lhdkit/lattice.hpp"
#include "lhdkit/rlhd.hpp"

namespace lhd {

// Design files: CSV with header x1,...,xd, one row per point, 17 significant
// digits (bit-exact round trip for doubles).
void write_design_csv(const std::string& path, const Design& design);
Design read_design_csv(const std::string& path);

// Optional JSON sidecar describing how a design was generated:
// {type, n, d, v, delta, m, criterion, value, seed}.
struct Sidecar {
  std::string type;  // lhd | olhd | llhd | plhd | sliced-llhd | rlhd
  long long n = 0;
  long long d = 0;
  std::vector<long long> v;
  std::vector<long long> delta;
  std::optional<long long> m;  // rlhd only
  std::optional<std::string> criterion;
  std::optional<double> value;
  std::optional<std::uint64_t> seed;
};

void write_sidecar(const std::string& path, const Sidecar& sidecar);
Sidecar read_sidecar(const std::string& path);

RlhdSpec rlhd_spec_from_sidecar(const Sidecar& sidecar);

// Single-column response file, header "y", one value per design row.
void write_outputs_csv(const std::string& path, const std::vector<double>& y);
std::vector<double> read_outputs_csv(const std::string& path);

// 17-significant-digit decimal rendering used across all CSV output.
std::string format_double(double value);

}  // namespace lhd
