#include "lhdkit/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lhd {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

double parse_double(std::string_view tok, const std::string& path) {
  double out = 0.0;
  const char* begin = tok.data();
  const char* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError(path + ": cannot parse number '" + std::string(tok) + "'");
  }
  return out;
}

std::vector<std::string_view> split_csv(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

void write_design_csv(const std::string& path, const Design& design) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  for (std::size_t k = 0; k < design.d(); ++k) {
    out << (k ? "," : "") << 'x' << (k + 1);
  }
  out << '\n';
  for (std::size_t i = 0; i < design.n(); ++i) {
    for (std::size_t k = 0; k < design.d(); ++k) {
      out << (k ? "," : "") << format_double(design(i, k));
    }
    out << '\n';
  }
  if (!out) throw ValidationError("write failed: " + path);
}

Design read_design_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open: " + path);
  std::string line;
  std::vector<std::string_view> toks;
  if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
  line = strip_cr(line);
  split_csv(line, toks);
  const std::size_t d = toks.size();
  if (d == 0) throw ValidationError(path + ": empty header");

  std::vector<double> data;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    split_csv(line, toks);
    if (toks.size() != d) {
      throw ValidationError(path + ": row with " + std::to_string(toks.size()) +
                            " fields, expected " + std::to_string(d));
    }
    for (const auto t : toks) data.push_back(parse_double(t, path));
    ++n;
  }
  return Design(n, d, std::move(data));
}

void write_sidecar(const std::string& path, const Sidecar& sc) {
  nlohmann::json j;
  j["type"] = sc.type;
  j["n"] = sc.n;
  j["d"] = sc.d;
  if (!sc.v.empty()) j["v"] = sc.v;
  if (!sc.delta.empty()) j["delta"] = sc.delta;
  if (sc.m) j["m"] = *sc.m;
  if (sc.criterion) j["criterion"] = *sc.criterion;
  if (sc.value) j["value"] = *sc.value;
  if (sc.seed) j["seed"] = *sc.seed;
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
}

Sidecar read_sidecar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": invalid JSON (" + e.what() + ")");
  }
  Sidecar sc;
  sc.type = j.value("type", std::string{});
  sc.n = j.value("n", 0LL);
  sc.d = j.value("d", 0LL);
  if (j.contains("v")) sc.v = j["v"].get<std::vector<long long>>();
  if (j.contains("delta")) sc.delta = j["delta"].get<std::vector<long long>>();
  if (j.contains("m")) sc.m = j["m"].get<long long>();
  if (j.contains("criterion")) sc.criterion = j["criterion"].get<std::string>();
  if (j.contains("value")) sc.value = j["value"].get<double>();
  if (j.contains("seed")) sc.seed = j["seed"].get<std::uint64_t>();
  return sc;
}

RlhdSpec rlhd_spec_from_sidecar(const Sidecar& sc) {
  if (sc.type != "rlhd") {
    throw ValidationError("sidecar type '" + sc.type + "' is not an rlhd spec");
  }
  if (!sc.m) throw ValidationError("rlhd sidecar is missing m");
  return RlhdSpec(sc.n, *sc.m, sc.v, sc.delta);
}

void write_outputs_csv(const std::string& path, const std::vector<double>& y) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << "y\n";
  for (double v : y) out << format_double(v) << '\n';
}

std::vector<double> read_outputs_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
  std::vector<double> y;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    y.push_back(parse_double(line, path));
  }
  return y;
}

}  // namespace lhd
