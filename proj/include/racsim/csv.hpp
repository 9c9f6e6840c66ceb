#pragma once

#include <charconv>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>

namespace racsim {

// Shortest decimal string that round-trips the double (never more than 17
// significant digits).
inline std::string format_shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// '#'-prefixed metadata line carrying the full run config, a header row, then
// one row per sample: dim value columns plus the loop count.
inline void write_sample_csv(std::ostream& os, const std::string& metadata_json,
                             std::span<const double> values,
                             std::span<const std::uint64_t> loops, int dim, bool raw) {
  os << "# " << metadata_json << '\n';
  const char* prefix = raw ? "y" : "u";
  for (int j = 0; j < dim; ++j) os << prefix << (j + 1) << ',';
  os << "loops\n";
  std::size_t n = loops.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j) os << format_shortest(values[i * dim + j]) << ',';
    os << loops[i] << '\n';
  }
}

}  // namespace racsim
