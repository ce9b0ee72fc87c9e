#pragma once

// Trajectory CSV: header `t,pitch,pitch_rate,u`, one row per sample, LF line
// endings. Numbers are written in the shortest decimal form that parses back
// to the identical double.

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>

#include "balbench/errors.hpp"
#include "balbench/sim.hpp"

namespace balbench {

inline constexpr std::string_view kTrajectoryCsvHeader = "t,pitch,pitch_rate,u";

namespace detail {

inline void append_double(std::string& out, double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

inline double parse_double(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw InvalidInput("trajectory csv: bad number '" + std::string(field) + "' on line " + std::to_string(line_no));
  }
  return v;
}

}  // namespace detail

inline std::string format_trajectory_csv(const Trajectory& tr) {
  std::string out(kTrajectoryCsvHeader);
  out += '\n';
  out.reserve(tr.samples.size() * 64);
  for (const auto& s : tr.samples) {
    detail::append_double(out, s.t);
    out += ',';
    detail::append_double(out, s.phi);
    out += ',';
    detail::append_double(out, s.phi_dot);
    out += ',';
    detail::append_double(out, s.u);
    out += '\n';
  }
  return out;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  const std::string text = format_trajectory_csv(tr);
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
}

/// Reads samples back. dt is recovered from the second time stamp; the
/// termination reason is not stored in the file and reads as completed.
inline Trajectory read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kTrajectoryCsvHeader) {
    throw InvalidInput("trajectory csv: missing header '" + std::string(kTrajectoryCsvHeader) + "'");
  }
  Trajectory tr;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<double, 4> fields{};
    std::string_view rest(line);
    for (std::size_t i = 0; i < 4; ++i) {
      const auto comma = rest.find(',');
      if ((i < 3) == (comma == std::string_view::npos)) {
        throw InvalidInput("trajectory csv: expected 4 fields on line " + std::to_string(line_no));
      }
      fields[i] = detail::parse_double(rest.substr(0, comma), line_no);
      if (i < 3) rest.remove_prefix(comma + 1);
    }
    tr.samples.push_back({fields[0], fields[1], fields[2], fields[3]});
  }
  if (tr.samples.empty()) throw InvalidInput("trajectory csv: no samples");
  if (tr.samples.size() >= 2) tr.dt = tr.samples[1].t - tr.samples[0].t;
  return tr;
}

}  // namespace balbench
