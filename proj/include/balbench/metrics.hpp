#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "balbench/errors.hpp"
#include "balbench/sim.hpp"

namespace balbench {

enum class Verdict { Stable, Marginal, Unstable };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::Marginal: return "marginal";
    case Verdict::Unstable: return "unstable";
  }
  return "?";
}

struct ResponseMetrics {
  std::optional<double> settling_time;  // s, 2% band of the initial error
  double overshoot_pct = 0.0;
  double rms_error = 0.0;
  double peak_abs_u = 0.0;
  Verdict verdict = Verdict::Marginal;
};

inline constexpr double kSettlingBand = 0.02;

inline ResponseMetrics compute_metrics(const Trajectory& tr, const SimConfig& sc) {
  if (tr.samples.empty()) throw InvalidInput("compute_metrics: empty trajectory");
  const auto& s = tr.samples;
  const std::size_t n = s.size();
  auto err = [&](std::size_t k) { return s[k].phi - sc.setpoint; };
  const double e0 = err(0);
  const double band = kSettlingBand * std::abs(e0);

  ResponseMetrics m;

  if (!tr.diverged()) {
    std::optional<std::size_t> last_outside;
    for (std::size_t k = n; k-- > 0;)
      if (!(std::abs(err(k)) <= band)) {
        last_outside = k;
        break;
      }
    if (!last_outside)
      m.settling_time = s.front().t;
    else if (*last_outside + 1 < n)
      m.settling_time = s[*last_outside + 1].t;
  }

  // Largest excursion in the first lobe on the far side of the setpoint.
  if (e0 != 0.0) {
    const double side = e0 > 0 ? 1.0 : -1.0;
    std::size_t k = 1;
    while (k < n && !(err(k) * side < 0)) ++k;
    double extreme = 0.0;
    for (; k < n && err(k) * side < 0; ++k) extreme = std::max(extreme, std::abs(err(k)));
    m.overshoot_pct = 100.0 * extreme / std::abs(e0);
  }

  double sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sq += err(k) * err(k);
    const double au = std::abs(s[k].u);
    m.peak_abs_u = std::isfinite(au) ? std::max(m.peak_abs_u, au) : std::numeric_limits<double>::infinity();
  }
  m.rms_error = std::sqrt(sq / static_cast<double>(n));

  if (tr.diverged() || !(std::abs(err(n - 1)) <= std::abs(e0)))
    m.verdict = Verdict::Unstable;
  else if (m.settling_time)
    m.verdict = Verdict::Stable;
  else
    m.verdict = Verdict::Marginal;
  return m;
}

struct LabeledMetrics {
  std::string label;
  ResponseMetrics metrics;
};

/// Rows ordered: stable by settling time, then marginal, then unstable; ties by label.
struct ComparisonReport {
  std::vector<LabeledMetrics> rows;

  std::string to_text() const;
  std::string to_csv() const;
};

inline ComparisonReport compare(std::vector<LabeledMetrics> results) {
  if (results.empty()) throw InvalidInput("compare: no results");
  auto key = [](const LabeledMetrics& r) {
    const double settle = r.metrics.verdict == Verdict::Stable ? r.metrics.settling_time.value_or(0.0) : 0.0;
    return std::tuple(static_cast<int>(r.metrics.verdict), settle, std::string_view(r.label));
  };
  std::stable_sort(results.begin(), results.end(),
                   [&](const LabeledMetrics& a, const LabeledMetrics& b) { return key(a) < key(b); });
  return {std::move(results)};
}

namespace detail {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace detail

inline std::string ComparisonReport::to_text() const {
  std::size_t label_w = 5;
  for (const auto& r : rows) label_w = std::max(label_w, r.label.size());
  std::string out = detail::pad("rank", 6) + detail::pad("label", label_w + 2) + detail::pad("verdict", 10) +
                    detail::pad("settling_s", 12) + detail::pad("overshoot_%", 13) + detail::pad("rms_rad", 14) +
                    "peak_abs_u\n";
  std::size_t rank = 1;
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    out += detail::pad(std::to_string(rank++), 6) + detail::pad(r.label, label_w + 2) +
           detail::pad(std::string(to_string(m.verdict)), 10) +
           detail::pad(m.settling_time ? detail::fmt("%.3f", *m.settling_time) : "-", 12) +
           detail::pad(detail::fmt("%.2f", m.overshoot_pct), 13) + detail::pad(detail::fmt("%.3e", m.rms_error), 14) +
           detail::fmt("%.3e", m.peak_abs_u) + "\n";
  }
  return out;
}

inline std::string ComparisonReport::to_csv() const {
  std::string out = "rank,label,verdict,settling_time,overshoot_pct,rms_error,peak_abs_u\n";
  std::size_t rank = 1;
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    out += std::to_string(rank++) + "," + r.label + "," + std::string(to_string(m.verdict)) + "," +
           (m.settling_time ? detail::fmt("%.17g", *m.settling_time) : "") + "," +
           detail::fmt("%.17g", m.overshoot_pct) + "," + detail::fmt("%.17g", m.rms_error) + "," +
           detail::fmt("%.17g", m.peak_abs_u) + "\n";
  }
  return out;
}

}  // namespace balbench
