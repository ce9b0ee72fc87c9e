#pragma once

// Mamdani fuzzy PD / PD+I controller.
//
// Inputs are the pitch error e and its rate e', each covered by five
// triangular sets (LN, SN, M, SP, LP) with peaks at -W, -W/2, 0, W/2, W and
// feet on the neighbouring peaks; the two end sets hold at 1 beyond their peak.
// The output variable uses the same layout with labels HN, N, Z, P, HP.
//
// Inference: rule strength = min(mu_e, mu_e'), each consequent set is clipped
// at the strongest rule that fires it, the clipped sets are aggregated by max
// and the result is defuzzified by its centroid on a 1001-point grid.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "balbench/errors.hpp"

namespace balbench {

enum class InputLabel { LN, SN, M, SP, LP };
enum class OutputLabel { HN, N, Z, P, HP };

inline constexpr std::array<std::string_view, 5> kInputLabelNames{"LN", "SN", "M", "SP", "LP"};
inline constexpr std::array<std::string_view, 5> kOutputLabelNames{"HN", "N", "Z", "P", "HP"};

inline std::string_view to_string(InputLabel l) { return kInputLabelNames[static_cast<std::size_t>(l)]; }
inline std::string_view to_string(OutputLabel l) { return kOutputLabelNames[static_cast<std::size_t>(l)]; }

inline OutputLabel parse_output_label(std::string_view s) {
  for (std::size_t i = 0; i < kOutputLabelNames.size(); ++i)
    if (kOutputLabelNames[i] == s) return static_cast<OutputLabel>(i);
  throw InvalidInput("unknown output label '" + std::string(s) + "' (expected HN, N, Z, P or HP)");
}

/// Triangle (left_foot, peak, right_foot). A shouldered side stays at 1
/// beyond the peak instead of falling to the foot.
struct LinguisticSet {
  double left_foot;
  double peak;
  double right_foot;
  bool left_shoulder = false;
  bool right_shoulder = false;

  double degree(double x) const {
    if (x == peak) return 1.0;
    if (x < peak) {
      if (left_shoulder) return 1.0;
      if (x <= left_foot) return 0.0;
      return (x - left_foot) / (peak - left_foot);
    }
    if (right_shoulder) return 1.0;
    if (x >= right_foot) return 0.0;
    return (right_foot - x) / (right_foot - peak);
  }
};

enum class VariableRole { Input, Output };

struct FuzzyVariable {
  double halfwidth = 1.0;
  VariableRole role = VariableRole::Input;

  void validate() const {
    if (!(halfwidth > 0) || !std::isfinite(halfwidth)) {
      throw InvalidInput("FuzzyVariable: universe halfwidth must be positive and finite");
    }
  }

  LinguisticSet set(std::size_t index) const {
    const double w = halfwidth;
    const double h = w / 2.0;
    const double peak = -w + static_cast<double>(index) * h;
    return {peak - h, peak, peak + h, index == 0, index == 4};
  }

  std::array<double, 5> degrees(double x) const {
    std::array<double, 5> out{};
    for (std::size_t i = 0; i < 5; ++i) out[i] = set(i).degree(x);
    return out;
  }
};

inline double membership(const FuzzyVariable& var, std::size_t index, double x) {
  if (index >= 5) throw InvalidInput("membership: set index out of range");
  return var.set(index).degree(x);
}

inline double membership(const FuzzyVariable& var, InputLabel label, double x) {
  return membership(var, static_cast<std::size_t>(label), x);
}

inline double membership(const FuzzyVariable& var, OutputLabel label, double x) {
  return membership(var, static_cast<std::size_t>(label), x);
}

/// Label lookup by name, checked against the variable's role.
inline double membership(const FuzzyVariable& var, std::string_view label, double x) {
  const auto& names = var.role == VariableRole::Input ? kInputLabelNames : kOutputLabelNames;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == label) return membership(var, i, x);
  throw InvalidInput("membership: unknown label '" + std::string(label) + "'");
}

/// 5x5 rule grid: cells[rate][error].
struct RuleBase {
  std::array<std::array<OutputLabel, 5>, 5> cells{};

  OutputLabel at(InputLabel rate, InputLabel error) const {
    return cells[static_cast<std::size_t>(rate)][static_cast<std::size_t>(error)];
  }

  friend bool operator==(const RuleBase&, const RuleBase&) = default;

  /// Reference rule table, rows e' = LN..LP, columns e = LN..LP.
  static RuleBase paper_table() {
    using enum OutputLabel;
    return {{{
        {HN, N, Z, P, P},
        {HN, N, Z, HP, HP},
        {HN, HN, Z, HP, HP},
        {HN, N, Z, P, HP},
        {N, N, Z, P, HP},
    }}};
  }
};

/// Parses the plain-text rule grid: five non-comment lines of five labels
/// each, line i for rate label i. Blank lines and lines starting with '#' are skipped.
inline RuleBase parse_rule_base(std::istream& in) {
  RuleBase rb;
  std::string line;
  std::size_t row = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (row == 5) throw InvalidInput("rule base: more than 5 rule lines (line " + std::to_string(line_no) + ")");
    std::istringstream tokens(line);
    std::string tok;
    std::size_t col = 0;
    while (tokens >> tok) {
      if (col == 5) throw InvalidInput("rule base: line " + std::to_string(line_no) + " has more than 5 labels");
      rb.cells[row][col++] = parse_output_label(tok);
    }
    if (col != 5) throw InvalidInput("rule base: line " + std::to_string(line_no) + " has fewer than 5 labels");
    ++row;
  }
  if (row != 5) throw InvalidInput("rule base: expected 5 rule lines, found " + std::to_string(row));
  return rb;
}

inline RuleBase load_rule_base(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("rule base: cannot open '" + path + "'");
  return parse_rule_base(in);
}

inline std::string format_rule_base(const RuleBase& rb) {
  std::string out = "# rows: error rate LN SN M SP LP; columns: error LN SN M SP LP\n";
  for (const auto& row : rb.cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ' ';
      out += to_string(row[c]);
    }
    out += '\n';
  }
  return out;
}

enum class FuzzyVariant { PD, PDI };

inline std::string_view to_string(FuzzyVariant v) { return v == FuzzyVariant::PD ? "PD" : "PD+I"; }

struct FuzzyConfig {
  FuzzyVariable error_var{0.5, VariableRole::Input};  // rad
  FuzzyVariable rate_var{2.0, VariableRole::Input};   // rad/s
  FuzzyVariable output_var{20.0, VariableRole::Output};
  RuleBase rules = RuleBase::paper_table();
  FuzzyVariant variant = FuzzyVariant::PD;
  double ki = 0.8;

  static constexpr std::size_t kGridPoints = 1001;
  static constexpr double kMinArea = 1e-12;

  void validate() const {
    error_var.validate();
    rate_var.validate();
    output_var.validate();
    if (!(ki >= 0) || !std::isfinite(ki)) throw InvalidInput("FuzzyConfig: ki must be finite and >= 0");
  }
};

struct FiredRule {
  InputLabel rate;
  InputLabel error;
  OutputLabel consequent;
  double strength;
};

struct Inference {
  double u = 0.0;
  double area = 0.0;
  std::vector<FiredRule> fired;
};

inline Inference infer_detailed(const FuzzyConfig& cfg, double e, double e_rate) {
  const auto mu_e = cfg.error_var.degrees(e);
  const auto mu_r = cfg.rate_var.degrees(e_rate);

  Inference result;
  std::array<double, 5> clip{};
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c < 5; ++c) {
      const double strength = std::min(mu_r[r], mu_e[c]);
      if (strength <= 0.0) continue;
      const OutputLabel out = cfg.rules.cells[r][c];
      result.fired.push_back({static_cast<InputLabel>(r), static_cast<InputLabel>(c), out, strength});
      auto& slot = clip[static_cast<std::size_t>(out)];
      slot = std::max(slot, strength);
    }

  const double w = cfg.output_var.halfwidth;
  const std::size_t n = FuzzyConfig::kGridPoints;
  const double span = static_cast<double>(n - 1);
  std::array<LinguisticSet, 5> sets{};
  for (std::size_t i = 0; i < 5; ++i) sets[i] = cfg.output_var.set(i);

  auto aggregated = [&](double x) {
    double mu = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
      if (clip[i] > 0.0) mu = std::max(mu, std::min(clip[i], sets[i].degree(x)));
    return mu;
  };
  // Grid points are mirrored exactly about 0 and summed in mirrored pairs, so
  // a symmetric aggregate has a centroid of exactly 0.
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; 2 * k < n - 1; ++k) {
    const double x = w * (static_cast<double>(2 * k) - span) / span;
    const double mu_lo = aggregated(x);
    const double mu_hi = aggregated(-x);
    weighted += x * mu_lo + (-x) * mu_hi;
    total += mu_lo + mu_hi;
  }
  if (n % 2 == 1) total += aggregated(0.0);
  result.area = total * (2.0 * w / span);
  result.u = result.area < FuzzyConfig::kMinArea ? 0.0 : weighted / total;
  return result;
}

inline double infer(const FuzzyConfig& cfg, double e, double e_rate) { return infer_detailed(cfg, e, e_rate).u; }

struct FuzzyIntegralState {
  double error_sum = 0.0;  // rad s
};

struct FuzzyStep {
  double u;
  FuzzyIntegralState state;
};

/// PD: u = infer(e, e'). PD+I: u = infer(e, e') + ki (sum + e dt).
inline FuzzyStep fuzzy_control(const FuzzyConfig& cfg, const FuzzyIntegralState& st, double e, double e_rate,
                               double dt) {
  if (!(dt > 0)) throw InvalidInput("fuzzy_control: dt must be positive");
  const double pd = infer(cfg, e, e_rate);
  if (cfg.variant == FuzzyVariant::PD) return {pd, st};
  FuzzyIntegralState next{st.error_sum + e * dt};
  return {pd + cfg.ki * next.error_sum, next};
}

}  // namespace balbench
