#pragma once

// Corrected risk priority numbers. Occurrence and detection ratings are
// rescaled by the influence row sums (raw value base*(1 - sum), floored
// back onto the 1-10 ordinal scale, clamped at both ends) and recombined
// into RPN = S * O_corr * D_corr. Also hosts the unified risk matrix
// mapping failure-probability classes against attack-feasibility ratings.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ftmea/correlation.hpp"
#include "ftmea/errors.hpp"
#include "ftmea/risk_model.hpp"

namespace ftmea {

struct RpnResult {
  std::string item_id;
  ItemKind kind = ItemKind::FailureMode;
  int severity = 1;
  int o_base = 1, d_base = 1;
  int o_corr = 1, d_corr = 1;
  int rpn_base = 1, rpn_corr = 1;
  double improvement_pct = 0.0;

  bool operator==(const RpnResult&) const = default;
};

namespace detail {

inline int corrected_rating(int base, double row_sum, const char* what) {
  if (base < 1 || base > 10)
    throw RatingOutOfRange(std::string(what) + " base " + std::to_string(base));
  // raw value, then floor-and-clamp back onto the ordinal scale;
  // the >= 10 branch takes precedence, so a raw value of exactly 10 stays 10
  double v = static_cast<double>(base) * (1.0 - row_sum);
  if (v >= 10.0) return 10;
  if (v < 1.0) return 1;
  return static_cast<int>(std::floor(v));
}

}  // namespace detail

inline int corrected_occurrence(int o_base, double row_sum) {
  return detail::corrected_rating(o_base, row_sum, "occurrence");
}

inline int corrected_detection(int d_base, double row_sum) {
  return detail::corrected_rating(d_base, row_sum, "detection");
}

inline std::vector<RpnResult> compute_rpn(const Worksheet& ws,
                                          const CdcfBundle& bundle) {
  std::vector<RpnResult> out;
  out.reserve(ws.items.size());
  for (const RiskItem& item : ws.items) {
    RpnResult r;
    r.item_id = item.id;
    r.kind = item.kind;
    r.severity = item.severity;
    r.o_base = item.occurrence;
    r.d_base = item.detection;
    r.o_corr = corrected_occurrence(r.o_base, row_sum(bundle.prevention, item.id));
    r.d_corr = corrected_detection(r.d_base, row_sum(bundle.detection, item.id));
    r.rpn_base = r.severity * r.o_base * r.d_base;
    r.rpn_corr = r.severity * r.o_corr * r.d_corr;
    r.improvement_pct =
        100.0 * static_cast<double>(r.rpn_base - r.rpn_corr) / r.rpn_base;
    out.push_back(std::move(r));
  }
  return out;
}

// Descending corrected RPN; ties by higher severity, then higher
// corrected occurrence, then ascending item id. Total and deterministic.
inline std::vector<RpnResult> rank(std::vector<RpnResult> results) {
  std::sort(results.begin(), results.end(),
            [](const RpnResult& a, const RpnResult& b) {
              if (a.rpn_corr != b.rpn_corr) return a.rpn_corr > b.rpn_corr;
              if (a.severity != b.severity) return a.severity > b.severity;
              if (a.o_corr != b.o_corr) return a.o_corr > b.o_corr;
              return a.item_id < b.item_id;
            });
  return results;
}

struct RiskMatrixConfig {
  std::vector<std::string> occurrence_classes;   // failure probability, low to high
  std::vector<std::string> feasibility_classes;  // attack feasibility, low to high
  // cells[i][j]: occurrence class i x feasibility class j -> rating 1-10,
  // monotone non-decreasing along both axes
  std::vector<std::vector<int>> cells;
};

// Shipped default: an artifact convention, always overridden by a config
// file when one is given. 5 failure-probability classes (ISO 26262-style)
// x 4 attack-feasibility ratings (ISO 21434-style), filled by the linear
// scheme cell(i,j) = 1 + floor(9*(i+j)/(rows-1 + cols-1)).
inline RiskMatrixConfig default_risk_matrix() {
  RiskMatrixConfig cfg;
  cfg.occurrence_classes = {"incredible", "very_low", "low", "medium", "high"};
  cfg.feasibility_classes = {"very_low", "low", "medium", "high"};
  const int rows = 5, cols = 4;
  cfg.cells.assign(rows, std::vector<int>(cols, 1));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      cfg.cells[i][j] = 1 + (9 * (i + j)) / (rows - 1 + cols - 1);
  return cfg;
}

inline void validate_risk_matrix(const RiskMatrixConfig& cfg) {
  const std::size_t rows = cfg.occurrence_classes.size();
  const std::size_t cols = cfg.feasibility_classes.size();
  if (rows == 0 || cols == 0 || cfg.cells.size() != rows)
    throw SyntaxError("risk matrix: dimension mismatch");
  for (std::size_t i = 0; i < rows; ++i) {
    if (cfg.cells[i].size() != cols)
      throw SyntaxError("risk matrix: dimension mismatch");
    for (std::size_t j = 0; j < cols; ++j) {
      int v = cfg.cells[i][j];
      if (v < 1 || v > 10)
        throw RatingOutOfRange("risk matrix cell " + std::to_string(v));
      if (i > 0 && v < cfg.cells[i - 1][j])
        throw SyntaxError("risk matrix: not monotone along occurrence axis");
      if (j > 0 && v < cfg.cells[i][j - 1])
        throw SyntaxError("risk matrix: not monotone along feasibility axis");
    }
  }
}

inline RiskMatrixConfig load_risk_matrix(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError(std::string("risk matrix JSON: ") + e.what());
  }
  RiskMatrixConfig cfg;
  cfg.occurrence_classes =
      j.at("occurrence_classes").get<std::vector<std::string>>();
  cfg.feasibility_classes =
      j.at("feasibility_classes").get<std::vector<std::string>>();
  cfg.cells = j.at("cells").get<std::vector<std::vector<int>>>();
  validate_risk_matrix(cfg);
  return cfg;
}

inline int unified_occurrence(const std::string& failure_class,
                              const std::string& feasibility_class,
                              const RiskMatrixConfig& cfg) {
  auto row = std::find(cfg.occurrence_classes.begin(),
                       cfg.occurrence_classes.end(), failure_class);
  if (row == cfg.occurrence_classes.end())
    throw UnknownClassLabel("occurrence class '" + failure_class + "'");
  auto col = std::find(cfg.feasibility_classes.begin(),
                       cfg.feasibility_classes.end(), feasibility_class);
  if (col == cfg.feasibility_classes.end())
    throw UnknownClassLabel("feasibility class '" + feasibility_class + "'");
  return cfg.cells[static_cast<std::size_t>(
      row - cfg.occurrence_classes.begin())][static_cast<std::size_t>(
      col - cfg.feasibility_classes.begin())];
}

}  // namespace ftmea
