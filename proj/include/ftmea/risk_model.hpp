#pragma once

// Domain types and validated ingestion for the combined failure/threat
// worksheet: risk items (failure and threat modes with S/O/D ratings),
// countermeasures with optional netlist anchors, and the applicability
// relation between them.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ftmea/csv.hpp"
#include "ftmea/errors.hpp"

namespace ftmea {

enum class ItemKind { FailureMode, ThreatMode };
enum class MeasureKind { Prevention, Detection };
enum class MeasureDomain { Safety, Security };

struct NetAnchors {
  std::vector<std::string> effect_nets;        // where the adverse effect appears
  std::vector<std::string> alarm_nets;         // detection/alarm outputs
  std::vector<std::string> attack_input_nets;  // attacker-controllable entries

  bool empty() const {
    return effect_nets.empty() && alarm_nets.empty() &&
           attack_input_nets.empty();
  }
  bool operator==(const NetAnchors&) const = default;
};

struct RiskItem {
  std::string id;
  ItemKind kind = ItemKind::FailureMode;
  std::string description;
  std::string effect_group;
  int severity = 1;    // S, 1-10
  int occurrence = 1;  // O, 1-10
  int detection = 1;   // D, 1-10

  bool operator==(const RiskItem&) const = default;
};

struct Countermeasure {
  std::string id;
  MeasureKind kind = MeasureKind::Prevention;
  MeasureDomain domain = MeasureDomain::Safety;
  std::string description;
  NetAnchors anchors;

  bool operator==(const Countermeasure&) const = default;
};

struct Worksheet {
  std::vector<RiskItem> items;
  std::vector<Countermeasure> measures;
  std::vector<std::pair<std::string, std::string>> applicability;  // (item, measure)

  const RiskItem* find_item(const std::string& id) const {
    for (const auto& it : items)
      if (it.id == id) return &it;
    return nullptr;
  }
  const Countermeasure* find_measure(const std::string& id) const {
    for (const auto& m : measures)
      if (m.id == id) return &m;
    return nullptr;
  }
  bool applies(const std::string& item_id, const std::string& measure_id) const {
    return std::find(applicability.begin(), applicability.end(),
                     std::make_pair(item_id, measure_id)) !=
           applicability.end();
  }

  bool operator==(const Worksheet&) const = default;
};

namespace detail {

inline int parse_rating(const std::string& s, const std::string& what,
                        const std::string& row_id) {
  // integral only; "3.0" or "3.5" is rejected, not rounded
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw RatingOutOfRange(row_id + ": " + what + " '" + s +
                           "' is not an integer in [1,10]");
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  if (v < 1 || v > 10)
    throw RatingOutOfRange(row_id + ": " + what + "=" + std::to_string(v) +
                           " outside [1,10]");
  return v;
}

inline std::vector<std::string> split_nets(const std::string& field) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : field) {
    if (c == ';') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::string join_nets(const std::vector<std::string>& nets) {
  std::string out;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    if (i) out += ';';
    out += nets[i];
  }
  return out;
}

inline void expect_columns(const csv::Row& row, std::size_t n,
                           std::size_t line) {
  if (row.size() != n)
    throw MalformedCsv("row " + std::to_string(line) + ": expected " +
                       std::to_string(n) + " columns, got " +
                       std::to_string(row.size()));
}

}  // namespace detail

// Items CSV: id,kind,description,effect_group,S,O,D (header required).
inline std::vector<RiskItem> parse_items(const std::string& text) {
  auto rows = csv::parse(text);
  if (rows.empty()) throw MalformedCsv("items: missing header");
  std::vector<RiskItem> items;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    detail::expect_columns(rows[r], 7, r + 1);
    RiskItem it;
    it.id = rows[r][0];
    if (it.id.empty()) throw MalformedCsv("row " + std::to_string(r + 1) + ": empty id");
    if (!seen.insert(it.id).second) throw DuplicateId("item '" + it.id + "'");
    if (rows[r][1] == "FailureMode") it.kind = ItemKind::FailureMode;
    else if (rows[r][1] == "ThreatMode") it.kind = ItemKind::ThreatMode;
    else throw MalformedCsv(it.id + ": unknown kind '" + rows[r][1] + "'");
    it.description = rows[r][2];
    it.effect_group = rows[r][3];
    if (it.effect_group.empty())
      throw MalformedCsv(it.id + ": empty effect_group");
    it.severity = detail::parse_rating(rows[r][4], "S", it.id);
    it.occurrence = detail::parse_rating(rows[r][5], "O", it.id);
    it.detection = detail::parse_rating(rows[r][6], "D", it.id);
    items.push_back(std::move(it));
  }
  return items;
}

// Measures CSV: id,kind,domain,description,effect_nets,alarm_nets,attack_input_nets
// (net lists ';'-separated, empty allowed).
inline std::vector<Countermeasure> parse_measures(const std::string& text) {
  auto rows = csv::parse(text);
  if (rows.empty()) throw MalformedCsv("measures: missing header");
  std::vector<Countermeasure> measures;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    detail::expect_columns(rows[r], 7, r + 1);
    Countermeasure m;
    m.id = rows[r][0];
    if (m.id.empty()) throw MalformedCsv("row " + std::to_string(r + 1) + ": empty id");
    if (!seen.insert(m.id).second) throw DuplicateId("measure '" + m.id + "'");
    if (rows[r][1] == "Prevention") m.kind = MeasureKind::Prevention;
    else if (rows[r][1] == "Detection") m.kind = MeasureKind::Detection;
    else throw MalformedCsv(m.id + ": unknown kind '" + rows[r][1] + "'");
    if (rows[r][2] == "Safety") m.domain = MeasureDomain::Safety;
    else if (rows[r][2] == "Security") m.domain = MeasureDomain::Security;
    else throw MalformedCsv(m.id + ": unknown domain '" + rows[r][2] + "'");
    m.description = rows[r][3];
    m.anchors.effect_nets = detail::split_nets(rows[r][4]);
    m.anchors.alarm_nets = detail::split_nets(rows[r][5]);
    m.anchors.attack_input_nets = detail::split_nets(rows[r][6]);
    measures.push_back(std::move(m));
  }
  return measures;
}

// Applicability CSV: item_id,measure_id.
inline std::vector<std::pair<std::string, std::string>> parse_applicability(
    const std::string& text) {
  auto rows = csv::parse(text);
  if (rows.empty()) throw MalformedCsv("applicability: missing header");
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    detail::expect_columns(rows[r], 2, r + 1);
    auto p = std::make_pair(rows[r][0], rows[r][1]);
    if (std::find(pairs.begin(), pairs.end(), p) != pairs.end())
      throw DuplicateId("applicability pair (" + p.first + "," + p.second + ")");
    pairs.push_back(std::move(p));
  }
  return pairs;
}

inline Worksheet parse_worksheet(const std::string& items_csv,
                                 const std::string& measures_csv = "id,kind,domain,description,effect_nets,alarm_nets,attack_input_nets\n",
                                 const std::string& applicability_csv = "item_id,measure_id\n") {
  Worksheet w;
  w.items = parse_items(items_csv);
  w.measures = parse_measures(measures_csv);
  w.applicability = parse_applicability(applicability_csv);
  for (const auto& [item_id, measure_id] : w.applicability) {
    if (!w.find_item(item_id))
      throw DanglingReference("applicability references unknown item '" +
                              item_id + "'");
    if (!w.find_measure(measure_id))
      throw DanglingReference("applicability references unknown measure '" +
                              measure_id + "'");
  }
  return w;
}

inline std::string render_items(const Worksheet& w) {
  std::string out = "id,kind,description,effect_group,S,O,D\n";
  for (const auto& it : w.items) {
    out += csv::render_row(
        {it.id, it.kind == ItemKind::FailureMode ? "FailureMode" : "ThreatMode",
         it.description, it.effect_group, std::to_string(it.severity),
         std::to_string(it.occurrence), std::to_string(it.detection)});
  }
  return out;
}

inline std::string render_measures(const Worksheet& w) {
  std::string out = "id,kind,domain,description,effect_nets,alarm_nets,attack_input_nets\n";
  for (const auto& m : w.measures) {
    out += csv::render_row(
        {m.id, m.kind == MeasureKind::Prevention ? "Prevention" : "Detection",
         m.domain == MeasureDomain::Safety ? "Safety" : "Security",
         m.description, detail::join_nets(m.anchors.effect_nets),
         detail::join_nets(m.anchors.alarm_nets),
         detail::join_nets(m.anchors.attack_input_nets)});
  }
  return out;
}

inline std::string render_applicability(const Worksheet& w) {
  std::string out = "item_id,measure_id\n";
  for (const auto& [i, m] : w.applicability) out += csv::render_row({i, m});
  return out;
}

struct AnchorError {
  std::string measure_id;  // or item id, for item-level anchors
  std::string missing_net;
  bool operator==(const AnchorError&) const = default;
};

}  // namespace ftmea
