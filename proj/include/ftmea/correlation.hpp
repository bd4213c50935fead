#pragma once

// Cross-domain correlation factor storage: the common-effect matrix
// (failure mode x threat mode, coefficients in [0,1]) and the signed
// influence matrices (mode x measure, coefficients in [-1,1]) feeding
// the corrected occurrence/detection calculation. Sparse maps, absent
// means zero.

#include <map>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "ftmea/errors.hpp"
#include "ftmea/risk_model.hpp"

namespace ftmea {

enum class CdcfSource { Configured, Derived };

struct CdcfEntry {
  double value = 0.0;
  CdcfSource source = CdcfSource::Configured;
  std::string rationale;

  bool operator==(const CdcfEntry&) const = default;
};

using EntryKey = std::pair<std::string, std::string>;

struct CommonEffectMatrix {
  // (fm_id, tm_id) -> coefficient in [0,1]
  std::map<EntryKey, CdcfEntry> entries;
  bool operator==(const CommonEffectMatrix&) const = default;
};

enum class InfluenceKind { PreventionInfluence, DetectionInfluence };

struct InfluenceMatrix {
  InfluenceKind kind = InfluenceKind::PreventionInfluence;
  // (item_id, measure_id) -> C_ij in [-1,1]
  std::map<EntryKey, CdcfEntry> entries;
  bool operator==(const InfluenceMatrix&) const = default;
};

struct CdcfBundle {
  CommonEffectMatrix common_effect;
  InfluenceMatrix prevention{InfluenceKind::PreventionInfluence, {}};
  InfluenceMatrix detection{InfluenceKind::DetectionInfluence, {}};
  // sorted item ids of the worksheet the bundle was validated against
  std::string worksheet_tag;

  bool operator==(const CdcfBundle&) const = default;
};

inline std::string worksheet_tag(const Worksheet& ws) {
  std::vector<std::string> ids;
  for (const auto& it : ws.items) ids.push_back(it.id);
  std::sort(ids.begin(), ids.end());
  std::string tag;
  for (const auto& id : ids) {
    tag += id;
    tag += '\n';
  }
  return tag;
}

// Sum of C_ij over all measures j with an entry for item i; 0 when empty.
inline double row_sum(const InfluenceMatrix& matrix,
                      const std::string& item_id) {
  double sum = 0.0;
  auto lo = matrix.entries.lower_bound({item_id, ""});
  for (auto it = lo; it != matrix.entries.end() && it->first.first == item_id;
       ++it)
    sum += it->second.value;
  return sum;
}

inline double row_sum(const InfluenceMatrix& matrix, const std::string& item_id,
                      const Worksheet& ws) {
  if (!ws.find_item(item_id)) throw UnknownId("item '" + item_id + "'");
  return row_sum(matrix, item_id);
}

namespace detail {

// The CDCF file format forbids scientific notation so reports stay
// byte-deterministic. nlohmann accepts it, so scan the raw text.
inline void reject_scientific_notation(const std::string& text) {
  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
    } else if (c == '"') {
      in_string = true;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[j])) ||
              text[j] == '.' || text[j] == '-' || text[j] == '+' ||
              text[j] == 'e' || text[j] == 'E')) {
        if (text[j] == 'e' || text[j] == 'E')
          throw SyntaxError("scientific notation not allowed in CDCF JSON");
        ++j;
      }
      i = j - 1;
    }
  }
}

inline void check_influence_key(const Worksheet& ws, const std::string& item_id,
                                const std::string& measure_id,
                                InfluenceKind kind) {
  if (!ws.find_item(item_id)) throw UnknownId("item '" + item_id + "'");
  const Countermeasure* m = ws.find_measure(measure_id);
  if (!m) throw UnknownId("measure '" + measure_id + "'");
  if (!ws.applies(item_id, measure_id))
    throw UnknownId("pair (" + item_id + "," + measure_id +
                    ") not in applicability");
  MeasureKind want = kind == InfluenceKind::PreventionInfluence
                         ? MeasureKind::Prevention
                         : MeasureKind::Detection;
  if (m->kind != want)
    throw WrongKind("measure '" + measure_id + "' is a " +
                    (m->kind == MeasureKind::Prevention ? "prevention"
                                                        : "detection") +
                    " measure");
}

}  // namespace detail

// CDCF JSON: {"common_effect": {"<fm>": {"<tm>": c}},
//             "prevention": {"<item>": {"<measure>": c}},
//             "detection": {...}}  — all sections optional.
inline CdcfBundle load_cdcf(const std::string& json_text,
                            const Worksheet& ws) {
  detail::reject_scientific_notation(json_text);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError(std::string("CDCF JSON: ") + e.what());
  }
  if (!j.is_object()) throw SyntaxError("CDCF JSON: top level must be object");

  CdcfBundle bundle;
  bundle.worksheet_tag = worksheet_tag(ws);

  if (j.contains("common_effect")) {
    for (const auto& [fm_id, row] : j.at("common_effect").items()) {
      const RiskItem* fm = ws.find_item(fm_id);
      if (!fm) throw UnknownId("item '" + fm_id + "'");
      if (fm->kind != ItemKind::FailureMode)
        throw WrongKind("'" + fm_id + "' is not a failure mode");
      for (const auto& [tm_id, val] : row.items()) {
        const RiskItem* tm = ws.find_item(tm_id);
        if (!tm) throw UnknownId("item '" + tm_id + "'");
        if (tm->kind != ItemKind::ThreatMode)
          throw WrongKind("'" + tm_id + "' is not a threat mode");
        double c = val.get<double>();
        if (c < 0.0 || c > 1.0)
          throw CoefficientOutOfRange("common_effect (" + fm_id + "," + tm_id +
                                      ") = " + std::to_string(c));
        bundle.common_effect.entries[{fm_id, tm_id}] = {
            c, CdcfSource::Configured, ""};
      }
    }
  }

  auto load_influence = [&](const char* section, InfluenceMatrix& matrix) {
    if (!j.contains(section)) return;
    for (const auto& [item_id, row] : j.at(section).items()) {
      for (const auto& [measure_id, val] : row.items()) {
        detail::check_influence_key(ws, item_id, measure_id, matrix.kind);
        double c = val.get<double>();
        if (c < -1.0 || c > 1.0)
          throw CoefficientOutOfRange(std::string(section) + " (" + item_id +
                                      "," + measure_id + ") = " +
                                      std::to_string(c));
        matrix.entries[{item_id, measure_id}] = {c, CdcfSource::Configured, ""};
      }
    }
  };
  load_influence("prevention", bundle.prevention);
  load_influence("detection", bundle.detection);
  return bundle;
}

// Per-entry union; on collision the configured entry wins and the derived
// value is kept in the rationale.
inline CdcfBundle merge_bundles(const CdcfBundle& configured,
                                const CdcfBundle& derived) {
  if (configured.worksheet_tag != derived.worksheet_tag)
    throw InconsistentWorksheet("bundles validated against different worksheets");

  CdcfBundle out = configured;
  auto merge_map = [](std::map<EntryKey, CdcfEntry>& dst,
                      const std::map<EntryKey, CdcfEntry>& src) {
    for (const auto& [key, entry] : src) {
      auto it = dst.find(key);
      if (it == dst.end()) {
        dst[key] = entry;
      } else {
        std::string note = "configured value overrides derived " +
                           std::to_string(entry.value);
        if (!it->second.rationale.empty()) note = it->second.rationale + "; " + note;
        it->second.rationale = note;
      }
    }
  };
  merge_map(out.common_effect.entries, derived.common_effect.entries);
  merge_map(out.prevention.entries, derived.prevention.entries);
  merge_map(out.detection.entries, derived.detection.entries);
  return out;
}

}  // namespace ftmea
