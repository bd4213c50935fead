#pragma once

// Deterministic report rendering: fixed decimal formatting (coefficients
// 4 places, percentages 2 places), rows in rank order, maps serialized
// with sorted keys. Identical inputs must give byte-identical output.

#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ftmea/correlation.hpp"
#include "ftmea/rpn.hpp"
#include "ftmea/structural_cdcf.hpp"

namespace ftmea {

inline std::string format_fixed(double v, int places) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  // avoid "-0.00"
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-')
    s.erase(0, 1);
  return s;
}

inline std::string format_coeff(double v) { return format_fixed(v, 4); }
inline std::string format_pct(double v) { return format_fixed(v, 2); }

inline const char* kind_name(ItemKind k) {
  return k == ItemKind::FailureMode ? "FailureMode" : "ThreatMode";
}

inline std::string render_rpn_csv(const std::vector<RpnResult>& ranked) {
  std::string out =
      "item_id,kind,S,O,D,O_corr,D_corr,RPN_base,RPN_corr,improvement_pct\n";
  for (const RpnResult& r : ranked) {
    out += csv::render_row({r.item_id, kind_name(r.kind),
                            std::to_string(r.severity), std::to_string(r.o_base),
                            std::to_string(r.d_base), std::to_string(r.o_corr),
                            std::to_string(r.d_corr), std::to_string(r.rpn_base),
                            std::to_string(r.rpn_corr),
                            format_pct(r.improvement_pct)});
  }
  return out;
}

inline std::string render_rpn_markdown(const std::vector<RpnResult>& ranked) {
  std::string out =
      "| Item | Kind | S | O | D | O_corr | D_corr | RPN | RPN_corr | Improvement % |\n"
      "|------|------|---|---|---|--------|--------|-----|----------|---------------|\n";
  for (const RpnResult& r : ranked) {
    out += "| " + r.item_id + " | " + kind_name(r.kind) + " | " +
           std::to_string(r.severity) + " | " + std::to_string(r.o_base) +
           " | " + std::to_string(r.d_base) + " | " + std::to_string(r.o_corr) +
           " | " + std::to_string(r.d_corr) + " | " +
           std::to_string(r.rpn_base) + " | " + std::to_string(r.rpn_corr) +
           " | " + format_pct(r.improvement_pct) + " |\n";
  }
  return out;
}

inline nlohmann::ordered_json rpn_to_json(const std::vector<RpnResult>& ranked) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const RpnResult& r : ranked) {
    nlohmann::ordered_json o;
    o["item_id"] = r.item_id;
    o["kind"] = kind_name(r.kind);
    o["S"] = r.severity;
    o["O"] = r.o_base;
    o["D"] = r.d_base;
    o["O_corr"] = r.o_corr;
    o["D_corr"] = r.d_corr;
    o["RPN_base"] = r.rpn_base;
    o["RPN_corr"] = r.rpn_corr;
    o["improvement_pct"] = format_pct(r.improvement_pct);
    arr.push_back(std::move(o));
  }
  return arr;
}

namespace detail {

inline nlohmann::ordered_json matrix_values_json(
    const std::map<EntryKey, CdcfEntry>& entries) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [key, entry] : entries)  // std::map: keys already sorted
    out[key.first][key.second] = format_coeff(entry.value);
  return out;
}

inline nlohmann::ordered_json matrix_provenance_json(
    const std::map<EntryKey, CdcfEntry>& entries) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [key, entry] : entries) {
    nlohmann::ordered_json p;
    p["source"] =
        entry.source == CdcfSource::Configured ? "configured" : "derived";
    if (!entry.rationale.empty()) p["rationale"] = entry.rationale;
    out[key.first][key.second] = std::move(p);
  }
  return out;
}

}  // namespace detail

// Effective bundle with per-entry provenance. Coefficients are rendered
// as fixed-decimal strings so the file stays byte-stable.
inline std::string render_cdcf_json(const CdcfBundle& bundle) {
  nlohmann::ordered_json j;
  j["common_effect"] = detail::matrix_values_json(bundle.common_effect.entries);
  j["prevention"] = detail::matrix_values_json(bundle.prevention.entries);
  j["detection"] = detail::matrix_values_json(bundle.detection.entries);
  nlohmann::ordered_json prov;
  prov["common_effect"] =
      detail::matrix_provenance_json(bundle.common_effect.entries);
  prov["prevention"] = detail::matrix_provenance_json(bundle.prevention.entries);
  prov["detection"] = detail::matrix_provenance_json(bundle.detection.entries);
  j["provenance"] = std::move(prov);
  return j.dump(2) + "\n";
}

// Plain CDCF JSON (no provenance), loadable by load_cdcf. Numbers are
// emitted as decimal literals, never scientific notation.
inline std::string render_cdcf_plain_json(const CdcfBundle& bundle) {
  auto section = [](const std::map<EntryKey, CdcfEntry>& entries) {
    std::string out = "{";
    std::string prev_row;
    bool first_row = true;
    for (auto it = entries.begin(); it != entries.end();) {
      if (!first_row) out += ", ";
      first_row = false;
      out += "\"" + it->first.first + "\": {";
      const std::string& row = it->first.first;
      bool first_cell = true;
      for (; it != entries.end() && it->first.first == row; ++it) {
        if (!first_cell) out += ", ";
        first_cell = false;
        out += "\"" + it->first.second + "\": " + format_coeff(it->second.value);
      }
      out += "}";
    }
    out += "}";
    return out;
  };
  return "{\n  \"common_effect\": " + section(bundle.common_effect.entries) +
         ",\n  \"prevention\": " + section(bundle.prevention.entries) +
         ",\n  \"detection\": " + section(bundle.detection.entries) + "\n}\n";
}

inline std::string render_evidence_json(const DerivationEvidence& ev) {
  auto section = [](const std::map<EntryKey, DerivedCdcf>& m, bool scoap) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& [key, d] : m) {
      nlohmann::ordered_json e;
      e["value"] = format_coeff(d.value);
      e["coi_size"] = d.coi_size;
      if (scoap) {
        e["mean_cc_with"] = format_coeff(d.mean_cc_with);
        e["mean_cc_without"] = format_coeff(d.mean_cc_without);
      } else {
        e["overlap_size"] = d.overlap_size;
      }
      out[key.first][key.second] = std::move(e);
    }
    return out;
  };
  nlohmann::ordered_json j;
  j["common_effect"] = section(ev.common_effect, false);
  j["prevention"] = section(ev.prevention, true);
  j["detection"] = section(ev.detection, false);
  return j.dump(2) + "\n";
}

inline std::string render_scoap_csv(const Netlist& nl, const ScoapReport& rep) {
  // rows sorted by net name for stable output
  std::vector<NetIndex> order(nl.nets().size());
  for (NetIndex i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](NetIndex a, NetIndex b) {
    return nl.net_name(a) < nl.net_name(b);
  });
  std::string out = "net,cc0,cc1,co\n";
  for (NetIndex n : order) {
    std::string co = rep.co[n] == ScoapReport::kUnobservable
                         ? "inf"
                         : std::to_string(rep.co[n]);
    out += csv::render_row({nl.net_name(n), std::to_string(rep.cc0[n]),
                            std::to_string(rep.cc1[n]), co});
  }
  return out;
}

}  // namespace ftmea
