#pragma once

// Derives CDCFs from netlist structure: common-effect coefficients as
// the fraction of the effect cone reachable from attack inputs,
// prevention coefficients as the relative SCOAP controllability shift
// between a baseline netlist and one with the measure in place, and
// detection coefficients as the observability-cone overlap with the
// effect cone.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ftmea/correlation.hpp"
#include "ftmea/errors.hpp"
#include "ftmea/netlist.hpp"
#include "ftmea/risk_model.hpp"
#include "ftmea/scoap.hpp"

namespace ftmea {

// Checks that every anchored net name exists in the netlist. Returns a
// list instead of throwing: missing anchors are analyst feedback, not a
// crash.
inline std::vector<AnchorError> validate_anchors(const Worksheet& ws,
                                                 const Netlist& nl) {
  std::vector<AnchorError> errors;
  auto check = [&](const std::string& owner, const std::vector<std::string>& nets) {
    for (const auto& name : nets)
      if (!nl.has_net(name)) errors.push_back({owner, name});
  };
  for (const Countermeasure& m : ws.measures) {
    check(m.id, m.anchors.effect_nets);
    check(m.id, m.anchors.alarm_nets);
    check(m.id, m.anchors.attack_input_nets);
  }
  return errors;
}

enum class DerivedKind { CommonEffect, PreventionInfluence, DetectionInfluence };

struct DerivedCdcf {
  double value = 0.0;
  DerivedKind kind = DerivedKind::CommonEffect;
  // set sizes / score means backing the value, for the evidence sidecar
  std::size_t coi_size = 0;
  std::size_t overlap_size = 0;
  double mean_cc_with = 0.0;
  double mean_cc_without = 0.0;
};

// |fanin_cone(effect) ∩ fanout_cone(attack)| / |fanin_cone(effect)|
inline DerivedCdcf common_effect_cdcf(const Netlist& nl,
                                      const NetSet& effect_nets,
                                      const NetSet& attack_inputs) {
  if (effect_nets.empty()) throw EmptyNetSet("effect nets");
  NetSet coi = fanin_cone(nl, effect_nets);
  NetSet ctrl = fanout_cone(nl, attack_inputs);
  NetSet overlap;
  std::set_intersection(coi.begin(), coi.end(), ctrl.begin(), ctrl.end(),
                        std::inserter(overlap, overlap.begin()));
  DerivedCdcf d;
  d.kind = DerivedKind::CommonEffect;
  d.coi_size = coi.size();
  d.overlap_size = overlap.size();
  d.value = static_cast<double>(overlap.size()) / static_cast<double>(coi.size());
  return d;
}

// Relative mean-controllability shift of the effect cone between the
// netlist with the prevention measure and the baseline without it.
// Positive when the measure makes the effect logic harder to control.
inline DerivedCdcf prevention_cdcf(const Netlist& baseline,
                                   const Netlist& with_measure,
                                   const std::vector<std::string>& effect_net_names) {
  if (effect_net_names.empty()) throw EmptyNetSet("effect nets");
  NetSet roots_b = resolve_nets(baseline, effect_net_names);
  NetSet roots_w = resolve_nets(with_measure, effect_net_names);
  NetSet coi_b = fanin_cone(baseline, roots_b);
  NetSet coi_w = fanin_cone(with_measure, roots_w);
  double mean_b = mean_controllability(compute_scoap(baseline), coi_b);
  double mean_w = mean_controllability(compute_scoap(with_measure), coi_w);

  DerivedCdcf d;
  d.kind = DerivedKind::PreventionInfluence;
  d.coi_size = coi_w.size();
  d.mean_cc_with = mean_w;
  d.mean_cc_without = mean_b;
  double denom = std::max(mean_w, mean_b);
  double v = denom == 0.0 ? 0.0 : (mean_w - mean_b) / denom;
  d.value = std::clamp(v, -1.0, 1.0);
  return d;
}

// |fanin_cone(alarm) ∩ fanin_cone(effect)| / |fanin_cone(effect)|
inline DerivedCdcf detection_cdcf(const Netlist& nl, const NetSet& alarm_nets,
                                  const NetSet& effect_nets) {
  if (effect_nets.empty()) throw EmptyNetSet("effect nets");
  NetSet obs = fanin_cone(nl, alarm_nets);
  NetSet coi = fanin_cone(nl, effect_nets);
  NetSet overlap;
  std::set_intersection(obs.begin(), obs.end(), coi.begin(), coi.end(),
                        std::inserter(overlap, overlap.begin()));
  DerivedCdcf d;
  d.kind = DerivedKind::DetectionInfluence;
  d.coi_size = coi.size();
  d.overlap_size = overlap.size();
  d.value = static_cast<double>(overlap.size()) / static_cast<double>(coi.size());
  return d;
}

struct DerivationRequest {
  const Netlist* netlist = nullptr;
  const Netlist* variant_netlist = nullptr;  // with prevention measure applied
  std::map<std::string, NetAnchors> item_anchors;
  // measure anchors come from the worksheet's countermeasures
};

struct DerivationEvidence {
  std::map<EntryKey, DerivedCdcf> common_effect;
  std::map<EntryKey, DerivedCdcf> prevention;
  std::map<EntryKey, DerivedCdcf> detection;
};

inline const NetAnchors* anchors_for(const DerivationRequest& req,
                                     const std::string& item_id) {
  auto it = req.item_anchors.find(item_id);
  return it == req.item_anchors.end() ? nullptr : &it->second;
}

// For every applicability pair with sufficient anchors, derive the
// matching coefficient. Pairs lacking anchors are skipped (absent means
// zero), never guessed. Common-effect entries are derived for every
// (failure mode, threat mode) pair sharing an effect group where the FM
// has effect nets and the TM has attack input nets.
inline CdcfBundle derive_bundle(const DerivationRequest& req,
                                const Worksheet& ws,
                                DerivationEvidence* evidence = nullptr) {
  if (!req.netlist) throw UnknownNet("derivation request has no netlist");
  const Netlist& nl = *req.netlist;

  CdcfBundle bundle;
  bundle.worksheet_tag = worksheet_tag(ws);

  auto wrap = [](const std::string& item_id, const std::string& measure_id,
                 auto&& fn) {
    try {
      return fn();
    } catch (const Error& e) {
      throw UnknownNet("(" + item_id + "," + measure_id + "): " + e.what());
    }
  };

  for (const auto& [item_id, measure_id] : ws.applicability) {
    const Countermeasure* m = ws.find_measure(measure_id);
    const NetAnchors* item_a = anchors_for(req, item_id);
    if (!item_a || item_a->effect_nets.empty()) continue;

    if (m->kind == MeasureKind::Detection) {
      if (m->anchors.alarm_nets.empty()) continue;
      DerivedCdcf d = wrap(item_id, measure_id, [&] {
        return detection_cdcf(nl, resolve_nets(nl, m->anchors.alarm_nets),
                              resolve_nets(nl, item_a->effect_nets));
      });
      bundle.detection.entries[{item_id, measure_id}] = {
          d.value, CdcfSource::Derived, "structural observability overlap"};
      if (evidence) evidence->detection[{item_id, measure_id}] = d;
    } else {
      if (!req.variant_netlist) continue;
      DerivedCdcf d = wrap(item_id, measure_id, [&] {
        return prevention_cdcf(nl, *req.variant_netlist, item_a->effect_nets);
      });
      bundle.prevention.entries[{item_id, measure_id}] = {
          d.value, CdcfSource::Derived, "controllability shift vs baseline"};
      if (evidence) evidence->prevention[{item_id, measure_id}] = d;
    }
  }

  for (const RiskItem& fm : ws.items) {
    if (fm.kind != ItemKind::FailureMode) continue;
    const NetAnchors* fm_a = anchors_for(req, fm.id);
    if (!fm_a || fm_a->effect_nets.empty()) continue;
    for (const RiskItem& tm : ws.items) {
      if (tm.kind != ItemKind::ThreatMode) continue;
      if (tm.effect_group != fm.effect_group) continue;
      const NetAnchors* tm_a = anchors_for(req, tm.id);
      if (!tm_a || tm_a->attack_input_nets.empty()) continue;
      DerivedCdcf d = wrap(fm.id, tm.id, [&] {
        return common_effect_cdcf(nl, resolve_nets(nl, fm_a->effect_nets),
                                  resolve_nets(nl, tm_a->attack_input_nets));
      });
      bundle.common_effect.entries[{fm.id, tm.id}] = {
          d.value, CdcfSource::Derived, "effect-cone / attack-reach overlap"};
      if (evidence) evidence->common_effect[{fm.id, tm.id}] = d;
    }
  }

  return bundle;
}

}  // namespace ftmea
