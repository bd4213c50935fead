#pragma once

// Two-valued logic simulator with stuck-at fault injection and
// attack-toggle campaigns. Exhaustive up to 16 pseudo primary inputs;
// above that a seeded pseudorandom vector source with a declared count.
// This is the empirical oracle the structural analyses are checked
// against, so determinism matters more than speed.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "ftmea/errors.hpp"
#include "ftmea/netlist.hpp"

namespace ftmea {

constexpr std::size_t kExhaustiveLimit = 16;  // 65 536 vectors

// Total assignment over pseudo primary inputs (PIs + DFF Q pins).
struct SimVector {
  std::map<NetIndex, bool> assignment;
};

enum class StuckPolarity { StuckAt0, StuckAt1 };

struct FaultSite {
  NetIndex net;
  StuckPolarity polarity;
  auto operator<=>(const FaultSite&) const = default;
};

struct VectorSource {
  enum class Mode { Exhaustive, Seeded };
  Mode mode = Mode::Exhaustive;
  std::uint64_t seed = 0;
  std::size_t count = 0;  // Seeded only
};

struct CampaignResult {
  std::set<FaultSite> affecting_sites;
  NetSet toggleable_nets;
  std::size_t vectors_evaluated = 0;
  std::optional<std::uint64_t> seed;
};

namespace detail {

inline bool eval_gate(const Gate& g, const std::vector<char>& value) {
  switch (g.kind) {
    case GateKind::AND: {
      for (NetIndex in : g.inputs)
        if (!value[in]) return false;
      return true;
    }
    case GateKind::NAND: {
      for (NetIndex in : g.inputs)
        if (!value[in]) return true;
      return false;
    }
    case GateKind::OR: {
      for (NetIndex in : g.inputs)
        if (value[in]) return true;
      return false;
    }
    case GateKind::NOR: {
      for (NetIndex in : g.inputs)
        if (value[in]) return false;
      return true;
    }
    case GateKind::XOR: {
      bool v = false;
      for (NetIndex in : g.inputs) v ^= static_cast<bool>(value[in]);
      return v;
    }
    case GateKind::XNOR: {
      bool v = true;
      for (NetIndex in : g.inputs) v ^= static_cast<bool>(value[in]);
      return v;
    }
    case GateKind::NOT:
      return !value[g.inputs[0]];
    case GateKind::BUFF:
    case GateKind::DFF:
      return static_cast<bool>(value[g.inputs[0]]);
  }
  return false;
}

// Core evaluation: assign pseudo-PIs from `bits` (indexed in
// pseudo_inputs() order), evaluate in topo order, force stuck sites.
inline std::vector<char> eval(const Netlist& nl, std::uint64_t bits,
                              const std::vector<FaultSite>& forced) {
  std::vector<char> value(nl.nets().size(), 0);
  const auto& pis = nl.pseudo_inputs();
  for (std::size_t i = 0; i < pis.size(); ++i)
    value[pis[i]] = static_cast<char>((bits >> i) & 1u);
  for (const FaultSite& f : forced)
    if (nl.is_pseudo_input(f.net))
      value[f.net] = f.polarity == StuckPolarity::StuckAt1;
  for (std::size_t gi : nl.topo_order()) {
    const Gate& g = nl.gates()[gi];
    char v = eval_gate(g, value);
    for (const FaultSite& f : forced)
      if (f.net == g.output) v = f.polarity == StuckPolarity::StuckAt1;
    value[g.output] = v;
  }
  return value;
}

inline std::uint64_t vector_to_bits(const Netlist& nl, const SimVector& vec) {
  const auto& pis = nl.pseudo_inputs();
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < pis.size(); ++i) {
    auto it = vec.assignment.find(pis[i]);
    if (it == vec.assignment.end())
      throw IncompleteVector("missing value for '" + nl.net_name(pis[i]) + "'");
    if (it->second) bits |= std::uint64_t{1} << i;
  }
  return bits;
}

inline std::vector<std::uint64_t> draw_vectors(const Netlist& nl,
                                               const VectorSource& src) {
  const std::size_t n = nl.pseudo_inputs().size();
  std::vector<std::uint64_t> out;
  if (src.mode == VectorSource::Mode::Exhaustive) {
    if (n > kExhaustiveLimit)
      throw ExhaustiveLimitExceeded(std::to_string(n) + " pseudo-PIs");
    out.reserve(std::size_t{1} << n);
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b)
      out.push_back(b);
  } else {
    std::mt19937_64 rng(src.seed);
    std::uint64_t mask =
        n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    out.reserve(src.count);
    for (std::size_t i = 0; i < src.count; ++i) out.push_back(rng() & mask);
  }
  return out;
}

}  // namespace detail

inline std::map<std::string, bool> simulate(const Netlist& nl,
                                            const SimVector& vec) {
  auto value = detail::eval(nl, detail::vector_to_bits(nl, vec), {});
  std::map<std::string, bool> out;
  for (NetIndex n = 0; n < nl.nets().size(); ++n)
    out[nl.net_name(n)] = static_cast<bool>(value[n]);
  return out;
}

// A site is affecting iff some vector makes a monitored net differ
// between faulty and fault-free simulation.
inline CampaignResult fault_campaign(const Netlist& nl, const NetSet& monitored,
                                     const std::vector<FaultSite>& sites,
                                     const VectorSource& src) {
  for (NetIndex m : monitored)
    if (m >= nl.nets().size()) throw UnknownNet(std::to_string(m));
  for (const FaultSite& f : sites)
    if (f.net >= nl.nets().size()) throw UnknownNet(std::to_string(f.net));

  CampaignResult res;
  if (src.mode == VectorSource::Mode::Seeded) res.seed = src.seed;
  auto vectors = detail::draw_vectors(nl, src);
  res.vectors_evaluated = vectors.size();

  for (std::uint64_t bits : vectors) {
    auto good = detail::eval(nl, bits, {});
    for (const FaultSite& f : sites) {
      if (res.affecting_sites.count(f)) continue;
      auto bad = detail::eval(nl, bits, {f});
      for (NetIndex m : monitored) {
        if (good[m] != bad[m]) {
          res.affecting_sites.insert(f);
          break;
        }
      }
    }
  }
  return res;
}

// Joint activation of several sites (multi-bit upset scenarios).
inline bool joint_fault_affects(const Netlist& nl, const NetSet& monitored,
                                const std::vector<FaultSite>& sites,
                                const VectorSource& src) {
  auto vectors = detail::draw_vectors(nl, src);
  for (std::uint64_t bits : vectors) {
    auto good = detail::eval(nl, bits, {});
    auto bad = detail::eval(nl, bits, sites);
    for (NetIndex m : monitored)
      if (good[m] != bad[m]) return true;
  }
  return false;
}

// A net is toggleable iff two vectors that differ only on attack inputs
// produce different values on it (non-attack inputs equal across the pair).
inline CampaignResult attack_toggle_campaign(const Netlist& nl,
                                             const NetSet& attack_inputs,
                                             const VectorSource& src) {
  const auto& pis = nl.pseudo_inputs();
  std::uint64_t attack_mask = 0;
  for (NetIndex a : attack_inputs) {
    bool found = false;
    for (std::size_t i = 0; i < pis.size(); ++i)
      if (pis[i] == a) {
        attack_mask |= std::uint64_t{1} << i;
        found = true;
      }
    if (!found)
      throw UnknownNet("attack input '" +
                       (a < nl.nets().size() ? nl.net_name(a)
                                             : std::to_string(a)) +
                       "' is not a pseudo primary input");
  }

  CampaignResult res;
  if (src.mode == VectorSource::Mode::Seeded) res.seed = src.seed;
  auto vectors = detail::draw_vectors(nl, src);
  res.vectors_evaluated = vectors.size();

  // group by the non-attack part; within a group any per-net variation
  // witnesses toggleability
  std::map<std::uint64_t, std::vector<char>> first_in_group;
  std::vector<char> toggled(nl.nets().size(), 0);
  for (std::uint64_t bits : vectors) {
    auto value = detail::eval(nl, bits, {});
    std::uint64_t key = bits & ~attack_mask;
    auto [it, inserted] = first_in_group.emplace(key, value);
    if (!inserted) {
      for (NetIndex n = 0; n < nl.nets().size(); ++n)
        if (it->second[n] != value[n]) toggled[n] = 1;
    }
  }
  for (NetIndex n = 0; n < nl.nets().size(); ++n)
    if (toggled[n]) res.toggleable_nets.insert(n);
  return res;
}

}  // namespace ftmea
