#pragma once

// SCOAP combinational testability: CC0/CC1 controllability per net
// (difficulty of forcing the net to 0/1) and CO observability per net
// (difficulty of propagating the net to any pseudo primary output).
// Controllability runs forward in topological order, observability
// backward. DFF Q pins score as PIs, D pins as POs.

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ftmea/errors.hpp"
#include "ftmea/netlist.hpp"

namespace ftmea {

struct ScoapReport {
  // indexed by NetIndex; co == kUnobservable for nets with no path to a PO
  static constexpr std::int64_t kUnobservable =
      std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> cc0, cc1, co;
};

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ScoreOverflow("SCOAP score");
  return r;
}

struct Cc {
  std::int64_t c0, c1;
};

inline Cc xor2(const Cc& a, const Cc& b) {
  return {std::min(checked_add(a.c0, b.c0), checked_add(a.c1, b.c1)) + 1,
          std::min(checked_add(a.c0, b.c1), checked_add(a.c1, b.c0)) + 1};
}

}  // namespace detail

inline ScoapReport compute_scoap(const Netlist& nl) {
  const std::size_t n = nl.nets().size();
  ScoapReport rep;
  rep.cc0.assign(n, 0);
  rep.cc1.assign(n, 0);
  rep.co.assign(n, ScoapReport::kUnobservable);

  for (NetIndex pi : nl.pseudo_inputs()) rep.cc0[pi] = rep.cc1[pi] = 1;

  using detail::checked_add;
  using detail::Cc;

  auto cc = [&](NetIndex net) -> Cc { return {rep.cc0[net], rep.cc1[net]}; };

  for (std::size_t gi : nl.topo_order()) {
    const Gate& g = nl.gates()[gi];
    Cc out{0, 0};
    switch (g.kind) {
      case GateKind::AND: {
        std::int64_t sum1 = 0, min0 = ScoapReport::kUnobservable;
        for (NetIndex in : g.inputs) {
          sum1 = checked_add(sum1, rep.cc1[in]);
          min0 = std::min(min0, rep.cc0[in]);
        }
        out = {min0 + 1, sum1 + 1};
        break;
      }
      case GateKind::OR: {
        std::int64_t sum0 = 0, min1 = ScoapReport::kUnobservable;
        for (NetIndex in : g.inputs) {
          sum0 = checked_add(sum0, rep.cc0[in]);
          min1 = std::min(min1, rep.cc1[in]);
        }
        out = {sum0 + 1, min1 + 1};
        break;
      }
      case GateKind::NAND: {
        std::int64_t sum1 = 0, min0 = ScoapReport::kUnobservable;
        for (NetIndex in : g.inputs) {
          sum1 = checked_add(sum1, rep.cc1[in]);
          min0 = std::min(min0, rep.cc0[in]);
        }
        out = {sum1 + 1, min0 + 1};
        break;
      }
      case GateKind::NOR: {
        std::int64_t sum0 = 0, min1 = ScoapReport::kUnobservable;
        for (NetIndex in : g.inputs) {
          sum0 = checked_add(sum0, rep.cc0[in]);
          min1 = std::min(min1, rep.cc1[in]);
        }
        out = {min1 + 1, sum0 + 1};
        break;
      }
      case GateKind::NOT:
        out = {rep.cc1[g.inputs[0]] + 1, rep.cc0[g.inputs[0]] + 1};
        break;
      case GateKind::BUFF:
        out = {rep.cc0[g.inputs[0]] + 1, rep.cc1[g.inputs[0]] + 1};
        break;
      case GateKind::XOR:
      case GateKind::XNOR: {
        // >2 inputs decomposed left-associatively into 2-input XORs
        Cc acc = cc(g.inputs[0]);
        for (std::size_t i = 1; i < g.inputs.size(); ++i)
          acc = detail::xor2(acc, cc(g.inputs[i]));
        out = g.kind == GateKind::XOR ? acc : Cc{acc.c1, acc.c0};
        break;
      }
      case GateKind::DFF:
        continue;  // not in topo_order; defensive
    }
    rep.cc0[g.output] = out.c0;
    rep.cc1[g.output] = out.c1;
  }

  for (NetIndex po : nl.pseudo_outputs()) rep.co[po] = 0;

  auto relax_input = [&](NetIndex in, std::int64_t candidate) {
    if (candidate < rep.co[in]) rep.co[in] = candidate;
  };

  for (auto it = nl.topo_order().rbegin(); it != nl.topo_order().rend(); ++it) {
    const Gate& g = nl.gates()[*it];
    std::int64_t co_out = rep.co[g.output];
    if (co_out == ScoapReport::kUnobservable) continue;
    switch (g.kind) {
      case GateKind::AND:
      case GateKind::NAND: {
        for (NetIndex in : g.inputs) {
          std::int64_t side = 0;
          for (NetIndex other : g.inputs)
            if (other != in) side = checked_add(side, rep.cc1[other]);
          relax_input(in, checked_add(co_out, side) + 1);
        }
        break;
      }
      case GateKind::OR:
      case GateKind::NOR: {
        for (NetIndex in : g.inputs) {
          std::int64_t side = 0;
          for (NetIndex other : g.inputs)
            if (other != in) side = checked_add(side, rep.cc0[other]);
          relax_input(in, checked_add(co_out, side) + 1);
        }
        break;
      }
      case GateKind::NOT:
      case GateKind::BUFF:
        relax_input(g.inputs[0], co_out + 1);
        break;
      case GateKind::XOR:
      case GateKind::XNOR: {
        // observe input i through the left-associative chain: each other
        // input contributes min(CC0, CC1), each 2-input stage adds 1
        for (NetIndex in : g.inputs) {
          std::int64_t side = 0;
          for (NetIndex other : g.inputs)
            if (other != in)
              side = checked_add(side,
                                 std::min(rep.cc0[other], rep.cc1[other]));
          std::int64_t stages =
              static_cast<std::int64_t>(g.inputs.size()) - 1;
          relax_input(in, checked_add(co_out, side) + stages);
        }
        break;
      }
      case GateKind::DFF:
        break;
    }
  }

  // A net that is both an input to several gates and a PO keeps co == 0
  // (the min over observation paths); handled by initialization order above.
  return rep;
}

// Arithmetic mean of (cc0 + cc1) over the given nets.
inline double mean_controllability(const ScoapReport& rep, const NetSet& nets) {
  if (nets.empty()) throw EmptyNetSet("mean_controllability");
  double sum = 0;
  for (NetIndex n : nets) {
    if (n >= rep.cc0.size()) throw UnknownNet(std::to_string(n));
    sum += static_cast<double>(rep.cc0[n]) + static_cast<double>(rep.cc1[n]);
  }
  return sum / static_cast<double>(nets.size());
}

}  // namespace ftmea
