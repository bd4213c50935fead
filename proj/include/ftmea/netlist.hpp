#pragma once

// Gate-level netlist parsed from ISCAS-89 style bench text into an
// immutable DAG. DFFs cut the graph: Q pins act as pseudo primary
// inputs and D pins as pseudo primary outputs, so every downstream
// analysis (cones, SCOAP, simulation) works on the combinational view.

#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ftmea/errors.hpp"

namespace ftmea {

using NetIndex = std::uint32_t;
using NetSet = std::set<NetIndex>;

enum class GateKind { AND, OR, NAND, NOR, XOR, XNOR, NOT, BUFF, DFF };

struct Gate {
  GateKind kind;
  std::vector<NetIndex> inputs;
  NetIndex output;
};

class Netlist {
 public:
  const std::vector<std::string>& nets() const { return net_names_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<NetIndex>& primary_inputs() const { return primary_inputs_; }
  const std::vector<NetIndex>& primary_outputs() const { return primary_outputs_; }
  // (d_input_net, q_output_net) per flip-flop
  const std::vector<std::pair<NetIndex, NetIndex>>& dff_boundaries() const {
    return dff_boundaries_;
  }
  // combinational gates only, topologically ordered (inputs before outputs)
  const std::vector<std::size_t>& topo_order() const { return topo_order_; }

  // PIs plus DFF Q pins: the inputs of the combinational view.
  const std::vector<NetIndex>& pseudo_inputs() const { return pseudo_inputs_; }
  // POs plus DFF D pins.
  const std::vector<NetIndex>& pseudo_outputs() const { return pseudo_outputs_; }

  bool is_pseudo_input(NetIndex n) const { return pseudo_input_mask_[n]; }
  bool is_pseudo_output(NetIndex n) const { return pseudo_output_mask_[n]; }

  const std::string& net_name(NetIndex n) const { return net_names_[n]; }

  NetIndex net_index(const std::string& name) const {
    auto it = net_index_.find(name);
    if (it == net_index_.end()) throw UnknownNet("'" + name + "'");
    return it->second;
  }
  bool has_net(const std::string& name) const {
    return net_index_.count(name) != 0;
  }

  // index of the combinational gate driving net n, or -1 for pseudo-inputs
  std::ptrdiff_t driver_gate(NetIndex n) const { return driver_[n]; }
  // combinational gates reading net n
  const std::vector<std::size_t>& reader_gates(NetIndex n) const {
    return readers_[n];
  }

  friend Netlist parse_bench(const std::string& text);

 private:
  std::vector<std::string> net_names_;
  std::map<std::string, NetIndex> net_index_;
  std::vector<Gate> gates_;
  std::vector<NetIndex> primary_inputs_, primary_outputs_;
  std::vector<std::pair<NetIndex, NetIndex>> dff_boundaries_;
  std::vector<NetIndex> pseudo_inputs_, pseudo_outputs_;
  std::vector<bool> pseudo_input_mask_, pseudo_output_mask_;
  std::vector<std::ptrdiff_t> driver_;
  std::vector<std::vector<std::size_t>> readers_;
  std::vector<std::size_t> topo_order_;
};

namespace detail {

inline bool valid_net_name(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'))
      return false;
  return true;
}

inline GateKind gate_kind_from(const std::string& s, std::size_t line) {
  if (s == "AND") return GateKind::AND;
  if (s == "OR") return GateKind::OR;
  if (s == "NAND") return GateKind::NAND;
  if (s == "NOR") return GateKind::NOR;
  if (s == "XOR") return GateKind::XOR;
  if (s == "XNOR") return GateKind::XNOR;
  if (s == "NOT") return GateKind::NOT;
  if (s == "BUFF" || s == "BUF") return GateKind::BUFF;
  if (s == "DFF") return GateKind::DFF;
  throw UnknownGateKind("line " + std::to_string(line) + ": '" + s + "'");
}

inline std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline Netlist parse_bench(const std::string& text) {
  Netlist nl;

  auto intern = [&nl](const std::string& name, std::size_t line) -> NetIndex {
    if (!detail::valid_net_name(name))
      throw SyntaxError("line " + std::to_string(line) + ": bad net name '" +
                        name + "'");
    auto it = nl.net_index_.find(name);
    if (it != nl.net_index_.end()) return it->second;
    NetIndex idx = static_cast<NetIndex>(nl.net_names_.size());
    nl.net_names_.push_back(name);
    nl.net_index_.emplace(name, idx);
    return idx;
  };

  std::vector<NetIndex> declared_inputs, declared_outputs;
  struct RawGate {
    GateKind kind;
    std::vector<NetIndex> inputs;
    NetIndex output;
    std::size_t line;
  };
  std::vector<RawGate> raw;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::strip(line);
    if (line.empty()) continue;

    auto parse_decl = [&](const std::string& kw) -> std::string {
      // "INPUT ( name )" — whitespace-insensitive around tokens
      std::string rest = detail::strip(line.substr(kw.size()));
      if (rest.empty() || rest.front() != '(' || rest.back() != ')')
        throw SyntaxError("line " + std::to_string(line_no) + ": expected " +
                          kw + "(<name>)");
      return detail::strip(rest.substr(1, rest.size() - 2));
    };

    if (line.rfind("INPUT", 0) == 0 &&
        line.find('=') == std::string::npos) {
      declared_inputs.push_back(intern(parse_decl("INPUT"), line_no));
      continue;
    }
    if (line.rfind("OUTPUT", 0) == 0 &&
        line.find('=') == std::string::npos) {
      declared_outputs.push_back(intern(parse_decl("OUTPUT"), line_no));
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw SyntaxError("line " + std::to_string(line_no) + ": expected '='");
    std::string lhs = detail::strip(line.substr(0, eq));
    std::string rhs = detail::strip(line.substr(eq + 1));
    std::size_t open = rhs.find('(');
    if (open == std::string::npos || rhs.back() != ')')
      throw SyntaxError("line " + std::to_string(line_no) +
                        ": expected <GATE>(<nets>)");
    GateKind kind =
        detail::gate_kind_from(detail::strip(rhs.substr(0, open)), line_no);
    std::string args = rhs.substr(open + 1, rhs.size() - open - 2);

    RawGate g;
    g.kind = kind;
    g.output = intern(lhs, line_no);
    g.line = line_no;
    std::size_t start = 0;
    while (start <= args.size()) {
      std::size_t comma = args.find(',', start);
      std::string tok = detail::strip(
          args.substr(start, comma == std::string::npos ? std::string::npos
                                                        : comma - start));
      if (tok.empty())
        throw SyntaxError("line " + std::to_string(line_no) +
                          ": empty operand");
      g.inputs.push_back(intern(tok, line_no));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    bool unary = kind == GateKind::NOT || kind == GateKind::BUFF ||
                 kind == GateKind::DFF;
    if (unary && g.inputs.size() != 1)
      throw SyntaxError("line " + std::to_string(line_no) +
                        ": unary gate needs exactly one input");
    if (!unary && g.inputs.size() < 2)
      throw SyntaxError("line " + std::to_string(line_no) +
                        ": gate needs at least two inputs");
    raw.push_back(std::move(g));
  }

  const std::size_t n_nets = nl.net_names_.size();
  nl.driver_.assign(n_nets, -2);  // -2 undriven, -1 pseudo-input
  nl.readers_.assign(n_nets, {});
  nl.pseudo_input_mask_.assign(n_nets, false);
  nl.pseudo_output_mask_.assign(n_nets, false);

  for (NetIndex pi : declared_inputs) {
    if (nl.driver_[pi] != -2)
      throw MultiplyDrivenNet("'" + nl.net_names_[pi] + "'");
    nl.driver_[pi] = -1;
    nl.pseudo_input_mask_[pi] = true;
  }
  nl.primary_inputs_ = declared_inputs;
  nl.primary_outputs_ = declared_outputs;

  for (const RawGate& g : raw) {
    if (nl.driver_[g.output] != -2)
      throw MultiplyDrivenNet("'" + nl.net_names_[g.output] + "'");
    if (g.kind == GateKind::DFF) {
      nl.driver_[g.output] = -1;  // Q is a pseudo-PI for the comb view
      nl.pseudo_input_mask_[g.output] = true;
      nl.pseudo_output_mask_[g.inputs[0]] = true;  // D is a pseudo-PO
      nl.dff_boundaries_.emplace_back(g.inputs[0], g.output);
      nl.gates_.push_back({g.kind, g.inputs, g.output});
    } else {
      nl.driver_[g.output] = static_cast<std::ptrdiff_t>(nl.gates_.size());
      nl.gates_.push_back({g.kind, g.inputs, g.output});
      for (NetIndex in : g.inputs)
        nl.readers_[in].push_back(nl.gates_.size() - 1);
    }
  }

  for (NetIndex n = 0; n < n_nets; ++n)
    if (nl.driver_[n] == -2)
      throw UndrivenNet("'" + nl.net_names_[n] + "'");

  for (NetIndex po : declared_outputs) nl.pseudo_output_mask_[po] = true;

  nl.pseudo_inputs_.clear();
  nl.pseudo_outputs_.clear();
  for (NetIndex n = 0; n < n_nets; ++n) {
    if (nl.pseudo_input_mask_[n]) nl.pseudo_inputs_.push_back(n);
    if (nl.pseudo_output_mask_[n]) nl.pseudo_outputs_.push_back(n);
  }

  // Kahn's algorithm over combinational gates
  std::vector<std::size_t> indegree(nl.gates_.size(), 0);
  std::vector<std::size_t> ready;
  for (std::size_t gi = 0; gi < nl.gates_.size(); ++gi) {
    if (nl.gates_[gi].kind == GateKind::DFF) continue;
    std::size_t deg = 0;
    for (NetIndex in : nl.gates_[gi].inputs)
      if (nl.driver_[in] >= 0) ++deg;
    indegree[gi] = deg;
    if (deg == 0) ready.push_back(gi);
  }
  std::size_t comb_count = 0;
  for (const Gate& g : nl.gates_)
    if (g.kind != GateKind::DFF) ++comb_count;

  while (!ready.empty()) {
    std::size_t gi = ready.back();
    ready.pop_back();
    nl.topo_order_.push_back(gi);
    for (std::size_t reader : nl.readers_[nl.gates_[gi].output])
      if (--indegree[reader] == 0) ready.push_back(reader);
  }
  if (nl.topo_order_.size() != comb_count)
    throw CombinationalLoop("netlist contains a combinational cycle");

  // deterministic order regardless of ready-stack pops: re-sort by level
  {
    std::vector<std::size_t> level(nl.gates_.size(), 0);
    std::vector<std::size_t> order = nl.topo_order_;
    for (std::size_t gi : order) {
      std::size_t lv = 0;
      for (NetIndex in : nl.gates_[gi].inputs)
        if (nl.driver_[in] >= 0)
          lv = std::max(lv, level[static_cast<std::size_t>(nl.driver_[in])] + 1);
      level[gi] = lv;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return level[a] != level[b] ? level[a] < level[b]
                                                   : a < b;
                     });
    nl.topo_order_ = order;
  }

  return nl;
}

// All nets with a directed combinational path to any root, roots included.
// Traversal stops at pseudo-inputs (PIs and DFF Q pins have no comb driver).
inline NetSet fanin_cone(const Netlist& nl, const NetSet& roots) {
  NetSet cone;
  std::vector<NetIndex> stack;
  for (NetIndex r : roots) {
    if (r >= nl.nets().size()) throw UnknownNet(std::to_string(r));
    if (cone.insert(r).second) stack.push_back(r);
  }
  while (!stack.empty()) {
    NetIndex n = stack.back();
    stack.pop_back();
    std::ptrdiff_t d = nl.driver_gate(n);
    if (d < 0) continue;
    for (NetIndex in : nl.gates()[static_cast<std::size_t>(d)].inputs)
      if (cone.insert(in).second) stack.push_back(in);
  }
  return cone;
}

// Forward dual: all nets combinationally reachable from any root.
// DFF D pins are not traversed through (the DFF gate is sequential).
inline NetSet fanout_cone(const Netlist& nl, const NetSet& roots) {
  NetSet cone;
  std::vector<NetIndex> stack;
  for (NetIndex r : roots) {
    if (r >= nl.nets().size()) throw UnknownNet(std::to_string(r));
    if (cone.insert(r).second) stack.push_back(r);
  }
  while (!stack.empty()) {
    NetIndex n = stack.back();
    stack.pop_back();
    for (std::size_t gi : nl.reader_gates(n)) {
      NetIndex out = nl.gates()[gi].output;
      if (cone.insert(out).second) stack.push_back(out);
    }
  }
  return cone;
}

inline NetSet resolve_nets(const Netlist& nl,
                           const std::vector<std::string>& names) {
  NetSet out;
  for (const auto& name : names) out.insert(nl.net_index(name));
  return out;
}

}  // namespace ftmea
