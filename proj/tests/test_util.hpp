#pragma once

// Shared helpers for the test suites: fixture loading, a seeded random
// bench-circuit generator, and an independent cone oracle that works on
// the raw bench text (never on the Netlist class it is used to check).

#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace testutil {

inline std::string read_fixture(const std::string& rel) {
  std::string path = std::string(FTMEA_FIXTURE_DIR) + "/" + rel;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Random combinational bench circuit: every gate reads earlier nets, so
// the result is a DAG by construction. Sink nets become OUTPUTs.
inline std::string random_bench(std::mt19937& rng, int n_inputs, int n_gates) {
  static const char* kinds[] = {"AND", "OR", "NAND", "NOR",
                                "XOR", "XNOR", "NOT", "BUFF"};
  std::vector<std::string> nets;
  std::string text;
  for (int i = 0; i < n_inputs; ++i) {
    nets.push_back("in" + std::to_string(i));
    text += "INPUT(" + nets.back() + ")\n";
  }
  std::vector<std::string> body;
  std::set<std::string> used;
  for (int g = 0; g < n_gates; ++g) {
    std::string kind = kinds[rng() % 8];
    int arity = (kind == "NOT" || kind == "BUFF") ? 1 : 2 + int(rng() % 2);
    std::string out = "n" + std::to_string(g);
    std::string line = out + " = " + kind + "(";
    for (int a = 0; a < arity; ++a) {
      const std::string& in = nets[rng() % nets.size()];
      used.insert(in);
      if (a) line += ", ";
      line += in;
    }
    line += ")";
    body.push_back(line);
    nets.push_back(out);
  }
  for (const auto& n : nets)
    if (!used.count(n)) text += "OUTPUT(" + n + ")\n";
  for (const auto& l : body) text += l + "\n";
  return text;
}

// --- independent cone oracle -------------------------------------------

struct TextCircuit {
  // gate output -> inputs, combinational gates only (DFF cut)
  std::map<std::string, std::vector<std::string>> fanin;
  std::map<std::string, std::vector<std::string>> fanout;
};

inline TextCircuit parse_text_circuit(const std::string& bench) {
  TextCircuit c;
  std::istringstream in(bench);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string out = trim(line.substr(0, eq));
    std::string rhs = trim(line.substr(eq + 1));
    auto open = rhs.find('(');
    std::string kind = trim(rhs.substr(0, open));
    if (kind == "DFF") continue;  // sequential boundary
    std::string args = rhs.substr(open + 1, rhs.rfind(')') - open - 1);
    std::istringstream as(args);
    std::string tok;
    while (std::getline(as, tok, ',')) {
      tok = trim(tok);
      c.fanin[out].push_back(tok);
      c.fanout[tok].push_back(out);
    }
  }
  return c;
}

inline std::set<std::string> reach(
    const std::map<std::string, std::vector<std::string>>& edges,
    const std::set<std::string>& roots) {
  std::set<std::string> seen = roots;
  std::vector<std::string> stack(roots.begin(), roots.end());
  while (!stack.empty()) {
    std::string n = stack.back();
    stack.pop_back();
    auto it = edges.find(n);
    if (it == edges.end()) continue;
    for (const auto& next : it->second)
      if (seen.insert(next).second) stack.push_back(next);
  }
  return seen;
}

inline std::set<std::string> oracle_fanin(const std::string& bench,
                                          const std::set<std::string>& roots) {
  return reach(parse_text_circuit(bench).fanin, roots);
}

inline std::set<std::string> oracle_fanout(const std::string& bench,
                                           const std::set<std::string>& roots) {
  return reach(parse_text_circuit(bench).fanout, roots);
}

}  // namespace testutil
