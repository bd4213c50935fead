#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ftmea/fault_sim.hpp"
#include "ftmea/netlist.hpp"
#include "test_util.hpp"

using namespace ftmea;

namespace {

SimVector vector_for(const Netlist& nl, std::uint64_t bits) {
  SimVector v;
  for (std::size_t i = 0; i < nl.pseudo_inputs().size(); ++i)
    v.assignment[nl.pseudo_inputs()[i]] = (bits >> i) & 1;
  return v;
}

std::vector<FaultSite> all_sites(const Netlist& nl) {
  std::vector<FaultSite> sites;
  for (NetIndex n = 0; n < nl.nets().size(); ++n) {
    sites.push_back({n, StuckPolarity::StuckAt0});
    sites.push_back({n, StuckPolarity::StuckAt1});
  }
  return sites;
}

}  // namespace

TEST_CASE("simulate follows the gate truth tables") {
  Netlist nl = parse_bench(testutil::read_fixture("bench/nandnot.bench"));
  SimVector v;
  v.assignment[nl.net_index("a")] = true;
  v.assignment[nl.net_index("b")] = true;
  auto values = simulate(nl, v);
  CHECK(values.at("g1") == false);  // NAND(1,1)
  CHECK(values.at("y") == true);    // NOT(0)

  // repeated calls identical
  CHECK(simulate(nl, v) == values);
}

TEST_CASE("all-zeros vector on an AND tree gives 0 at the root") {
  Netlist nl = parse_bench(
      "INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(d)\nOUTPUT(r)\n"
      "l = AND(a, b)\nr0 = AND(c, d)\nr = AND(l, r0)\n");
  auto values = simulate(nl, vector_for(nl, 0));
  CHECK(values.at("r") == false);
}

TEST_CASE("incomplete vectors are rejected") {
  Netlist nl = parse_bench(testutil::read_fixture("bench/nandnot.bench"));
  SimVector v;
  v.assignment[nl.net_index("a")] = true;
  CHECK_THROWS_AS(simulate(nl, v), IncompleteVector);
}

TEST_CASE("stuck-at on the output net itself is affecting") {
  Netlist nl = parse_bench(testutil::read_fixture("bench/nandnot.bench"));
  NetIndex y = nl.net_index("y");
  auto res = fault_campaign(nl, {y}, {{y, StuckPolarity::StuckAt0}}, {});
  CHECK(res.affecting_sites.size() == 1);
  CHECK(res.vectors_evaluated == 4);
}

TEST_CASE("faults outside the monitored fanin cone never affect") {
  Netlist nl = parse_bench(
      "INPUT(a)\nINPUT(b)\nOUTPUT(x)\nOUTPUT(y)\nx = NOT(a)\ny = NOT(b)\n");
  NetSet monitored{nl.net_index("x")};
  auto res = fault_campaign(nl, monitored, all_sites(nl), {});
  auto cone = fanin_cone(nl, monitored);
  for (const FaultSite& f : res.affecting_sites) CHECK(cone.count(f.net) == 1);
  // b and y are outside the cone
  for (const FaultSite& f : res.affecting_sites) {
    CHECK(f.net != nl.net_index("b"));
    CHECK(f.net != nl.net_index("y"));
  }
}

TEST_CASE("c17 exhaustive campaign: every site is affecting at the POs") {
  Netlist nl = parse_bench(testutil::read_fixture("bench/c17.bench"));
  NetSet outs{nl.net_index("G22"), nl.net_index("G23")};
  auto res = fault_campaign(nl, outs, all_sites(nl), {});
  CHECK(res.vectors_evaluated == 32);
  // c17 is fully testable: brute force confirms every stuck-at is detected
  CHECK(res.affecting_sites.size() == all_sites(nl).size());
}

TEST_CASE("zero-site campaign equals plain simulation") {
  Netlist nl = parse_bench(testutil::read_fixture("bench/c17.bench"));
  NetSet outs{nl.net_index("G22")};
  auto res = fault_campaign(nl, outs, {}, {});
  CHECK(res.affecting_sites.empty());
}

TEST_CASE("exhaustive mode refuses more than 16 pseudo inputs") {
  std::string text;
  for (int i = 0; i < 17; ++i) text += "INPUT(i" + std::to_string(i) + ")\n";
  text += "OUTPUT(y)\ny = AND(i0, i1)\n";
  Netlist nl = parse_bench(text);
  CHECK_THROWS_AS(fault_campaign(nl, {nl.net_index("y")}, all_sites(nl), {}),
                  ExhaustiveLimitExceeded);
}

TEST_CASE("seeded campaigns are reproducible and record the seed") {
  std::string text;
  for (int i = 0; i < 20; ++i) text += "INPUT(i" + std::to_string(i) + ")\n";
  text += "OUTPUT(y)\ny = AND(i0, i1)\n";
  Netlist nl = parse_bench(text);
  VectorSource src{VectorSource::Mode::Seeded, 99, 256};
  auto a = fault_campaign(nl, {nl.net_index("y")}, all_sites(nl), src);
  auto b = fault_campaign(nl, {nl.net_index("y")}, all_sites(nl), src);
  CHECK(a.affecting_sites == b.affecting_sites);
  CHECK(a.vectors_evaluated == 256);
  REQUIRE(a.seed.has_value());
  CHECK(*a.seed == 99);
}

TEST_CASE("attack over all PIs toggles every non-constant net") {
  Netlist nl = parse_bench(testutil::read_fixture("bench/c17.bench"));
  NetSet all_pis(nl.primary_inputs().begin(), nl.primary_inputs().end());
  auto res = attack_toggle_campaign(nl, all_pis, {});

  // oracle: a net is non-constant iff both values appear over all vectors
  for (NetIndex n = 0; n < nl.nets().size(); ++n) {
    bool seen0 = false, seen1 = false;
    for (std::uint64_t bits = 0; bits < 32; ++bits) {
      auto values = simulate(nl, vector_for(nl, bits));
      (values.at(nl.net_name(n)) ? seen1 : seen0) = true;
    }
    CHECK(res.toggleable_nets.count(n) == std::size_t(seen0 && seen1));
  }
}

TEST_CASE("empty attack set toggles nothing") {
  Netlist nl = parse_bench(testutil::read_fixture("bench/c17.bench"));
  auto res = attack_toggle_campaign(nl, {}, {});
  CHECK(res.toggleable_nets.empty());
}

TEST_CASE("toggleable nets lie inside the attack fanout cone") {
  Netlist nl = parse_bench(testutil::read_fixture("bench/c17.bench"));
  NetSet attack{nl.net_index("G1")};
  auto res = attack_toggle_campaign(nl, attack, {});
  auto cone = fanout_cone(nl, attack);
  for (NetIndex n : res.toggleable_nets) CHECK(cone.count(n) == 1);
  // G1 itself and G10 are attacker-visible
  CHECK(res.toggleable_nets.count(nl.net_index("G1")) == 1);
  CHECK(res.toggleable_nets.count(nl.net_index("G10")) == 1);
}

TEST_CASE("attack inputs must be pseudo primary inputs") {
  Netlist nl = parse_bench(testutil::read_fixture("bench/c17.bench"));
  CHECK_THROWS_AS(attack_toggle_campaign(nl, {nl.net_index("G10")}, {}),
                  UnknownNet);
}

TEST_CASE("DFF Q pins participate as pseudo inputs") {
  Netlist nl = parse_bench(testutil::read_fixture("bench/reg_base.bench"));
  CHECK(nl.pseudo_inputs().size() == 3);  // wdata, wen, q
  SimVector v;
  v.assignment[nl.net_index("wdata")] = true;
  v.assignment[nl.net_index("wen")] = true;
  v.assignment[nl.net_index("q")] = false;
  auto values = simulate(nl, v);
  CHECK(values.at("d") == true);  // write path wins
}

TEST_CASE("joint activation of two sites (multi-bit upset)") {
  // parity masks an even number of flips on its own tree
  Netlist nl = parse_bench(
      "INPUT(a)\nINPUT(b)\nOUTPUT(p)\np = XOR(a, b)\n");
  NetIndex a = nl.net_index("a"), b = nl.net_index("b");
  NetSet monitored{nl.net_index("p")};
  // single stuck-at-1 is visible
  CHECK(joint_fault_affects(nl, monitored, {{a, StuckPolarity::StuckAt1}}, {}));
  // both inputs stuck-at-1 is still visible whenever a != b originally,
  // but stuck values equal to the applied vector are silent
  CHECK(joint_fault_affects(
      nl, monitored,
      {{a, StuckPolarity::StuckAt1}, {b, StuckPolarity::StuckAt1}}, {}));
}
