#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "ftmea/rpn.hpp"
#include "test_util.hpp"

using namespace ftmea;

TEST_CASE("corrected_occurrence per the floor-and-clamp rescaling") {
  CHECK(corrected_occurrence(5, 0.0) == 5);   // zero-correlation identity
  CHECK(corrected_occurrence(8, 1.0) == 1);   // v = 0, lower clamp
  CHECK(corrected_occurrence(6, 0.5) == 3);   // v = 3.0
  CHECK(corrected_occurrence(6, -0.8) == 10); // v = 10.8, upper clamp
  // v == 10 exactly: the >= 10 branch takes precedence
  CHECK(corrected_occurrence(5, -1.0) == 10);
  CHECK_THROWS_AS(corrected_occurrence(0, 0.0), RatingOutOfRange);
  CHECK_THROWS_AS(corrected_occurrence(11, 0.0), RatingOutOfRange);
}

TEST_CASE("corrected_detection has the identical contract") {
  CHECK(corrected_detection(7, 0.0) == 7);
  CHECK(corrected_detection(6, 0.25) == 4);  // v = 4.5, floored
  CHECK(corrected_detection(3, 2.0) == 1);   // v = -3, clamped
}

TEST_CASE("corrections stay integral and in bounds for any row sum") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> sum_dist(-3.0, 3.0);
  for (int trial = 0; trial < 10000; ++trial) {
    int base = 1 + int(rng() % 10);
    double s = sum_dist(rng);
    int v = corrected_occurrence(base, s);
    CHECK(v >= 1);
    CHECK(v <= 10);
  }
}

TEST_CASE("corrections are monotone non-increasing in the row sum") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> sum_dist(-3.0, 3.0);
  for (int trial = 0; trial < 2000; ++trial) {
    int base = 1 + int(rng() % 10);
    double s1 = sum_dist(rng), s2 = sum_dist(rng);
    if (s1 > s2) std::swap(s1, s2);
    CHECK(corrected_occurrence(base, s1) >= corrected_occurrence(base, s2));
    CHECK(corrected_detection(base, s1) >= corrected_detection(base, s2));
  }
}

namespace {

Worksheet one_item_worksheet(int s, int o, int d) {
  return parse_worksheet(
      "id,kind,description,effect_group,S,O,D\n"
      "FM1,FailureMode,x,G," + std::to_string(s) + "," + std::to_string(o) +
      "," + std::to_string(d) + "\n",
      "id,kind,domain,description,effect_nets,alarm_nets,attack_input_nets\n"
      "M_DET,Detection,Security,lock alarm,,alm,\n"
      "M_PRE,Prevention,Security,lock,,,\n",
      "item_id,measure_id\nFM1,M_DET\nFM1,M_PRE\n");
}

CdcfBundle bundle_for(const Worksheet& ws, double prevention,
                      double detection) {
  CdcfBundle b;
  b.worksheet_tag = worksheet_tag(ws);
  if (prevention != 0.0)
    b.prevention.entries[{"FM1", "M_PRE"}] = {prevention,
                                              CdcfSource::Configured, ""};
  if (detection != 0.0)
    b.detection.entries[{"FM1", "M_DET"}] = {detection, CdcfSource::Configured,
                                             ""};
  return b;
}

}  // namespace

TEST_CASE("compute_rpn with an empty bundle is the classical RPN") {
  Worksheet ws = one_item_worksheet(9, 4, 6);
  CdcfBundle empty;
  empty.worksheet_tag = worksheet_tag(ws);
  auto results = compute_rpn(ws, empty);
  REQUIRE(results.size() == 1);
  CHECK(results[0].rpn_base == 216);
  CHECK(results[0].rpn_corr == 216);
  CHECK(results[0].improvement_pct == 0.0);
}

TEST_CASE("full detection coverage drives D_corr to 1") {
  Worksheet ws = one_item_worksheet(9, 4, 6);
  auto results = compute_rpn(ws, bundle_for(ws, 0.0, 1.0));
  CHECK(results[0].d_corr == 1);
  CHECK(results[0].rpn_corr == 36);
  CHECK(results[0].improvement_pct == Catch::Approx(83.33).margin(0.005));
}

TEST_CASE("negative prevention influence raises occurrence") {
  Worksheet ws = one_item_worksheet(10, 1, 2);
  auto results = compute_rpn(ws, bundle_for(ws, -1.0, 0.0));
  CHECK(results[0].o_corr == 2);
  CHECK(results[0].rpn_corr == 40);
}

TEST_CASE("rpn_corr == S * O_corr * D_corr always") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    Worksheet ws = one_item_worksheet(1 + int(rng() % 10), 1 + int(rng() % 10),
                                      1 + int(rng() % 10));
    auto results = compute_rpn(ws, bundle_for(ws, coeff(rng), coeff(rng)));
    const auto& r = results[0];
    CHECK(r.rpn_corr == r.severity * r.o_corr * r.d_corr);
    CHECK(r.rpn_base == r.severity * r.o_base * r.d_base);
    CHECK(r.rpn_corr >= 1);
    CHECK(r.rpn_corr <= 1000);
    CHECK(r.severity == ws.items[0].severity);  // S never modified
  }
}

TEST_CASE("non-negative coefficients never increase the RPN") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> coeff(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    Worksheet ws = one_item_worksheet(1 + int(rng() % 10), 1 + int(rng() % 10),
                                      1 + int(rng() % 10));
    auto results = compute_rpn(ws, bundle_for(ws, coeff(rng), coeff(rng)));
    CHECK(results[0].rpn_corr <= results[0].rpn_base);
  }
}

namespace {

RpnResult make_result(const std::string& id, int rpn_corr, int severity,
                      int o_corr) {
  RpnResult r;
  r.item_id = id;
  r.rpn_corr = rpn_corr;
  r.severity = severity;
  r.o_corr = o_corr;
  return r;
}

}  // namespace

TEST_CASE("rank orders by corrected RPN with the stated tie-breaks") {
  auto ranked = rank({make_result("B", 36, 5, 3), make_result("A", 216, 5, 3)});
  CHECK(ranked[0].item_id == "A");
  CHECK(ranked[1].item_id == "B");

  ranked = rank({make_result("A", 100, 9, 3), make_result("B", 100, 10, 3)});
  CHECK(ranked[0].item_id == "B");

  ranked = rank({make_result("Z", 100, 5, 3), make_result("A", 100, 5, 3)});
  CHECK(ranked[0].item_id == "A");
}

TEST_CASE("rank is deterministic under input permutation") {
  std::mt19937 rng(23);
  std::vector<RpnResult> results;
  for (int i = 0; i < 20; ++i)
    results.push_back(make_result("I" + std::to_string(i), 1 + int(rng() % 5),
                                  1 + int(rng() % 3), 1 + int(rng() % 3)));
  auto expected = rank(results);
  for (int trial = 0; trial < 50; ++trial) {
    std::shuffle(results.begin(), results.end(), rng);
    CHECK(rank(results) == expected);
  }
}

TEST_CASE("default risk matrix is total, monotone, with forced corners") {
  RiskMatrixConfig cfg = default_risk_matrix();
  validate_risk_matrix(cfg);
  CHECK(unified_occurrence(cfg.occurrence_classes.front(),
                           cfg.feasibility_classes.front(), cfg) == 1);
  CHECK(unified_occurrence(cfg.occurrence_classes.back(),
                           cfg.feasibility_classes.back(), cfg) == 10);
  CHECK_THROWS_AS(unified_occurrence("MEDIUM-ISH", "low", cfg),
                  UnknownClassLabel);
}

TEST_CASE("risk matrix config round-trips from JSON and is validated") {
  auto cfg = load_risk_matrix(R"({
    "occurrence_classes": ["lo", "hi"],
    "feasibility_classes": ["lo", "hi"],
    "cells": [[1, 4], [5, 10]]
  })");
  CHECK(unified_occurrence("lo", "hi", cfg) == 4);

  CHECK_THROWS_AS(load_risk_matrix(R"({
    "occurrence_classes": ["lo", "hi"],
    "feasibility_classes": ["lo", "hi"],
    "cells": [[5, 4], [5, 10]]
  })"),
                  SyntaxError);  // not monotone
  CHECK_THROWS_AS(load_risk_matrix(R"({
    "occurrence_classes": ["lo"],
    "feasibility_classes": ["lo"],
    "cells": [[11]]
  })"),
                  RatingOutOfRange);
}
