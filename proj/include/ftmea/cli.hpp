#pragma once

// Command-line orchestration: analyze, derive-cdcf, scoap, coi, faultsim,
// compare. Exit codes: 0 success, 1 validation error, 2 I/O error.
// All report writes are atomic (temp file + rename) and byte-deterministic
// for identical inputs and seed.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#if !defined(_WIN32)
#include <unistd.h>
#endif

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ftmea/correlation.hpp"
#include "ftmea/errors.hpp"
#include "ftmea/fault_sim.hpp"
#include "ftmea/netlist.hpp"
#include "ftmea/report.hpp"
#include "ftmea/risk_model.hpp"
#include "ftmea/rpn.hpp"
#include "ftmea/scoap.hpp"
#include "ftmea/structural_cdcf.hpp"

namespace ftmea::cli {

// "error:" prefix, red on a tty unless FTMEA_NO_COLOR is set
inline std::string error_prefix() {
#if defined(_WIN32)
  return "error: ";
#else
  if (std::getenv("FTMEA_NO_COLOR") || !isatty(2)) return "error: ";
  return "\033[31merror:\033[0m ";
#endif
}

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename to '" + path.string() + "' failed");
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ';' || c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Item-anchors JSON: {"<item_id>": {"effect_nets": [...],
//   "alarm_nets": [...], "attack_input_nets": [...]}}
inline std::map<std::string, NetAnchors> parse_item_anchors(
    const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError(std::string("anchors JSON: ") + e.what());
  }
  std::map<std::string, NetAnchors> out;
  for (const auto& [item_id, a] : j.items()) {
    NetAnchors na;
    if (a.contains("effect_nets"))
      na.effect_nets = a.at("effect_nets").get<std::vector<std::string>>();
    if (a.contains("alarm_nets"))
      na.alarm_nets = a.at("alarm_nets").get<std::vector<std::string>>();
    if (a.contains("attack_input_nets"))
      na.attack_input_nets =
          a.at("attack_input_nets").get<std::vector<std::string>>();
    out[item_id] = std::move(na);
  }
  return out;
}

struct RunConfig {
  std::string worksheet_path, measures_path, applicability_path;
  std::string cdcf_path, netlist_path, variant_netlist_path, anchors_path;
  std::string risk_matrix_path;
  std::string output_dir;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
};

namespace detail {

inline Worksheet load_worksheet(const RunConfig& cfg) {
  std::string measures = cfg.measures_path.empty()
                             ? "id,kind,domain,description,effect_nets,alarm_nets,attack_input_nets\n"
                             : read_file(cfg.measures_path);
  std::string applicability = cfg.applicability_path.empty()
                                  ? "item_id,measure_id\n"
                                  : read_file(cfg.applicability_path);
  return parse_worksheet(read_file(cfg.worksheet_path), measures, applicability);
}

inline CdcfBundle derive_if_requested(const RunConfig& cfg, const Worksheet& ws,
                                      const Netlist& nl,
                                      const std::optional<Netlist>& variant,
                                      DerivationEvidence* evidence) {
  DerivationRequest req;
  req.netlist = &nl;
  if (variant) req.variant_netlist = &*variant;
  if (!cfg.anchors_path.empty())
    req.item_anchors = parse_item_anchors(read_file(cfg.anchors_path));
  return derive_bundle(req, ws, evidence);
}

struct RankedReport {
  std::vector<RpnResult> ranked;
  // item_id -> (baseline position, corrected position), 1-based
  std::map<std::string, std::pair<int, int>> positions;
};

inline RankedReport build_report(const Worksheet& ws, const CdcfBundle& bundle) {
  RankedReport rep;
  auto results = compute_rpn(ws, bundle);
  rep.ranked = rank(results);

  // baseline order: same tie-breaks applied to the uncorrected numbers
  auto baseline = results;
  std::sort(baseline.begin(), baseline.end(),
            [](const RpnResult& a, const RpnResult& b) {
              if (a.rpn_base != b.rpn_base) return a.rpn_base > b.rpn_base;
              if (a.severity != b.severity) return a.severity > b.severity;
              if (a.o_base != b.o_base) return a.o_base > b.o_base;
              return a.item_id < b.item_id;
            });
  for (std::size_t i = 0; i < baseline.size(); ++i)
    rep.positions[baseline[i].item_id].first = static_cast<int>(i) + 1;
  for (std::size_t i = 0; i < rep.ranked.size(); ++i)
    rep.positions[rep.ranked[i].item_id].second = static_cast<int>(i) + 1;
  return rep;
}

inline std::string render_rank_changes(const RankedReport& rep) {
  std::string out = "item_id,rank_base,rank_corr,rank_delta\n";
  for (const RpnResult& r : rep.ranked) {
    auto [base_pos, corr_pos] = rep.positions.at(r.item_id);
    out += csv::render_row({r.item_id, std::to_string(base_pos),
                            std::to_string(corr_pos),
                            std::to_string(base_pos - corr_pos)});
  }
  return out;
}

}  // namespace detail

inline int cmd_analyze(const RunConfig& cfg) {
  Worksheet ws = detail::load_worksheet(cfg);

  CdcfBundle configured;
  configured.worksheet_tag = worksheet_tag(ws);
  if (!cfg.cdcf_path.empty())
    configured = load_cdcf(read_file(cfg.cdcf_path), ws);

  CdcfBundle effective = configured;
  if (!cfg.netlist_path.empty()) {
    Netlist nl = parse_bench(read_file(cfg.netlist_path));
    std::optional<Netlist> variant;
    if (!cfg.variant_netlist_path.empty())
      variant = parse_bench(read_file(cfg.variant_netlist_path));
    CdcfBundle derived =
        detail::derive_if_requested(cfg, ws, nl, variant, nullptr);
    effective = merge_bundles(configured, derived);
  }

  if (!cfg.risk_matrix_path.empty())
    load_risk_matrix(read_file(cfg.risk_matrix_path));  // validate only

  auto rep = detail::build_report(ws, effective);

  std::filesystem::path out_dir = cfg.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  // render everything first so a failure never leaves partial reports
  std::string report_text;
  std::string report_name;
  if (cfg.format == "markdown") {
    report_text = render_rpn_markdown(rep.ranked);
    report_name = "rpn_report.md";
  } else if (cfg.format == "json") {
    report_text = rpn_to_json(rep.ranked).dump(2) + "\n";
    report_name = "rpn_report.json";
  } else {
    report_text = render_rpn_csv(rep.ranked);
    report_name = "rpn_report.csv";
  }
  std::string cdcf_text = render_cdcf_json(effective);
  std::string changes_text = detail::render_rank_changes(rep);

  write_file_atomic(out_dir / report_name, report_text);
  write_file_atomic(out_dir / "cdcf_effective.json", cdcf_text);
  write_file_atomic(out_dir / "rank_changes.csv", changes_text);
  return 0;
}

inline int cmd_derive_cdcf(const RunConfig& cfg) {
  Worksheet ws = detail::load_worksheet(cfg);
  Netlist nl = parse_bench(read_file(cfg.netlist_path));
  std::optional<Netlist> variant;
  if (!cfg.variant_netlist_path.empty())
    variant = parse_bench(read_file(cfg.variant_netlist_path));

  DerivationEvidence evidence;
  CdcfBundle derived =
      detail::derive_if_requested(cfg, ws, nl, variant, &evidence);

  std::filesystem::path out_dir = cfg.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  write_file_atomic(out_dir / "cdcf_derived.json",
                    render_cdcf_plain_json(derived));
  write_file_atomic(out_dir / "cdcf_evidence.json",
                    render_evidence_json(evidence));
  return 0;
}

inline int cmd_scoap(const RunConfig& cfg, std::ostream& out) {
  Netlist nl = parse_bench(read_file(cfg.netlist_path));
  std::string csv_text = render_scoap_csv(nl, compute_scoap(nl));
  if (cfg.output_dir.empty()) {
    out << csv_text;
  } else {
    std::filesystem::path dir = cfg.output_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    write_file_atomic(dir / "scoap.csv", csv_text);
  }
  return 0;
}

inline int cmd_coi(const RunConfig& cfg, const std::vector<std::string>& roots,
                   const std::string& direction, std::ostream& out) {
  Netlist nl = parse_bench(read_file(cfg.netlist_path));
  NetSet root_set = resolve_nets(nl, roots);
  NetSet cone = direction == "fanout" ? fanout_cone(nl, root_set)
                                      : fanin_cone(nl, root_set);
  std::vector<std::string> names;
  for (NetIndex n : cone) names.push_back(nl.net_name(n));
  std::sort(names.begin(), names.end());
  std::string text;
  for (const auto& name : names) text += name + "\n";
  if (cfg.output_dir.empty()) {
    out << text;
  } else {
    std::filesystem::path dir = cfg.output_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    write_file_atomic(dir / "coi.txt", text);
  }
  return 0;
}

inline int cmd_faultsim(const RunConfig& cfg,
                        const std::vector<std::string>& monitored,
                        const std::vector<std::string>& attack_inputs,
                        std::size_t vector_count, std::ostream& out) {
  Netlist nl = parse_bench(read_file(cfg.netlist_path));

  NetSet monitored_set;
  if (monitored.empty())
    monitored_set =
        NetSet(nl.pseudo_outputs().begin(), nl.pseudo_outputs().end());
  else
    monitored_set = resolve_nets(nl, monitored);

  VectorSource src;
  if (nl.pseudo_inputs().size() > kExhaustiveLimit || cfg.seed) {
    src.mode = VectorSource::Mode::Seeded;
    src.seed = cfg.seed.value_or(0);
    src.count = vector_count ? vector_count : 4096;
  }

  // both stuck-at polarities at every net
  std::vector<FaultSite> sites;
  for (NetIndex n = 0; n < nl.nets().size(); ++n) {
    sites.push_back({n, StuckPolarity::StuckAt0});
    sites.push_back({n, StuckPolarity::StuckAt1});
  }

  CampaignResult fault_res = fault_campaign(nl, monitored_set, sites, src);

  nlohmann::ordered_json j;
  nlohmann::ordered_json affecting = nlohmann::ordered_json::array();
  for (const FaultSite& f : fault_res.affecting_sites)
    affecting.push_back(nl.net_name(f.net) + (f.polarity == StuckPolarity::StuckAt0
                                                  ? "/0"
                                                  : "/1"));
  j["affecting"] = std::move(affecting);

  nlohmann::ordered_json toggleable = nlohmann::ordered_json::array();
  std::size_t vectors = fault_res.vectors_evaluated;
  if (!attack_inputs.empty()) {
    CampaignResult atk =
        attack_toggle_campaign(nl, resolve_nets(nl, attack_inputs), src);
    std::vector<std::string> names;
    for (NetIndex n : atk.toggleable_nets) names.push_back(nl.net_name(n));
    std::sort(names.begin(), names.end());
    for (const auto& name : names) toggleable.push_back(name);
    vectors += atk.vectors_evaluated;
  }
  j["toggleable"] = std::move(toggleable);
  j["vectors_evaluated"] = vectors;
  if (fault_res.seed) j["seed"] = *fault_res.seed;
  else j["seed"] = nullptr;

  std::string text = j.dump(2) + "\n";
  if (cfg.output_dir.empty()) {
    out << text;
  } else {
    std::filesystem::path dir = cfg.output_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    write_file_atomic(dir / "faultsim.json", text);
  }
  return 0;
}

inline int cmd_compare(const std::string& report_a, const std::string& report_b,
                       const std::string& out_path, std::ostream& out) {
  auto load_report = [](const std::string& path) {
    auto rows = csv::parse(read_file(path));
    if (rows.empty()) throw MalformedCsv(path + ": empty report");
    // item_id -> (rank position, RPN_corr)
    std::map<std::string, std::pair<int, int>> by_id;
    std::vector<std::string> order;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() < 9)
        throw MalformedCsv(path + ": row " + std::to_string(r + 1));
      by_id[rows[r][0]] = {static_cast<int>(r),
                           std::atoi(rows[r][8].c_str())};
      order.push_back(rows[r][0]);
    }
    return std::make_pair(by_id, order);
  };
  auto [a, order_a] = load_report(report_a);
  auto [b, order_b] = load_report(report_b);

  std::string text = "item_id,rank_delta,rpn_delta\n";
  for (const std::string& id : order_a) {
    auto it = b.find(id);
    if (it == b.end()) {
      text += csv::render_row({id, "removed", ""});
      continue;
    }
    text += csv::render_row(
        {id, std::to_string(it->second.first - a[id].first),
         std::to_string(it->second.second - a[id].second)});
  }
  for (const std::string& id : order_b)
    if (!a.count(id)) text += csv::render_row({id, "added", ""});

  if (out_path.empty()) out << text;
  else write_file_atomic(out_path, text);
  return 0;
}

inline int run(const std::vector<std::string>& args,
               std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"FTMEA integrated safety/cybersecurity risk analysis"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::vector<std::string> roots, monitored, attack_inputs;
  std::string direction = "fanin";
  std::string compare_a, compare_b, compare_out;
  std::size_t vector_count = 0;
  std::uint64_t seed_value = 0;
  bool seed_given = false;

  auto add_worksheet_opts = [&](CLI::App* sub, bool required) {
    auto* w = sub->add_option("--worksheet", cfg.worksheet_path, "items CSV");
    sub->add_option("--measures", cfg.measures_path, "measures CSV");
    sub->add_option("--applicability", cfg.applicability_path,
                    "applicability CSV");
    if (required) w->required();
  };
  auto add_netlist_opts = [&](CLI::App* sub, bool required) {
    auto* n = sub->add_option("--netlist", cfg.netlist_path, "bench netlist");
    sub->add_option("--variant-netlist", cfg.variant_netlist_path,
                    "netlist with prevention measure applied");
    sub->add_option("--anchors", cfg.anchors_path, "item anchors JSON");
    if (required) n->required();
  };

  auto* analyze = app.add_subcommand("analyze", "full FTMEA flow");
  add_worksheet_opts(analyze, true);
  add_netlist_opts(analyze, false);
  analyze->add_option("--cdcf", cfg.cdcf_path, "configured CDCF JSON");
  analyze->add_option("--risk-matrix", cfg.risk_matrix_path,
                      "unified risk matrix JSON");
  analyze->add_option("--out", cfg.output_dir, "output directory")->required();
  analyze->add_option("--format", cfg.format, "csv|markdown|json")
      ->check(CLI::IsMember({"csv", "markdown", "json"}));

  auto* derive = app.add_subcommand("derive-cdcf", "structural CDCF derivation");
  add_worksheet_opts(derive, true);
  add_netlist_opts(derive, true);
  derive->add_option("--out", cfg.output_dir, "output directory")->required();

  auto* scoap_cmd = app.add_subcommand("scoap", "SCOAP testability CSV");
  scoap_cmd->add_option("--netlist", cfg.netlist_path, "bench netlist")
      ->required();
  scoap_cmd->add_option("--out", cfg.output_dir, "output directory");

  auto* coi_cmd = app.add_subcommand("coi", "cone of influence query");
  coi_cmd->add_option("--netlist", cfg.netlist_path, "bench netlist")
      ->required();
  coi_cmd->add_option("--roots", roots, "root nets (';'-separated or repeated)")
      ->required()
      ->delimiter(';');
  coi_cmd->add_option("--direction", direction, "fanin|fanout")
      ->check(CLI::IsMember({"fanin", "fanout"}));
  coi_cmd->add_option("--out", cfg.output_dir, "output directory");

  auto* faultsim_cmd =
      app.add_subcommand("faultsim", "stuck-at / attack-toggle campaigns");
  faultsim_cmd->add_option("--netlist", cfg.netlist_path, "bench netlist")
      ->required();
  faultsim_cmd->add_option("--monitored", monitored, "monitored nets")
      ->delimiter(';');
  faultsim_cmd->add_option("--attack-inputs", attack_inputs, "attack entry nets")
      ->delimiter(';');
  faultsim_cmd->add_option("--seed", seed_value, "seed for sampled campaigns");
  faultsim_cmd->add_option("--vectors", vector_count, "sampled vector count");
  faultsim_cmd->add_option("--out", cfg.output_dir, "output directory");

  auto* compare_cmd = app.add_subcommand("compare", "diff two RPN reports");
  compare_cmd->add_option("baseline", compare_a, "baseline report CSV")
      ->required();
  compare_cmd->add_option("other", compare_b, "report CSV to compare")
      ->required();
  compare_cmd->add_option("--out", compare_out, "output file");

  faultsim_cmd->callback([&] {
    if (faultsim_cmd->count("--seed")) seed_given = true;
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << error_prefix() << e.what() << "\n";
    return 1;
  }
  if (seed_given) cfg.seed = seed_value;

  try {
    if (analyze->parsed()) return cmd_analyze(cfg);
    if (derive->parsed()) return cmd_derive_cdcf(cfg);
    if (scoap_cmd->parsed()) return cmd_scoap(cfg, out);
    if (coi_cmd->parsed()) return cmd_coi(cfg, roots, direction, out);
    if (faultsim_cmd->parsed())
      return cmd_faultsim(cfg, monitored, attack_inputs, vector_count, out);
    if (compare_cmd->parsed())
      return cmd_compare(compare_a, compare_b, compare_out, out);
  } catch (const IoError& e) {
    err << error_prefix() << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << error_prefix() << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace ftmea::cli
