// cicsim: run, fuzz, compare and amplify checkpointing protocols on
// scripted or random computations, and draw their space-time diagrams.
//
// Exit status: 0 clean, 1 oracle findings (with --check), 2 usage error,
// 3 internal error.

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cic/campaign.hpp"
#include "cic/fixtures.hpp"
#include "cic/report.hpp"

namespace {

using namespace cic;

constexpr int kClean = 0, kFindings = 1, kUsage = 2, kInternal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Loaded {
  std::string id;
  Scenario scenario;
};

// A built-in name, "suite:K" / "suite:K:BASE" (K-th scenario of the fuzz
// suite), or a path to a scenario file.
Loaded load_scenario(const std::string& ref) {
  if (ref.rfind("suite:", 0) == 0) {
    std::uint64_t k = 0, base = 0;
    char colon = 0;
    std::istringstream in(ref.substr(6));
    if (!(in >> k)) throw UsageError("bad suite reference '" + ref + "'");
    if (in >> colon && !(colon == ':' && in >> base)) throw UsageError("bad suite reference '" + ref + "'");
    return {ref, random_scenario(fuzz_suite_params(k, base))};
  }
  const auto& names = fixture_names();
  if (std::find(names.begin(), names.end(), ref) != names.end()) return {ref, builtin(ref).scenario};
  if (!std::filesystem::exists(ref)) builtin(ref);  // throws, listing the built-ins
  std::ifstream in(ref);
  if (!in) throw UsageError("cannot read '" + ref + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return {ref, parse_scenario(buf.str())};
}

TakenIndex parse_taken(const std::string& s) {
  if (s == "witness") return TakenIndex::witness;
  if (s == "receiver") return TakenIndex::receiver;
  throw UsageError("unknown taken index '" + s + "' (witness|receiver)");
}

std::vector<ProtocolConfig> parse_protocol_list(const std::vector<std::string>& names, TakenIndex taken) {
  std::vector<ProtocolConfig> out;
  for (const auto& n : names) {
    if (n == "all") {
      for (Protocol p : all_protocols()) out.push_back({p, taken});
      continue;
    }
    std::stringstream ss(n);
    std::string part;
    while (std::getline(ss, part, ','))
      if (!part.empty()) out.push_back({parse_protocol(part), taken});
  }
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out || !(out << text)) throw UsageError("cannot write '" + path + "'");
}

int cmd_run(const std::string& ref, const std::string& protocol, TakenIndex taken, bool json, bool check) {
  Loaded l = load_scenario(ref);
  ProtocolConfig c{parse_protocol(protocol), taken};
  AnnotatedTrace run = run_scenario(l.scenario, c);
  OracleReport r = analyze(run.trace);
  if (json) std::cout << run_report(l.id, l.scenario, run, r).dump(2) << "\n";
  else std::cout << text_report(l.id, l.scenario, run, r);
  return check && !r.clean() ? kFindings : kClean;
}

int cmd_compare(const std::string& ref, const std::vector<ProtocolConfig>& configs, bool json, bool check) {
  Loaded l = load_scenario(ref);
  auto rows = compare_runs(l.scenario, configs);
  bool findings = false;
  if (json) {
    Json j;
    j["scenario"] = {{"id", l.id}, {"hash", scenario_hash(l.scenario)}};
    j["rows"] = Json::array();
    for (const auto& row : rows)
      j["rows"].push_back({{"protocol", protocol_name(row.config.protocol)},
                           {"forced", row.forced},
                           {"checkpoints", row.checkpoints},
                           {"useless", row.useless},
                           {"z_consistent", row.z_consistent}});
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "scenario " << l.id << " (" << scenario_hash(l.scenario) << ")\n";
    std::cout << std::left << std::setw(12) << "protocol" << std::right << std::setw(8) << "forced" << std::setw(13)
              << "checkpoints" << std::setw(9) << "useless" << "  z-consistent\n";
    for (const auto& row : rows)
      std::cout << std::left << std::setw(12) << protocol_name(row.config.protocol) << std::right << std::setw(8)
                << row.forced << std::setw(13) << row.checkpoints << std::setw(9) << row.useless << "  "
                << (row.z_consistent ? "yes" : "no") << "\n";
  }
  for (const auto& row : rows) findings |= row.useless > 0 || !row.z_consistent;
  return check && findings ? kFindings : kClean;
}

int cmd_amplify(const std::string& ref, const std::string& protocol, TakenIndex taken, const std::string& out,
                bool json, bool check) {
  Loaded l = load_scenario(ref);
  ProtocolConfig c{parse_protocol(protocol), taken};
  AmplifyResult a = amplify_violation(l.scenario, c);
  if (!a.amplified) {
    std::cerr << a.reason << "\n";
    return kClean;
  }
  const auto& v = *a.violation;
  std::cerr << "violation " << to_string(v.from.id()) << "(t=" << v.from.timestamp.value_or(0) << ") ~> "
            << to_string(v.to.id()) << "(t=" << v.to.timestamp.value_or(0) << "); inserted " << a.inserted_message
            << " from P" << v.to.process.value() << " to P" << v.from.process.value() << "\n";
  if (!out.empty()) write_output(out, serialize_scenario(a.scenario));
  const std::string id = l.id + "+" + a.inserted_message;
  if (json) std::cout << run_report(id, a.scenario, a.trace, a.report).dump(2) << "\n";
  else {
    if (out.empty()) std::cout << serialize_scenario(a.scenario) << "\n";
    std::cout << text_report(id, a.scenario, a.trace, a.report);
  }
  return check && !a.report.clean() ? kFindings : kClean;
}

int cmd_diagram(const std::string& ref, const std::string& protocol, TakenIndex taken, const std::string& format,
                const std::string& out) {
  Loaded l = load_scenario(ref);
  AnnotatedTrace run = run_scenario(l.scenario, ProtocolConfig{parse_protocol(protocol), taken});
  if (format == "ascii") write_output(out, ascii_diagram(run));
  else if (format == "svg") write_output(out, svg_diagram(run));
  else throw UsageError("unknown format '" + format + "' (ascii|svg)");
  return kClean;
}

struct FuzzOptions {
  std::vector<std::string> protocols;
  std::uint64_t runs = 1000;
  std::uint64_t seed = 0;
  int procs = 0;
  int events = 0;
  std::vector<double> p_ckpt;
  double p_send = -1;
  int max_in_flight = 0;
  std::size_t show = 20;
  bool json = false;
  bool check = false;
};

int cmd_fuzz(const FuzzOptions& o, TakenIndex taken) {
  auto configs = parse_protocol_list(o.protocols.empty() ? std::vector<std::string>{"all"} : o.protocols, taken);
  const bool custom = o.procs || o.events || !o.p_ckpt.empty() || o.p_send >= 0 || o.max_in_flight;
  ParamsFor params = suite_params(o.seed);
  if (custom) {
    FuzzParams p;
    if (o.procs) p.n = o.procs;
    if (o.events) p.events = o.events;
    if (!o.p_ckpt.empty()) p.p_ckpt = o.p_ckpt;
    if (o.p_send >= 0) p.p_send = o.p_send;
    if (o.max_in_flight) p.max_in_flight = o.max_in_flight;
    p.seed = o.seed;
    try {
      params = fixed_params(p);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  FuzzSummary sum = run_campaign(o.runs, params, configs);

  auto reproducer = [&](const FuzzFinding& f) {
    std::string proto(protocol_name(f.config.protocol));
    if (f.config.taken_index == TakenIndex::receiver) proto += " --taken-index receiver";
    if (custom) {
      std::ostringstream cmd;
      cmd << "cicsim fuzz " << proto << " 1 --seed " << f.seed;
      if (o.procs) cmd << " --procs " << o.procs;
      if (o.events) cmd << " --events " << o.events;
      for (double p : o.p_ckpt) cmd << " --p-ckpt " << p;
      if (o.p_send >= 0) cmd << " --p-send " << o.p_send;
      if (o.max_in_flight) cmd << " --max-in-flight " << o.max_in_flight;
      return cmd.str();
    }
    return "cicsim run suite:" + std::to_string(f.index) + (o.seed ? ":" + std::to_string(o.seed) : "") + " " + proto;
  };
  if (o.json) {
    Json j;
    j["runs"] = o.runs;
    j["base_seed"] = o.seed;
    j["params"] = custom ? "custom" : "suite";
    j["protocols"] = Json::array();
    for (std::size_t c = 0; c < configs.size(); ++c)
      j["protocols"].push_back({{"protocol", protocol_name(configs[c].protocol)},
                                {"forced", sum.totals[c].forced},
                                {"checkpoints", sum.totals[c].checkpoints},
                                {"findings", sum.totals[c].findings}});
    j["findings"] = Json::array();
    for (const auto& f : sum.findings)
      j["findings"].push_back({{"index", f.index},
                               {"seed", f.seed},
                               {"protocol", protocol_name(f.config.protocol)},
                               {"hash", f.hash},
                               {"useless", f.useless},
                               {"violations", f.violations},
                               {"reproduce", reproducer(f)}});
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << o.runs << " scenarios (" << (custom ? "custom parameters" : "standard suite") << ", base seed "
              << o.seed << ")\n";
    std::cout << std::left << std::setw(12) << "protocol" << std::right << std::setw(10) << "forced" << std::setw(13)
              << "checkpoints" << std::setw(10) << "findings" << "\n";
    for (std::size_t c = 0; c < configs.size(); ++c)
      std::cout << std::left << std::setw(12) << protocol_name(configs[c].protocol) << std::right << std::setw(10)
                << sum.totals[c].forced << std::setw(13) << sum.totals[c].checkpoints << std::setw(10)
                << sum.totals[c].findings << "\n";
    std::size_t shown = 0;
    for (const auto& f : sum.findings) {
      if (shown++ == o.show) {
        std::cout << "... " << sum.findings.size() - o.show << " more\n";
        break;
      }
      std::cout << protocol_name(f.config.protocol) << ": seed " << f.seed << " (" << f.hash << "): " << f.useless
                << " useless, " << f.violations << " violation(s); reproduce with " << reproducer(f) << "\n";
    }
  }
  return o.check && !sum.findings.empty() ? kFindings : kClean;
}

int cmd_list(bool json) {
  if (json) {
    Json j = Json::array();
    for (const auto& n : fixture_names()) {
      Fixture f = builtin(n);
      j.push_back({{"name", n}, {"summary", f.summary}, {"claims", f.claims.size()}});
    }
    std::cout << j.dump(2) << "\n";
    return kClean;
  }
  for (const auto& n : fixture_names()) std::cout << std::left << std::setw(26) << n << builtin(n).summary << "\n";
  return kClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cicsim: communication-induced checkpointing simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string taken_s = "witness";
  app.add_option("--taken-index", taken_s, "FINE taken[] index: witness or receiver")->default_val("witness");

  std::string scenario, protocol = "none", format = "ascii", out;
  bool json = false, check = false;
  std::vector<std::string> protocols;

  auto* run = app.add_subcommand("run", "replay a scenario under one protocol and analyze it");
  run->add_option("scenario", scenario, "built-in name, suite:K[:BASE], or scenario file")->required();
  run->add_option("protocol", protocol, "protocol (default none)");
  run->add_flag("--json", json, "print the JSON report");
  run->add_flag("--check", check, "exit 1 on useless checkpoints or Z-consistency violations");

  auto* compare = app.add_subcommand("compare", "run one scenario under several protocols");
  compare->add_option("scenario", scenario)->required();
  compare->add_option("--protocols", protocols, "protocol names (comma-separated or repeated; default all)");
  compare->add_flag("--json", json);
  compare->add_flag("--check", check);

  auto* amplify = app.add_subcommand("amplify", "insert a message turning a Z-consistency violation into a Z-cycle");
  amplify->add_option("scenario", scenario)->required();
  amplify->add_option("protocol", protocol)->required();
  amplify->add_option("--out", out, "write the amplified scenario here");
  amplify->add_flag("--json", json);
  amplify->add_flag("--check", check);

  auto* diagram = app.add_subcommand("diagram", "draw the space-time diagram of a run");
  diagram->add_option("scenario", scenario)->required();
  diagram->add_option("protocol", protocol);
  diagram->add_option("--format", format, "ascii or svg");
  diagram->add_option("--out", out, "output file (default stdout)");

  FuzzOptions fo;
  std::vector<std::string> fuzz_pos;
  auto* fuzz = app.add_subcommand("fuzz", "run seeded random scenarios against protocols");
  fuzz->add_option("args", fuzz_pos, "[protocol] [runs]");
  fuzz->add_option("--protocols", fo.protocols, "protocol names (default all)");
  fuzz->add_option("--runs", fo.runs, "number of scenarios");
  fuzz->add_option("--seed", fo.seed, "base seed");
  fuzz->add_option("--procs", fo.procs, "processes (custom parameters)");
  fuzz->add_option("--events", fo.events, "events per scenario (custom parameters)");
  fuzz->add_option("--p-ckpt", fo.p_ckpt, "basic checkpoint probability; repeat once per process for asymmetric rates");
  fuzz->add_option("--p-send", fo.p_send, "send probability");
  fuzz->add_option("--max-in-flight", fo.max_in_flight, "cap on undelivered messages");
  fuzz->add_option("--show", fo.show, "findings listed in text mode");
  fuzz->add_flag("--json", fo.json);
  fuzz->add_flag("--check", fo.check);

  auto* list = app.add_subcommand("list-scenarios", "list built-in scenarios");
  list->add_flag("--json", json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kClean : kUsage;
  }

  try {
    const TakenIndex taken = parse_taken(taken_s);
    if (*run) return cmd_run(scenario, protocol, taken, json, check);
    if (*compare)
      return cmd_compare(scenario, parse_protocol_list(protocols.empty() ? std::vector<std::string>{"all"} : protocols,
                                                       taken),
                         json, check);
    if (*amplify) return cmd_amplify(scenario, protocol, taken, out, json, check);
    if (*diagram) return cmd_diagram(scenario, protocol, taken, format, out);
    if (*fuzz) {
      for (const auto& a : fuzz_pos) {
        if (!a.empty() && std::all_of(a.begin(), a.end(), [](unsigned char ch) { return std::isdigit(ch); }))
          fo.runs = std::stoull(a);
        else fo.protocols.push_back(a);
      }
      return cmd_fuzz(fo, taken);
    }
    if (*list) return cmd_list(json);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownProtocol& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownFixture& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidScenario& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
