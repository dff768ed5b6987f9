// Acceptance gate: one PASS/FAIL line per criterion; exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cic/campaign.hpp"
#include "cic/fixtures.hpp"
#include "random_inputs.hpp"

using namespace cic;

namespace {

CheckpointId C(int p, int x) { return {ProcessId{p}, x}; }

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << (detail.tellp() > 0 ? "; " : "") << what;
    }
  }
};

bool has_cycle(const OracleReport& r, CheckpointId c, const std::vector<std::string>& msgs) {
  for (const auto& z : r.z_cycles)
    if (z.checkpoint == c && z.witness.messages == msgs) return true;
  return false;
}

std::vector<std::vector<std::string>> cycles_at(const OracleReport& r, CheckpointId c) {
  std::vector<std::vector<std::string>> out;
  for (const auto& z : r.z_cycles)
    if (z.checkpoint == c) out.push_back(z.witness.messages);
  return out;
}

const Scenario& fixture(const std::string& name) {
  static std::map<std::string, Scenario> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, builtin(name).scenario).first;
  return it->second;
}

// Campaign over the standard suite shared by criteria 7, 8 and 11.
struct SuiteResult {
  static constexpr std::uint64_t kRuns = 10000;
  FuzzSummary summary;
  double seconds = 0;
  std::size_t encoding_mismatches = 0;
  std::uint64_t first_mismatch = 0;
  std::vector<std::uint64_t> reversals;  // scenarios where FI forced more than PI
  std::size_t asymmetric = 0;
};

const SuiteResult& suite() {
  static const SuiteResult result = [] {
    SuiteResult r;
    const std::vector<ProtocolConfig> configs{
        {Protocol::pi}, {Protocol::fi_clockv}, {Protocol::fi_greater}, {Protocol::lazy_fi}};
    std::vector<std::size_t> clockv_steps, pi_steps;
    std::size_t pi_forced = 0;
    auto visit = [&](std::uint64_t k, const Scenario&, const AnnotatedTrace& run) {
      std::vector<std::size_t> steps;
      for (const auto& f : run.forced_events) steps.push_back(f.step);
      switch (run.config.protocol) {
        case Protocol::pi: pi_forced = run.forced_count(); break;
        case Protocol::fi_clockv: clockv_steps = steps; break;
        case Protocol::fi_greater:
          if (steps != clockv_steps && r.encoding_mismatches++ == 0) r.first_mismatch = k;
          if (run.forced_count() > pi_forced) r.reversals.push_back(k);
          break;
        default: break;
      }
    };
    auto t0 = std::chrono::steady_clock::now();
    r.summary = run_campaign(SuiteResult::kRuns, suite_params(0), configs, visit);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (std::uint64_t k = 0; k < SuiteResult::kRuns; ++k) r.asymmetric += fuzz_suite_params(k).p_ckpt.size() > 1;
    return r;
  }();
  return result;
}

Outcome criterion1() {
  Outcome o;
  auto run = run_scenario(fixture("ccp"), Protocol::none);
  OracleReport r = analyze(run.trace);
  o.require(r.useless == std::set<CheckpointId>{C(3, 3)}, "useless set is not {C3^3}");
  o.require(cycles_at(r, C(3, 3)) == std::vector<std::vector<std::string>>{{"m6", "m3"}, {"m6", "m5", "m4", "m3"}},
            "Z-cycle witnesses differ");
  auto causal = zigzag_exists(C(1, 1), C(3, 2), run.trace);
  o.require(causal && causal->messages == std::vector<std::string>{"m1", "m2"} && causal->causal,
            "causal zigzag [m1,m2] missing");
  auto noncausal = zigzag_exists(C(1, 2), C(3, 3), run.trace);
  o.require(noncausal && noncausal->messages == std::vector<std::string>{"m4", "m3"} && !noncausal->causal,
            "non-causal zigzag [m4,m3] missing");
  bool violation = false;
  for (const auto& v : r.z_consistency_violations)
    violation |= v.from.id() == C(3, 3) && v.to.id() == C(1, 3) && v.from.timestamp == v.to.timestamp;
  o.require(violation, "violation C3^3.t = C1^3.t missing");
  o.detail << (o.ok ? "useless {C3^3}; cycles [m6,m3], [m6,m5,m4,m3]; C3^3.t = C1^3.t = " +
                          std::to_string(run.timestamp(C(3, 3)).value_or(0))
                    : "");
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (Protocol p : {Protocol::fi_clockv, Protocol::fi_greater}) {
    auto run = run_scenario(fixture("ccp"), p);
    OracleReport r = analyze(run.trace);
    const std::string name(protocol_name(p));
    o.require(r.clean(), name + " run not clean");
    o.require(run.forced_count() == 1, name + " forced " + std::to_string(run.forced_count()));
  }
  if (o.ok) o.detail << "fi-clockv and fi: clean, 1 forced checkpoint each";
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (Protocol p : {Protocol::fi_clockv, Protocol::fi_greater}) {
    const std::string name(protocol_name(p));
    auto a = run_scenario(fixture("clockv-a"), p);
    o.require(!a.forced_at("m3"), name + " forced at m3 in (a)");
    auto b = run_scenario(fixture("clockv-b"), p);
    o.require(!b.forced_at("m2") && !b.forced_at("m3"), name + " forced in (b)");
    auto c = run_scenario(fixture("greater-c"), p);
    o.require(c.forced_count() == 1 && c.forced_at("m3"), name + " not exactly one force at m3 in (c)");
  }
  auto la = run_scenario(fixture("lazy-greater-a"), Protocol::lazy_fi);
  o.require(la.forced_at("m5") != nullptr, "lazy-fi does not force at m5 in lazy (a)");
  auto lb = run_scenario(fixture("lazy-greater-b"), Protocol::lazy_fi);
  o.require(!lb.forced_at("m7"), "lazy-fi forces at m7 in lazy (b)");
  auto lc = run_scenario(fixture("lazy-greater-c"), Protocol::lazy_fi);
  const ForcedEvent* f = lc.forced_at("m7");
  o.require(f && f->decision.c2, "lazy-fi does not force via C2 at m7 in lazy (c)");
  OracleReport bare = analyze(run_scenario(fixture("lazy-greater-c"), Protocol::none).trace);
  o.require(has_cycle(bare, C(1, 2), {"m7", "m4", "m6"}), "cycle [m7,m4,m6] absent without the force");
  if (o.ok) o.detail << "FI: no force in (a),(b), one in (c); Lazy-FI: force (a), none (b), C2 force (c)";
  return o;
}

Outcome criterion4() {
  Outcome o;
  auto fine = run_scenario(fixture("fine-counterexample"), Protocol::fine);
  OracleReport r = analyze(fine.trace);
  o.require(fine.forced_count() == 0, "FINE forced " + std::to_string(fine.forced_count()));
  o.require(r.useless.count(C(3, 2)) == 1, "C3^2 not useless under FINE");
  auto fi = run_scenario(fixture("fine-counterexample"), Protocol::fi_greater);
  o.require(useless_checkpoints(fi.trace).empty(), "FI has useless checkpoints");
  if (o.ok) o.detail << "FINE: 0 forced, useless {C3^2}; FI: 0 useless";
  return o;
}

Outcome criterion5() {
  Outcome o;
  auto lf = run_scenario(fixture("lazy-fine-counterexample"), Protocol::lazy_fine);
  OracleReport r = analyze(lf.trace);
  bool cycle = false;
  for (const auto& z : r.z_cycles) cycle |= z.witness.messages == std::vector<std::string>{"m5", "m4", "m2"};
  o.require(cycle, "Z-cycle [m5,m4,m2] not found");
  o.require(r.useless.size() == 1, std::to_string(r.useless.size()) + " useless checkpoints");
  auto lazy = run_scenario(fixture("lazy-fine-counterexample"), Protocol::lazy_fi);
  o.require(useless_checkpoints(lazy.trace).empty(), "Lazy-FI has useless checkpoints");
  if (o.ok) o.detail << "Lazy-FINE: cycle [m5,m4,m2], 1 useless; Lazy-FI: 0 useless";
  return o;
}

Outcome criterion6() {
  Outcome o;
  AmplifyResult a = amplify_violation(fixture("fine-proposal"), Protocol::fine);
  o.require(a.amplified, "nothing amplified: " + a.reason);
  o.require(!a.report.useless.empty(), "amplified FINE run has no useless checkpoint");
  if (o.ok) {
    o.detail << "inserted " << a.inserted_message << "; useless {";
    for (const auto& c : a.report.useless) o.detail << to_string(c);
    o.detail << "}";
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  const SuiteResult& s = suite();
  std::size_t findings = s.summary.findings.size();
  o.require(findings == 0, std::to_string(findings) + " findings");
  o.require(s.seconds < 60.0, "runtime " + std::to_string(s.seconds) + " s");
  if (!o.ok && findings) {
    const auto& f = s.summary.findings.front();
    o.detail << "; first: " << protocol_name(f.config.protocol) << " on suite:" << f.index;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%llu scenarios (%zu asymmetric) x 4 protocols, 0 findings, %.1f s",
                static_cast<unsigned long long>(SuiteResult::kRuns), s.asymmetric, s.seconds);
  if (o.ok) o.detail << buf;
  return o;
}

Outcome criterion8() {
  Outcome o;
  const SuiteResult& s = suite();
  o.require(s.encoding_mismatches == 0, std::to_string(s.encoding_mismatches) + " scenarios differ, first suite:" +
                                            std::to_string(s.first_mismatch));
  if (o.ok) o.detail << "identical forced receive steps on all " << SuiteResult::kRuns << " scenarios ("
                     << s.summary.totals[2].forced << " forced each)";
  return o;
}

Outcome criterion9() {
  Outcome o;
  SplitMix64 rng(0xC0FFEE);
  std::size_t bad_fine = 0, bad_lazy = 0, bad_clockv = 0, fired = 0;
  for (int k = 0; k < 100000; ++k) {
    auto in = fuzzing::random_condition_input(rng);
    in.state.taken_index = k % 2 ? TakenIndex::receiver : TakenIndex::witness;
    const bool fine = eval_c_fine1(in.state, in.m), lazyfine = eval_c_lazyfine1(in.state, in.m);
    const bool clockv = eval_c_fi1_clockv(in.state, in.m);
    fired += fine + lazyfine + clockv;
    bad_fine += fine && !eval_c_fi1_greater(in.state, in.m);
    bad_lazy += lazyfine && !eval_c_lazyfi1(in.state, in.m);
    bad_clockv += clockv && !eval_c_pi(in.state, in.m);
  }
  o.require(bad_fine == 0, std::to_string(bad_fine) + " FINE1 counterexamples");
  o.require(bad_lazy == 0, std::to_string(bad_lazy) + " LazyFINE1 counterexamples");
  o.require(bad_clockv == 0, std::to_string(bad_clockv) + " FI1-clockv counterexamples");
  o.require(fired > 0, "antecedents never fired");
  if (o.ok) o.detail << "100000 pairs, 0 counterexamples (" << fired << " antecedents true)";
  return o;
}

Outcome criterion10() {
  Outcome o;
  std::size_t checked = 0, with_useless = 0, skipped = 0, mismatches = 0;
  const Protocol protocols[] = {Protocol::none, Protocol::fine, Protocol::lazy_fine};
  for (std::uint64_t k = 0; checked < 200 && k < 20000; ++k) {
    Scenario s = random_scenario(fuzz_suite_params(k, 42));
    Trace t = run_scenario(s, protocols[k % 3]).trace;
    std::set<CheckpointId> useful;
    try {
      useful = consistent_membership_bruteforce(t, 2'000'000);
    } catch (const BudgetExceeded&) {
      ++skipped;
      continue;
    }
    ++checked;
    std::set<CheckpointId> complement;
    for (const auto& c : t.checkpoints())
      if (!useful.count(c.id())) complement.insert(c.id());
    auto useless = useless_checkpoints(t);
    with_useless += !useless.empty();
    if (useless != complement && mismatches++ == 0) o.detail << "first mismatch on suite:" << k << ":42";
  }
  o.require(checked == 200, "only " + std::to_string(checked) + " traces fit the budget");
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
  if (o.ok) o.detail << checked << " traces agree (" << with_useless << " with useless checkpoints, " << skipped
                     << " over budget skipped)";
  return o;
}

Outcome criterion11() {
  Outcome o;
  const SuiteResult& s = suite();
  const std::size_t pi = s.summary.totals[0].forced, fi = s.summary.totals[2].forced;
  o.require(fi <= pi, "FI forced " + std::to_string(fi) + " > PI " + std::to_string(pi));
  o.detail << (o.ok ? "" : "; ") << "forced totals PI " << pi << ", FI " << fi << ", Lazy-FI "
           << s.summary.totals[3].forced << "; " << s.reversals.size() << " per-trace reversals";
  if (!s.reversals.empty()) {
    o.detail << " (suite:";
    for (std::size_t k = 0; k < s.reversals.size() && k < 5; ++k) o.detail << (k ? "," : "") << s.reversals[k];
    o.detail << (s.reversals.size() > 5 ? ",..." : "") << ")";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"ccp figure replay under none", criterion1},
      {"FI replay on ccp, both encodings", criterion2},
      {"condition sites of the FI and Lazy-FI fixtures", criterion3},
      {"FINE counterexample", criterion4},
      {"Lazy-FINE counterexample", criterion5},
      {"violation amplifier on the FINE proposal", criterion6},
      {"safety fuzz of PI, FI-clockv, FI, Lazy-FI", criterion7},
      {"FI encoding equivalence", criterion8},
      {"condition implications", criterion9},
      {"oracle cross-validation against brute force", criterion10},
      {"forced-checkpoint trend FI <= PI", criterion11},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << "exception: " << e.what();
    }
    failed += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << "  " << k + 1 << ". " << criteria[k].first << ": " << o.detail.str()
              << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed"))
            << std::endl;
  return failed;
}
