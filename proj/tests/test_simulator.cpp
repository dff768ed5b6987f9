#include <gtest/gtest.h>

#include "cic/campaign.hpp"
#include "cic/fixtures.hpp"

using namespace cic;

namespace {
CheckpointId C(int p, int x) { return {ProcessId{p}, x}; }
}  // namespace

TEST(Run, CcpUnderNone) {
  auto run = run_scenario(builtin("ccp").scenario, Protocol::none);
  EXPECT_EQ(run.timestamp(C(3, 3)), run.timestamp(C(1, 3)));
  EXPECT_EQ(useless_checkpoints(run.trace), (std::set<CheckpointId>{C(3, 3)}));
}

TEST(Run, CcpUnderFi) {
  for (Protocol p : {Protocol::fi_greater, Protocol::fi_clockv}) {
    auto run = run_scenario(builtin("ccp").scenario, p);
    EXPECT_TRUE(analyze(run.trace).clean());
    EXPECT_EQ(run.forced_count(), 1u);
  }
}

TEST(Run, EmptyScenario) {
  for (Protocol p : all_protocols()) {
    auto run = run_scenario(builtin("empty").scenario, p);
    auto cks = run.trace.checkpoints();
    ASSERT_EQ(cks.size(), 3u);
    for (const auto& c : cks) {
      EXPECT_EQ(c.timestamp, 1);
      EXPECT_EQ(c.kind, CheckpointKind::initial);
    }
  }
}

TEST(Run, InvalidScenario) {
  Scenario s{2, {Step::recv(2, "m1")}};
  EXPECT_THROW(run_scenario(s, Protocol::fi_greater), InvalidScenario);
}

TEST(Run, ForcedCheckpointPrecedesItsReceive) {
  for (std::uint64_t k = 0; k < 300; ++k) {
    Scenario s = random_scenario(fuzz_suite_params(k, 4));
    for (Protocol p : all_protocols()) {
      auto run = run_scenario(s, p);
      const auto& ev = run.trace.events;
      for (std::size_t j = 0; j < ev.size(); ++j) {
        if (ev[j].kind != EventKind::checkpoint || ev[j].checkpoint->kind != CheckpointKind::forced) continue;
        if (s.steps[static_cast<std::size_t>(ev[j].step)].kind == Step::Kind::ckpt) continue;  // scripted
        ASSERT_LT(j + 1, ev.size());
        ASSERT_EQ(ev[j + 1].kind, EventKind::receive);
        ASSERT_EQ(ev[j + 1].process, ev[j].process);
        ASSERT_EQ(ev[j + 1].step, ev[j].step);
      }
    }
  }
}

TEST(Run, Deterministic) {
  for (std::uint64_t k = 0; k < 50; ++k) {
    Scenario s = random_scenario(fuzz_suite_params(k, 8));
    for (Protocol p : all_protocols()) {
      auto a = run_scenario(s, p), b = run_scenario(s, p);
      ASSERT_EQ(a.trace.events.size(), b.trace.events.size());
      for (std::size_t j = 0; j < a.trace.events.size(); ++j) {
        const Event &x = a.trace.events[j], &y = b.trace.events[j];
        ASSERT_TRUE(x.process == y.process && x.ordinal == y.ordinal && x.kind == y.kind && x.message == y.message);
        ASSERT_EQ(x.checkpoint.has_value(), y.checkpoint.has_value());
        if (x.checkpoint) {
          ASSERT_EQ(x.checkpoint->timestamp, y.checkpoint->timestamp);
        }
      }
      ASSERT_EQ(a.final_states, b.final_states);
      ASSERT_EQ(a.forced_count(), b.forced_count());
    }
  }
}

// Each forced checkpoint has a fired condition, and the condition holds
// again when re-evaluated on the logged pre-state.
TEST(Run, ForcedDecisionsReproduce) {
  std::size_t forced = 0;
  for (std::uint64_t k = 0; k < 300; ++k) {
    Scenario s = random_scenario(fuzz_suite_params(k, 6));
    for (Protocol p : all_protocols()) {
      for (const ForcedEvent& f : run_scenario(s, p).forced_events) {
        ++forced;
        ASSERT_TRUE(f.decision.forced());
        ASSERT_EQ(evaluate_conditions(f.pre_state, f.payload), f.decision);
      }
    }
  }
  EXPECT_GT(forced, 0u);
}

TEST(Run, NoneAddsNoCheckpoints) {
  for (std::uint64_t k = 0; k < 200; ++k) {
    Scenario s = random_scenario(fuzz_suite_params(k));
    std::size_t scripted = 0;
    for (const Step& st : s.steps) scripted += st.kind == Step::Kind::ckpt;
    auto run = run_scenario(s, Protocol::none);
    ASSERT_EQ(run.trace.checkpoints().size(), scripted + static_cast<std::size_t>(s.n));
    ASSERT_EQ(run.forced_count(), 0u);
  }
}

TEST(Run, LogCoversEveryStep) {
  Scenario s = builtin("ccp").scenario;
  auto run = run_scenario(s, Protocol::lazy_fi);
  ASSERT_EQ(run.log.size(), s.steps.size());
  for (std::size_t k = 0; k < s.steps.size(); ++k) {
    EXPECT_EQ(run.log[k].step, k);
    EXPECT_EQ(run.log[k].piggyback.has_value(), s.steps[k].kind != Step::Kind::ckpt);
    EXPECT_EQ(run.log[k].decision.has_value(), s.steps[k].kind == Step::Kind::recv);
  }
}

TEST(Amplify, FineProposal) {
  AmplifyResult a = amplify_violation(builtin("fine-proposal").scenario, Protocol::fine);
  ASSERT_TRUE(a.amplified);
  ASSERT_TRUE(a.violation);
  EXPECT_EQ(a.violation->from.id(), C(1, 2));
  EXPECT_EQ(a.violation->to.id(), C(3, 2));
  EXPECT_TRUE(a.report.useless.count(C(3, 2)));
}

TEST(Amplify, NothingUnderFi) {
  AmplifyResult a = amplify_violation(builtin("fine-proposal").scenario, Protocol::fi_greater);
  EXPECT_FALSE(a.amplified);
  EXPECT_NE(a.reason.find("nothing to amplify"), std::string::npos);
  EXPECT_EQ(a.scenario, builtin("fine-proposal").scenario);
}

TEST(Amplify, LazyFinePrecursor) {
  AmplifyResult a = amplify_violation(builtin("lazy-fine-proposal").scenario, Protocol::lazy_fine);
  ASSERT_TRUE(a.amplified);
  bool found = false;
  for (const auto& z : a.report.z_cycles) found |= z.witness.messages == std::vector<std::string>{"m5", "m4", "m2"};
  EXPECT_TRUE(found);
}

// The inserted message leaves P_j as the first event of I_j^y and reaches
// P_i in I_i^x after the first message of the witness was sent.
TEST(Amplify, InsertionGeometry) {
  std::size_t amplified = 0;
  for (std::uint64_t k = 0; k < 400 && amplified < 60; ++k) {
    Scenario s = random_scenario(fuzz_suite_params(k, 12));
    AmplifyResult a = amplify_violation(s, Protocol::fine);
    if (!a.amplified) continue;
    ++amplified;
    const auto& v = *a.violation;
    const Trace& t = a.trace.trace;
    auto info = t.messages().at(a.inserted_message);
    ASSERT_TRUE(info.receive_index);
    Interval send = interval_of(info.send_index, t), recv = interval_of(*info.receive_index, t);
    // The replay may force new checkpoints, so compare against the original
    // violation only in the base run: ordinals up to the insertion agree.
    ASSERT_EQ(send.process, v.to.process);
    ASSERT_EQ(recv.process, v.from.process);
    // Nothing of P_j's own sits between C_j^y and the new send, except the
    // receive that forced C_j^y.
    const Trace& base = run_scenario(s, Protocol::fine).trace;
    const Event& cj = base.events.at(*base.find_checkpoint(v.to.id()));
    const Event& prev = t.events[info.send_index - 1];
    ASSERT_EQ(prev.process, v.to.process);
    if (cj.checkpoint->kind == CheckpointKind::forced && s.steps[static_cast<std::size_t>(cj.step)].kind == Step::Kind::recv)
      ASSERT_EQ(prev.kind, EventKind::receive);
    else
      ASSERT_EQ(prev.kind, EventKind::checkpoint);
    auto first = t.messages().at(v.witness.messages.front());
    ASSERT_LT(first.send_index, *info.receive_index);
  }
  EXPECT_GT(amplified, 0u);
}

TEST(Compare, Ccp) {
  auto rows = compare_runs(builtin("ccp").scenario, {Protocol::none, Protocol::pi, Protocol::fi_greater});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].useless, 1u);
  EXPECT_EQ(rows[1].useless, 0u);
  EXPECT_EQ(rows[2].useless, 0u);
}

TEST(Compare, FineCounterexample) {
  auto rows = compare_runs(builtin("fine-counterexample").scenario, {Protocol::fi_greater, Protocol::fine});
  EXPECT_EQ(rows[0].useless, 0u);
  EXPECT_GE(rows[0].forced, 1u);
  EXPECT_EQ(rows[1].forced, 0u);
  EXPECT_EQ(rows[1].useless, 1u);
}

TEST(Compare, Empty) {
  for (const auto& row : compare_runs(builtin("empty").scenario, all_protocols())) {
    EXPECT_EQ(row.forced, 0u);
    EXPECT_EQ(row.useless, 0u);
    EXPECT_TRUE(row.z_consistent);
  }
}
