#pragma once

// Seeded fuzz campaigns: many random scenarios against several protocols,
// with per-protocol totals and reproducible findings.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cic/oracle.hpp"
#include "cic/scenario.hpp"
#include "cic/simulator.hpp"

namespace cic {

struct FuzzFinding {
  std::uint64_t index = 0;  // position in the campaign
  std::uint64_t seed = 0;   // generator seed of the scenario
  ProtocolConfig config;
  std::string hash;
  std::size_t useless = 0;
  std::size_t violations = 0;
};

struct ProtocolTotals {
  std::size_t runs = 0;
  std::size_t forced = 0;
  std::size_t checkpoints = 0;
  std::size_t findings = 0;
};

struct FuzzSummary {
  std::vector<ProtocolConfig> configs;
  std::vector<ProtocolTotals> totals;  // parallel to configs
  std::vector<FuzzFinding> findings;   // ordered by index, then config
};

using ParamsFor = std::function<FuzzParams(std::uint64_t index)>;

/// Parameters of the standard suite, or fixed parameters with seed + index.
inline ParamsFor suite_params(std::uint64_t base_seed) {
  return [base_seed](std::uint64_t k) { return fuzz_suite_params(k, base_seed); };
}

inline ParamsFor fixed_params(FuzzParams p) {
  validate_params(p);
  return [p](std::uint64_t k) {
    FuzzParams q = p;
    q.seed = p.seed + k;
    return q;
  };
}

/// `visit` (optional) sees every run after it is analyzed.
inline FuzzSummary run_campaign(
    std::uint64_t runs, const ParamsFor& params, const std::vector<ProtocolConfig>& configs,
    const std::function<void(std::uint64_t, const Scenario&, const AnnotatedTrace&)>& visit = {}) {
  FuzzSummary out;
  out.configs = configs;
  out.totals.assign(configs.size(), {});
  for (std::uint64_t k = 0; k < runs; ++k) {
    const FuzzParams p = params(k);
    const Scenario s = random_scenario(p);
    for (std::size_t c = 0; c < configs.size(); ++c) {
      AnnotatedTrace run = run_scenario(s, configs[c]);
      auto useless = useless_checkpoints(run.trace);
      auto violations = check_z_consistency(run.trace);
      ProtocolTotals& tot = out.totals[c];
      ++tot.runs;
      tot.forced += run.forced_count();
      tot.checkpoints += run.trace.checkpoints().size();
      if (!useless.empty() || !violations.empty()) {
        ++tot.findings;
        out.findings.push_back({k, p.seed, configs[c], scenario_hash(s), useless.size(), violations.size()});
      }
      if (visit) visit(k, s, run);
    }
  }
  return out;
}

}  // namespace cic
