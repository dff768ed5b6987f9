#pragma once

// Scenarios: ordered scripts of checkpoint/send/receive steps, the line
// oriented text format that stores them, and a seeded random generator.
//
//   # comment
//   procs 3
//   ckpt 1            basic checkpoint on P1
//   ckpt 2 forced     checkpoint recorded as forced (fixture annotation)
//   send 1 2 m1       P1 sends m1 to P2
//   recv 2 m1         P2 receives m1
//
// The order of the lines is the simulation order.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cic/computation.hpp"

namespace cic {

struct Step {
  enum class Kind { ckpt, send, recv };

  Kind kind = Kind::ckpt;
  ProcessId process;
  ProcessId dest;     // send only
  std::string message;  // send / recv
  bool forced = false;  // ckpt only

  static Step checkpoint(int p, bool forced = false) { return {Kind::ckpt, ProcessId{p}, {}, {}, forced}; }
  static Step send(int p, int q, std::string m) { return {Kind::send, ProcessId{p}, ProcessId{q}, std::move(m), false}; }
  static Step recv(int p, std::string m) { return {Kind::recv, ProcessId{p}, {}, std::move(m), false}; }

  bool operator==(const Step&) const = default;
};

struct Scenario {
  int n = 0;
  std::vector<Step> steps;

  bool operator==(const Scenario&) const = default;
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  /// 1-based source line, or 0 when not parsing text.
  int line() const { return line_; }

 private:
  int line_;
};

/// Problems with a scenario as data; empty means valid.
inline std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> out;
  if (s.n < 1) out.push_back("process count must be positive");
  std::map<std::string, ProcessId> sent;
  std::set<std::string> received;
  for (std::size_t k = 0; k < s.steps.size(); ++k) {
    const Step& st = s.steps[k];
    const std::string where = "step " + std::to_string(k) + ": ";
    auto in_range = [&](ProcessId p) { return p.value() >= 1 && p.value() <= s.n; };
    if (!in_range(st.process)) {
      out.push_back(where + "unknown process " + std::to_string(st.process.value()));
      continue;
    }
    switch (st.kind) {
      case Step::Kind::ckpt:
        break;
      case Step::Kind::send:
        if (!in_range(st.dest)) out.push_back(where + "unknown destination " + std::to_string(st.dest.value()));
        else if (st.dest == st.process) out.push_back(where + "self-message " + st.message);
        if (st.message.empty()) out.push_back(where + "empty message name");
        if (!sent.emplace(st.message, st.dest).second) out.push_back(where + "message " + st.message + " sent twice");
        break;
      case Step::Kind::recv: {
        auto it = sent.find(st.message);
        if (it == sent.end()) out.push_back(where + "receive of " + st.message + " before its send");
        else if (it->second != st.process)
          out.push_back(where + "message " + st.message + " is addressed to P" + std::to_string(it->second.value()));
        if (!received.insert(st.message).second) out.push_back(where + "message " + st.message + " received twice");
        break;
      }
    }
  }
  return out;
}

inline std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "procs " << s.n << '\n';
  for (const Step& st : s.steps) {
    switch (st.kind) {
      case Step::Kind::ckpt:
        out << "ckpt " << st.process.value() << (st.forced ? " forced" : "") << '\n';
        break;
      case Step::Kind::send:
        out << "send " << st.process.value() << ' ' << st.dest.value() << ' ' << st.message << '\n';
        break;
      case Step::Kind::recv:
        out << "recv " << st.process.value() << ' ' << st.message << '\n';
        break;
    }
  }
  return out.str();
}

/// Parses the text format. Errors carry the offending line number.
inline Scenario parse_scenario(const std::string& text) {
  Scenario s;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool have_procs = false;
  std::map<std::string, ProcessId> sent;
  std::set<std::string> received;

  auto number = [&](std::istringstream& fields, const char* what) {
    std::string tok;
    if (!(fields >> tok)) throw ScenarioError(line, std::string("missing ") + what);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw ScenarioError(line, std::string("bad ") + what + " '" + tok + "'");
    }
    if (used != tok.size()) throw ScenarioError(line, std::string("bad ") + what + " '" + tok + "'");
    return v;
  };
  auto process = [&](std::istringstream& fields, const char* what) {
    int p = number(fields, what);
    if (have_procs && (p < 1 || p > s.n)) throw ScenarioError(line, std::string(what) + " out of range: " + std::to_string(p));
    return ProcessId{p};
  };

  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream fields(raw);
    std::string verb;
    if (!(fields >> verb)) continue;

    if (verb == "procs") {
      if (have_procs) throw ScenarioError(line, "duplicate procs line");
      s.n = number(fields, "process count");
      if (s.n < 1) throw ScenarioError(line, "process count must be positive");
      have_procs = true;
    } else if (verb == "ckpt" || verb == "send" || verb == "recv") {
      Step st;
      if (verb == "ckpt") {
        st = Step{Step::Kind::ckpt, process(fields, "process"), {}, {}, false};
        std::string flag;
        if (fields >> flag) {
          if (flag != "forced") throw ScenarioError(line, "unknown checkpoint flag '" + flag + "'");
          st.forced = true;
        }
      } else if (verb == "send") {
        ProcessId p = process(fields, "process");
        ProcessId q = process(fields, "destination");
        std::string name;
        if (!(fields >> name)) throw ScenarioError(line, "missing message name");
        if (p == q) throw ScenarioError(line, "self-message " + name);
        if (!sent.emplace(name, q).second) throw ScenarioError(line, "message " + name + " sent twice");
        st = Step{Step::Kind::send, p, q, name, false};
      } else {
        ProcessId p = process(fields, "process");
        std::string name;
        if (!(fields >> name)) throw ScenarioError(line, "missing message name");
        auto it = sent.find(name);
        if (it == sent.end()) throw ScenarioError(line, "unknown message " + name + " (receive before send)");
        if (it->second != p) throw ScenarioError(line, "message " + name + " is not addressed to P" + std::to_string(p.value()));
        if (!received.insert(name).second) throw ScenarioError(line, "message " + name + " received twice");
        st = Step{Step::Kind::recv, p, {}, name, false};
      }
      std::string extra;
      if (fields >> extra) throw ScenarioError(line, "trailing token '" + extra + "'");
      if (!have_procs) throw ScenarioError(line, "procs line must come first");
      s.steps.push_back(std::move(st));
    } else {
      throw ScenarioError(line, "unknown verb '" + verb + "'");
    }
  }
  if (!have_procs) throw ScenarioError(line, "missing procs line");
  return s;
}

/// FNV-1a 64-bit digest of the serialized scenario, as 16 hex digits.
inline std::string scenario_hash(const Scenario& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : serialize_scenario(s)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k, h >>= 4) out[k] = digits[h & 0xF];
  return out;
}

// ---- random scenarios ------------------------------------------------------

/// splitmix64 stream; the sequence is fixed for a given seed on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, bound).
  std::size_t below(std::size_t bound) { return static_cast<std::size_t>(next() % bound); }

  bool chance(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

struct FuzzParams {
  int n = 3;
  int events = 30;
  /// One probability per process, or a single value for all.
  std::vector<double> p_ckpt{0.15};
  double p_send = 0.5;
  int max_in_flight = 6;
  std::uint64_t seed = 1;
  /// Deliver the messages still in flight once the budget is reached.
  bool drain = true;

  double ckpt_probability(std::size_t p) const { return p_ckpt.size() == 1 ? p_ckpt[0] : p_ckpt.at(p); }
};

inline void validate_params(const FuzzParams& params) {
  if (params.n < 2) throw std::invalid_argument("fuzz: need at least 2 processes");
  if (params.events < 0) throw std::invalid_argument("fuzz: negative event count");
  if (params.p_ckpt.empty() || (params.p_ckpt.size() != 1 && params.p_ckpt.size() != static_cast<std::size_t>(params.n)))
    throw std::invalid_argument("fuzz: p_ckpt needs 1 or n entries");
  for (double p : params.p_ckpt)
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("fuzz: checkpoint probability outside [0,1]");
  if (!(params.p_send >= 0.0 && params.p_send <= 1.0)) throw std::invalid_argument("fuzz: send probability outside [0,1]");
  if (params.max_in_flight < 1) throw std::invalid_argument("fuzz: max_in_flight must be positive");
}

/// Seeded random computation. Each step picks a process; it checkpoints with
/// its own probability, otherwise sends (while the in-flight cap allows and
/// room remains for the receive) or receives one of its pending messages in
/// arbitrary order. Channels are not FIFO.
inline Scenario random_scenario(const FuzzParams& params) {
  validate_params(params);
  SplitMix64 rng(params.seed);
  Scenario s;
  s.n = params.n;
  struct Pending {
    std::string name;
    int dest;
  };
  std::vector<Pending> in_flight;
  int counter = 0;
  const auto budget = static_cast<std::size_t>(params.events);

  auto deliver = [&](std::size_t k) {
    s.steps.push_back(Step::recv(in_flight[k].dest, in_flight[k].name));
    in_flight.erase(in_flight.begin() + static_cast<std::ptrdiff_t>(k));
  };

  while (s.steps.size() + (params.drain ? in_flight.size() : 0) < budget) {
    const int p = static_cast<int>(rng.below(static_cast<std::size_t>(params.n))) + 1;
    if (rng.chance(params.ckpt_probability(static_cast<std::size_t>(p - 1)))) {
      s.steps.push_back(Step::checkpoint(p));
      continue;
    }
    std::vector<std::size_t> mine;
    for (std::size_t k = 0; k < in_flight.size(); ++k)
      if (in_flight[k].dest == p) mine.push_back(k);
    const bool room = static_cast<int>(in_flight.size()) < params.max_in_flight &&
                      s.steps.size() + in_flight.size() + (params.drain ? 2 : 1) <= budget;
    const bool want_send = rng.chance(params.p_send);
    if (room && (want_send || mine.empty())) {
      int q = static_cast<int>(rng.below(static_cast<std::size_t>(params.n - 1))) + 1;
      if (q >= p) ++q;
      std::string name = "m" + std::to_string(++counter);
      s.steps.push_back(Step::send(p, q, name));
      in_flight.push_back({std::move(name), q});
    } else if (!mine.empty()) {
      deliver(mine[rng.below(mine.size())]);
    } else if (!in_flight.empty()) {
      deliver(rng.below(in_flight.size()));
    } else {
      s.steps.push_back(Step::checkpoint(p));
    }
  }
  if (params.drain)
    while (!in_flight.empty()) deliver(rng.below(in_flight.size()));
  return s;
}

/// Parameters of the k-th scenario of the standard fuzz suite: n cycles
/// through 3..5, at most 40 events, every third scenario with asymmetric
/// checkpoint rates.
inline FuzzParams fuzz_suite_params(std::uint64_t k, std::uint64_t base_seed = 0) {
  FuzzParams p;
  p.n = 3 + static_cast<int>(k % 3);
  p.events = 12 + static_cast<int>((k / 3) % 29);
  p.seed = base_seed * 0x100000001B3ULL + k + 1;
  p.p_send = 0.55;
  p.max_in_flight = 3 + static_cast<int>(k % 4);
  switch (k % 3) {
    case 0: p.p_ckpt = {0.15}; break;
    case 1: p.p_ckpt = {0.25}; break;
    default: {
      p.p_ckpt.assign(static_cast<std::size_t>(p.n), 0.04);
      p.p_ckpt[0] = 0.45;
      p.p_ckpt[static_cast<std::size_t>(p.n - 1)] = 0.2;
      break;
    }
  }
  return p;
}

}  // namespace cic
