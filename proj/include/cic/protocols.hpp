#pragma once

// Index-based communication-induced checkpointing protocols as per-process
// state machines. Each checkpoint-inducing condition is a pure predicate on
// the receiver's state before the receive is applied and the incoming
// piggyback.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cic/computation.hpp"

namespace cic {

enum class Protocol { none, pi, fi_clockv, fi_greater, lazy_fi, fine, lazy_fine };

/// Which index the FINE-family taken test reads: the sent-to witness k
/// (as written in the condition boxes) or the receiver i.
enum class TakenIndex { witness, receiver };

struct ProtocolConfig {
  Protocol protocol = Protocol::none;
  TakenIndex taken_index = TakenIndex::witness;
};

inline constexpr std::string_view protocol_name(Protocol p) {
  switch (p) {
    case Protocol::none: return "none";
    case Protocol::pi: return "pi";
    case Protocol::fi_clockv: return "fi-clockv";
    case Protocol::fi_greater: return "fi";
    case Protocol::lazy_fi: return "lazy-fi";
    case Protocol::fine: return "fine";
    case Protocol::lazy_fine: return "lazy-fine";
  }
  return "?";
}

class UnknownProtocol : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline Protocol parse_protocol(std::string_view name) {
  if (name == "none") return Protocol::none;
  if (name == "pi") return Protocol::pi;
  if (name == "fi-clockv") return Protocol::fi_clockv;
  if (name == "fi" || name == "fi-greater") return Protocol::fi_greater;
  if (name == "lazy-fi") return Protocol::lazy_fi;
  if (name == "fine") return Protocol::fine;
  if (name == "lazy-fine") return Protocol::lazy_fine;
  throw UnknownProtocol("unknown protocol '" + std::string(name) +
                        "' (expected none, pi, fi, fi-greater, fi-clockv, lazy-fi, fine, lazy-fine)");
}

inline const std::vector<Protocol>& all_protocols() {
  static const std::vector<Protocol> all{Protocol::none,    Protocol::pi,   Protocol::fi_clockv, Protocol::fi_greater,
                                         Protocol::lazy_fi, Protocol::fine, Protocol::lazy_fine};
  return all;
}

inline constexpr bool is_lazy(Protocol p) { return p == Protocol::lazy_fi || p == Protocol::lazy_fine; }
inline constexpr bool uses_greater(Protocol p) { return p == Protocol::fi_greater || p == Protocol::fine; }
inline constexpr bool carries_ckptv(Protocol p) {
  return p == Protocol::fi_clockv || uses_greater(p) || is_lazy(p);
}
inline constexpr bool uses_min_to(Protocol p) { return p == Protocol::pi || p == Protocol::fi_clockv; }

/// Control data attached to a message. Only the owning family's vectors are
/// present.
struct Piggyback {
  int t = 0;
  std::optional<std::vector<bool>> greater;
  std::optional<std::vector<bool>> equal_incr;
  std::optional<std::vector<int>> clockv;
  std::optional<std::vector<int>> ckptv;
  std::optional<std::vector<bool>> taken;

  bool operator==(const Piggyback&) const = default;
};

inline constexpr int infinity = std::numeric_limits<int>::max();

struct ProtocolState {
  Protocol protocol = Protocol::none;
  TakenIndex taken_index = TakenIndex::witness;
  ProcessId self;
  int n = 0;
  int lc = 0;
  std::vector<bool> sent_to;
  std::vector<int> min_to;  // `infinity` when nothing was sent this interval
  std::vector<int> clockv;
  std::vector<bool> greater;
  std::vector<bool> equal_incr;
  bool increment = false;
  std::vector<int> ckptv;
  std::vector<bool> taken;

  std::size_t i() const { return self.index(); }
  bool operator==(const ProtocolState&) const = default;
};

struct ForcedDecision {
  bool c1 = false;
  bool c2 = false;

  bool forced() const { return c1 || c2; }
  bool operator==(const ForcedDecision&) const = default;
};

namespace detail {

inline const std::vector<bool>& need(const std::optional<std::vector<bool>>& v, std::size_t n, const char* field) {
  if (!v) throw std::invalid_argument(std::string("piggyback lacks ") + field + " (protocol mix-up)");
  if (v->size() != n) throw std::invalid_argument(std::string("piggyback ") + field + " length mismatch (protocol mix-up)");
  return *v;
}

inline const std::vector<int>& need(const std::optional<std::vector<int>>& v, std::size_t n, const char* field) {
  if (!v) throw std::invalid_argument(std::string("piggyback lacks ") + field + " (protocol mix-up)");
  if (v->size() != n) throw std::invalid_argument(std::string("piggyback ") + field + " length mismatch (protocol mix-up)");
  return *v;
}

inline std::size_t taken_slot(const ProtocolState& s, std::size_t k) {
  return s.taken_index == TakenIndex::witness ? k : s.i();
}

}  // namespace detail

// ---- checkpoint-inducing conditions -------------------------------------

/// ∃k: sent_to[k] ∧ m.t > min_to[k]
inline bool eval_c_pi(const ProtocolState& s, const Piggyback& m) {
  for (std::size_t k = 0; k < s.sent_to.size(); ++k)
    if (s.sent_to[k] && m.t > s.min_to[k]) return true;
  return false;
}

/// ∃k: sent_to[k] ∧ m.t > min_to[k] ∧ m.t > max(clockv[k], m.clockv[k])
inline bool eval_c_fi1_clockv(const ProtocolState& s, const Piggyback& m) {
  const auto& mc = detail::need(m.clockv, s.sent_to.size(), "clockv");
  for (std::size_t k = 0; k < s.sent_to.size(); ++k)
    if (s.sent_to[k] && m.t > s.min_to[k] && m.t > std::max(s.clockv[k], mc[k])) return true;
  return false;
}

/// ∃k: sent_to[k] ∧ m.greater[k] ∧ m.t > lc
inline bool eval_c_fi1_greater(const ProtocolState& s, const Piggyback& m) {
  const auto& mg = detail::need(m.greater, s.sent_to.size(), "greater");
  if (m.t <= s.lc) return false;
  for (std::size_t k = 0; k < s.sent_to.size(); ++k)
    if (s.sent_to[k] && mg[k]) return true;
  return false;
}

/// m.ckptv[i] = ckptv[i] ∧ m.taken[i]
inline bool eval_c_fi2(const ProtocolState& s, const Piggyback& m) {
  const auto& mc = detail::need(m.ckptv, s.ckptv.size(), "ckptv");
  const auto& mt = detail::need(m.taken, s.taken.size(), "taken");
  return mc[s.i()] == s.ckptv[s.i()] && mt[s.i()];
}

/// ∃k: sent_to[k] ∧ ¬m.equal_incr[k] ∧ m.t > lc
inline bool eval_c_lazyfi1(const ProtocolState& s, const Piggyback& m) {
  const auto& me = detail::need(m.equal_incr, s.sent_to.size(), "equal_incr");
  if (m.t <= s.lc) return false;
  for (std::size_t k = 0; k < s.sent_to.size(); ++k)
    if (s.sent_to[k] && !me[k]) return true;
  return false;
}

/// C_FI1 (greater form) with the extra conjunct m.taken[k], or m.taken[i]
/// under TakenIndex::receiver.
inline bool eval_c_fine1(const ProtocolState& s, const Piggyback& m) {
  const auto& mg = detail::need(m.greater, s.sent_to.size(), "greater");
  const auto& mt = detail::need(m.taken, s.sent_to.size(), "taken");
  if (m.t <= s.lc) return false;
  for (std::size_t k = 0; k < s.sent_to.size(); ++k)
    if (s.sent_to[k] && mg[k] && mt[detail::taken_slot(s, k)]) return true;
  return false;
}

/// Lazy-FI's first condition with the extra conjunct m.taken[k] (or [i]).
inline bool eval_c_lazyfine1(const ProtocolState& s, const Piggyback& m) {
  const auto& me = detail::need(m.equal_incr, s.sent_to.size(), "equal_incr");
  const auto& mt = detail::need(m.taken, s.sent_to.size(), "taken");
  if (m.t <= s.lc) return false;
  for (std::size_t k = 0; k < s.sent_to.size(); ++k)
    if (s.sent_to[k] && !me[k] && mt[detail::taken_slot(s, k)]) return true;
  return false;
}

/// Both conditions of the state's protocol on the pre-update state.
inline ForcedDecision evaluate_conditions(const ProtocolState& s, const Piggyback& m) {
  switch (s.protocol) {
    case Protocol::none: return {};
    case Protocol::pi: return {eval_c_pi(s, m), false};
    case Protocol::fi_clockv: return {eval_c_fi1_clockv(s, m), eval_c_fi2(s, m)};
    case Protocol::fi_greater: return {eval_c_fi1_greater(s, m), eval_c_fi2(s, m)};
    case Protocol::lazy_fi: return {eval_c_lazyfi1(s, m), eval_c_fi2(s, m)};
    case Protocol::fine: return {eval_c_fine1(s, m), eval_c_fi2(s, m)};
    case Protocol::lazy_fine: return {eval_c_lazyfine1(s, m), eval_c_fi2(s, m)};
  }
  return {};
}

// ---- lifecycle -------------------------------------------------------------

/// Saves a checkpoint and returns its record (kind basic; callers relabel).
inline CheckpointRecord take_checkpoint(ProtocolState& s) {
  const std::size_t i = s.i();
  std::fill(s.sent_to.begin(), s.sent_to.end(), false);
  std::fill(s.min_to.begin(), s.min_to.end(), infinity);
  if (carries_ckptv(s.protocol))
    for (std::size_t k = 0; k < static_cast<std::size_t>(s.n); ++k)
      if (k != i) {
        s.taken[k] = true;
        if (uses_greater(s.protocol)) s.greater[k] = true;
      }
  if (is_lazy(s.protocol)) {
    if (s.increment) {
      ++s.lc;
      std::fill(s.equal_incr.begin(), s.equal_incr.end(), false);
    }
    s.increment = false;
  } else {
    ++s.lc;
  }
  s.clockv[i] = s.lc;
  ++s.ckptv[i];
  return CheckpointRecord{s.self, s.ckptv[i], CheckpointKind::basic, s.lc};
}

struct InitResult {
  ProtocolState state;
  CheckpointRecord initial;
};

inline InitResult protocol_init(int n, ProcessId i, ProtocolConfig config = {}) {
  if (n < 1 || i.value() < 1 || i.value() > n) throw std::invalid_argument("protocol_init: process out of range");
  ProtocolState s;
  s.protocol = config.protocol;
  s.taken_index = config.taken_index;
  s.self = i;
  s.n = n;
  s.lc = 0;
  s.sent_to.assign(n, false);
  s.min_to.assign(n, infinity);
  s.clockv.assign(n, 0);
  s.greater.assign(n, false);
  s.equal_incr.assign(n, false);
  s.ckptv.assign(n, 0);
  s.taken.assign(n, false);
  s.increment = is_lazy(config.protocol);
  CheckpointRecord c = take_checkpoint(s);
  c.kind = CheckpointKind::initial;
  return {std::move(s), c};
}

inline Piggyback on_send(ProtocolState& s, ProcessId dest) {
  if (dest == s.self) throw std::invalid_argument("on_send: self-message");
  if (dest.value() < 1 || dest.value() > s.n) throw std::invalid_argument("on_send: destination out of range");
  const std::size_t d = dest.index();
  s.sent_to[d] = true;
  if (uses_min_to(s.protocol)) s.min_to[d] = std::min(s.min_to[d], s.lc);

  Piggyback m;
  m.t = s.lc;
  if (s.protocol == Protocol::fi_clockv) m.clockv = s.clockv;
  if (uses_greater(s.protocol)) m.greater = s.greater;
  if (is_lazy(s.protocol)) m.equal_incr = s.equal_incr;
  if (carries_ckptv(s.protocol)) {
    m.ckptv = s.ckptv;
    m.taken = s.taken;
  }
  return m;
}

struct ReceiveResult {
  ForcedDecision decision;
  std::optional<CheckpointRecord> forced;
};

/// Evaluates the conditions, takes a forced checkpoint if one fires, then
/// applies the protocol's update rules. Delivery is the caller's business.
inline ReceiveResult on_receive(ProtocolState& s, const Piggyback& m) {
  const std::size_t n = static_cast<std::size_t>(s.n);
  const std::size_t i = s.i();
  if (carries_ckptv(s.protocol)) {
    detail::need(m.ckptv, n, "ckptv");
    detail::need(m.taken, n, "taken");
  }

  ReceiveResult r;
  r.decision = evaluate_conditions(s, m);
  if (r.decision.forced()) {
    r.forced = take_checkpoint(s);
    r.forced->kind = CheckpointKind::forced;
  }

  switch (s.protocol) {
    case Protocol::none:
    case Protocol::pi:
      s.lc = std::max(s.lc, m.t);
      break;
    case Protocol::fi_clockv: {
      const auto& mc = *m.clockv;
      s.lc = std::max(s.lc, m.t);
      for (std::size_t k = 0; k < n; ++k)
        if (k != i) s.clockv[k] = std::max(s.clockv[k], mc[k]);
      break;
    }
    case Protocol::fi_greater:
    case Protocol::fine: {
      const auto& mg = detail::need(m.greater, n, "greater");
      if (m.t > s.lc) {
        s.lc = m.t;
        for (std::size_t k = 0; k < n; ++k)
          if (k != i) s.greater[k] = mg[k];
      } else if (m.t == s.lc) {
        for (std::size_t k = 0; k < n; ++k)
          if (k != i) s.greater[k] = s.greater[k] && mg[k];
      }
      break;
    }
    case Protocol::lazy_fi:
    case Protocol::lazy_fine: {
      const auto& me = detail::need(m.equal_incr, n, "equal_incr");
      if (m.t > s.lc) {
        s.lc = m.t;
        s.increment = true;
        s.equal_incr[i] = true;
        for (std::size_t k = 0; k < n; ++k)
          if (k != i) s.equal_incr[k] = me[k];
      } else if (m.t == s.lc) {
        s.increment = true;
        s.equal_incr[i] = true;
        for (std::size_t k = 0; k < n; ++k) s.equal_incr[k] = s.equal_incr[k] || me[k];
      }
      break;
    }
  }
  s.clockv[i] = s.lc;

  if (carries_ckptv(s.protocol)) {
    const auto& mc = *m.ckptv;
    const auto& mt = *m.taken;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      if (mc[k] > s.ckptv[k]) {
        s.ckptv[k] = mc[k];
        s.taken[k] = mt[k];
      } else if (mc[k] == s.ckptv[k]) {
        s.taken[k] = s.taken[k] || mt[k];
      }
    }
  }
  return r;
}

}  // namespace cic
