#pragma once

// Run reports (JSON and plain text) and space-time diagrams (ASCII, SVG).

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cic/oracle.hpp"
#include "cic/scenario.hpp"
#include "cic/simulator.hpp"

namespace cic {

using Json = nlohmann::ordered_json;

inline const char* to_string(TakenIndex k) { return k == TakenIndex::witness ? "witness" : "receiver"; }

inline Json to_json(const CheckpointId& c) { return {{"process", c.process.value()}, {"ordinal", c.ordinal}}; }

inline Json to_json(const Piggyback& m) {
  Json j;
  j["t"] = m.t;
  if (m.greater) j["greater"] = *m.greater;
  if (m.equal_incr) j["equal_incr"] = *m.equal_incr;
  if (m.clockv) j["clockv"] = *m.clockv;
  if (m.ckptv) j["ckptv"] = *m.ckptv;
  if (m.taken) j["taken"] = *m.taken;
  return j;
}

inline Json to_json(const ZigzagWitness& w) {
  return {{"from", to_json(w.from)}, {"to", to_json(w.to)}, {"messages", w.messages}, {"causal", w.causal}};
}

inline Json to_json(const OracleReport& r) {
  Json j;
  j["useless"] = Json::array();
  for (const auto& c : r.useless) j["useless"].push_back(to_json(c));
  j["z_cycles"] = Json::array();
  for (const auto& z : r.z_cycles)
    j["z_cycles"].push_back({{"checkpoint", to_json(z.checkpoint)}, {"messages", z.witness.messages}});
  j["z_consistency_violations"] = Json::array();
  for (const auto& v : r.z_consistency_violations)
    j["z_consistency_violations"].push_back({{"from", to_json(v.from.id())},
                                             {"from_t", v.from.timestamp.value_or(0)},
                                             {"to", to_json(v.to.id())},
                                             {"to_t", v.to.timestamp.value_or(0)},
                                             {"witness", to_json(v.witness)}});
  j["stats"] = {{"checkpoints", r.stats.checkpoints}, {"messages", r.stats.messages},
                {"delivered", r.stats.delivered}, {"z_cycles", r.stats.z_cycles},
                {"useless", r.stats.useless},         {"violations", r.stats.violations}};
  return j;
}

inline Json run_report(const std::string& id, const Scenario& s, const AnnotatedTrace& run, const OracleReport& r) {
  Json j;
  j["scenario"] = {{"id", id}, {"hash", scenario_hash(s)}, {"procs", s.n}, {"steps", s.steps.size()}};
  j["protocol"] = protocol_name(run.config.protocol);
  j["taken_index"] = to_string(run.config.taken_index);

  j["checkpoints"] = Json::array();
  for (int p = 1; p <= run.trace.n; ++p) {
    Json list = Json::array();
    for (const CheckpointRecord& c : run.trace.checkpoints_of(ProcessId{p})) {
      Json e{{"ordinal", c.ordinal}, {"kind", to_string(c.kind)}};
      e["t"] = c.timestamp ? Json(*c.timestamp) : Json(nullptr);
      list.push_back(e);
    }
    j["checkpoints"].push_back({{"process", p}, {"checkpoints", list}});
  }

  j["forced"] = Json::array();
  for (const ForcedEvent& f : run.forced_events)
    j["forced"].push_back({{"step", f.step},
                           {"message", f.message},
                           {"process", f.process.value()},
                           {"ordinal", f.checkpoint.ordinal},
                           {"t", f.checkpoint.timestamp.value_or(0)},
                           {"c1", f.decision.c1},
                           {"c2", f.decision.c2}});

  j["log"] = Json::array();
  for (const StepLog& l : run.log) {
    const Step& st = s.steps.at(l.step);
    Json e{{"step", l.step}, {"process", st.process.value()}};
    switch (st.kind) {
      case Step::Kind::ckpt: e["event"] = "checkpoint"; break;
      case Step::Kind::send:
        e["event"] = "send";
        e["message"] = st.message;
        e["dest"] = st.dest.value();
        break;
      case Step::Kind::recv:
        e["event"] = "receive";
        e["message"] = st.message;
        break;
    }
    if (l.piggyback) e["piggyback"] = to_json(*l.piggyback);
    if (l.decision) e["decision"] = {{"c1", l.decision->c1}, {"c2", l.decision->c2}};
    e["lc"] = l.lc_after;
    j["log"].push_back(e);
  }

  j["oracle"] = to_json(r);
  j["summary"] = {{"checkpoints", run.trace.checkpoints().size()},
                  {"forced", run.forced_count()},
                  {"useless", r.useless.size()},
                  {"violations", r.z_consistency_violations.size()},
                  {"clean", r.clean()}};
  return j;
}

inline std::string text_report(const std::string& id, const Scenario& s, const AnnotatedTrace& run,
                               const OracleReport& r) {
  std::ostringstream out;
  out << "scenario " << id << " (" << scenario_hash(s) << "), " << s.n << " processes, " << s.steps.size()
      << " steps\n";
  out << "protocol " << protocol_name(run.config.protocol);
  if (run.config.taken_index == TakenIndex::receiver) out << " (receiver taken index)";
  out << "\n";
  for (int p = 1; p <= run.trace.n; ++p) {
    out << "  P" << p << ":";
    for (const CheckpointRecord& c : run.trace.checkpoints_of(ProcessId{p})) {
      out << " " << to_string(c.id());
      if (c.kind == CheckpointKind::forced) out << "*";
      if (c.timestamp) out << "(t=" << *c.timestamp << ")";
    }
    out << "\n";
  }
  for (const ForcedEvent& f : run.forced_events)
    out << "forced " << to_string(f.checkpoint.id()) << " before " << f.message << " (" << (f.decision.c1 ? "C1" : "")
        << (f.decision.c1 && f.decision.c2 ? "," : "") << (f.decision.c2 ? "C2" : "") << ")\n";
  for (const ZCycle& z : r.z_cycles) {
    out << "z-cycle " << to_string(z.checkpoint) << ":";
    for (const auto& m : z.witness.messages) out << " " << m;
    out << "\n";
  }
  for (const auto& v : r.z_consistency_violations) {
    out << "violation " << to_string(v.from.id()) << "(t=" << v.from.timestamp.value_or(0) << ") ~> "
        << to_string(v.to.id()) << "(t=" << v.to.timestamp.value_or(0) << ") via";
    for (const auto& m : v.witness.messages) out << " " << m;
    out << "\n";
  }
  out << "checkpoints " << run.trace.checkpoints().size() << ", forced " << run.forced_count() << ", useless "
      << r.useless.size() << ", violations " << r.z_consistency_violations.size() << ", "
      << (r.clean() ? "clean" : "NOT clean") << "\n";
  return out.str();
}

// ---- diagrams --------------------------------------------------------------

namespace detail {

/// Column of each trace event: after its process predecessor, and after the
/// send of the message it receives.
inline std::vector<int> layout_columns(const Trace& t) {
  std::vector<int> col(t.events.size(), 0);
  std::vector<int> last(static_cast<std::size_t>(t.n), -1);
  std::map<std::string, int> send_col;
  for (std::size_t k = 0; k < t.events.size(); ++k) {
    const Event& e = t.events[k];
    int c = last[e.process.index()] + 1;
    if (e.kind == EventKind::receive) c = std::max(c, send_col.at(e.message) + 1);
    col[k] = c;
    last[e.process.index()] = c;
    if (e.kind == EventKind::send) send_col[e.message] = c;
  }
  return col;
}

inline std::string event_token(const Event& e) {
  switch (e.kind) {
    case EventKind::checkpoint: {
      const CheckpointRecord& c = *e.checkpoint;
      std::string ts = c.timestamp ? "(t=" + std::to_string(*c.timestamp) + ")" : "";
      if (c.kind == CheckpointKind::forced) return "<" + std::to_string(c.ordinal) + ">" + ts;
      return "[" + std::to_string(c.ordinal) + "]" + ts;
    }
    case EventKind::send: return e.message + ">";
    case EventKind::receive: return ">" + e.message;
    case EventKind::internal: return "*";
  }
  return "?";
}

}  // namespace detail

inline std::string ascii_diagram(const AnnotatedTrace& run) {
  const Trace& t = run.trace;
  std::vector<int> col = detail::layout_columns(t);
  int columns = 0;
  for (int c : col) columns = std::max(columns, c + 1);
  std::vector<std::size_t> width(static_cast<std::size_t>(columns), 1);
  std::vector<std::string> token(t.events.size());
  for (std::size_t k = 0; k < t.events.size(); ++k) {
    token[k] = detail::event_token(t.events[k]);
    auto& w = width[static_cast<std::size_t>(col[k])];
    w = std::max(w, token[k].size());
  }

  std::ostringstream out;
  for (int p = 1; p <= t.n; ++p) {
    std::vector<std::string> cells(static_cast<std::size_t>(columns));
    for (std::size_t k = 0; k < t.events.size(); ++k)
      if (t.events[k].process == ProcessId{p}) cells[static_cast<std::size_t>(col[k])] = token[k];
    std::string line = "P" + std::to_string(p) + " ";
    for (std::size_t c = 0; c < cells.size(); ++c) {
      line += "--";
      line += cells[c];
      line += std::string(width[c] - cells[c].size(), '-');
    }
    line += "--";
    out << line << "\n";
  }
  auto table = t.messages();
  if (!table.empty()) {
    out << "\n";
    for (const auto& [name, info] : table)
      out << name << ": P" << info.from.value() << " -> P" << info.to.value()
          << (info.receive_index ? "" : " (in flight)") << "\n";
  }
  return out.str();
}

inline std::string svg_diagram(const AnnotatedTrace& run) {
  const Trace& t = run.trace;
  std::vector<int> col = detail::layout_columns(t);
  int columns = 1;
  for (int c : col) columns = std::max(columns, c + 1);
  const int dx = 56, dy = 70, left = 50, top = 40;
  auto x_of = [&](int c) { return left + 30 + c * dx; };
  auto y_of = [&](ProcessId p) { return top + (p.value() - 1) * dy; };
  const int width = x_of(columns) + 20;
  const int height = top + (t.n - 1) * dy + 40;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"monospace\" font-size=\"11\">\n";
  out << "<defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"6\" refX=\"8\" refY=\"3\" orient=\"auto\">"
         "<path d=\"M0,0 L8,3 L0,6 z\"/></marker></defs>\n";
  for (int p = 1; p <= t.n; ++p) {
    const int y = y_of(ProcessId{p});
    out << "<text x=\"10\" y=\"" << y + 4 << "\">P" << p << "</text>\n";
    out << "<line class=\"process\" x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << width - 10 << "\" y2=\"" << y
        << "\" stroke=\"black\"/>\n";
  }

  std::map<std::string, std::size_t> send_at;
  for (std::size_t k = 0; k < t.events.size(); ++k)
    if (t.events[k].kind == EventKind::send) send_at[t.events[k].message] = k;
  for (std::size_t k = 0; k < t.events.size(); ++k) {
    const Event& e = t.events[k];
    if (e.kind != EventKind::receive) continue;
    const std::size_t s = send_at.at(e.message);
    const int x1 = x_of(col[s]), y1 = y_of(t.events[s].process), x2 = x_of(col[k]), y2 = y_of(e.process);
    out << "<line class=\"message\" x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
        << "\" stroke=\"black\" marker-end=\"url(#arrow)\"/>\n";
    out << "<text x=\"" << (x1 + x2) / 2 + 4 << "\" y=\"" << (y1 + y2) / 2 << "\">" << e.message << "</text>\n";
  }
  for (const auto& [name, info] : t.messages()) {
    if (info.receive_index) continue;
    const std::size_t s = send_at.at(name);
    const int x1 = x_of(col[s]), y1 = y_of(info.from);
    const int y2 = y1 + (info.to.value() > info.from.value() ? dy / 3 : -dy / 3);
    out << "<line class=\"message in-flight\" x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x1 + dx / 2
        << "\" y2=\"" << y2 << "\" stroke=\"gray\" stroke-dasharray=\"3,2\"/>\n";
    out << "<text x=\"" << x1 + dx / 2 + 2 << "\" y=\"" << y2 << "\">" << name << "</text>\n";
  }

  for (std::size_t k = 0; k < t.events.size(); ++k) {
    const Event& e = t.events[k];
    if (e.kind != EventKind::checkpoint) continue;
    const CheckpointRecord& c = *e.checkpoint;
    const int x = x_of(col[k]), y = y_of(e.process);
    if (c.kind == CheckpointKind::forced) {
      out << "<polygon class=\"forced\" points=\"" << x << "," << y - 8 << " " << x + 8 << "," << y << " " << x << ","
          << y + 8 << " " << x - 8 << "," << y << "\" fill=\"white\" stroke=\"black\"/>\n";
    } else {
      out << "<rect class=\"basic\" x=\"" << x - 5 << "\" y=\"" << y - 8 << "\" width=\"10\" height=\"16\""
          << " fill=\"white\" stroke=\"black\"/>\n";
    }
    if (c.timestamp)
      out << "<text x=\"" << x - 10 << "\" y=\"" << y - 12 << "\">(" << *c.timestamp << ")</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace cic
