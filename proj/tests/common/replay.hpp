#pragma once

#include "normlog/lifecycle.hpp"
#include "normlog/monitor.hpp"
#include "normlog/norms.hpp"

#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace replay {

using namespace normlog;

// A prohibition on p and an obligation, triggered by its violations, to
// bring about q before each bell.
inline NormSet norms() {
  return load_norms(R"J({"agents": ["a", "b"], "atoms": ["on", "bell", "r", "p(a)", "q(a)", "p(b)", "q(b)"], "norms": [
    {"id": "n1", "kind": "prohibition", "agent": "a", "activation": "on",
     "deactivation": "!on", "condition": "p(a)", "repair": "q(a)", "punishment": "r"},
    {"id": "n2", "kind": "obligation", "agent": "a", "imports": ["n1"],
     "activation": "t.VIOLA[n1,a,tbn1,t]{p(a)} | (on & bell)",
     "deactivation": "t.RVIOL[n1,a,tbn1,tb,t - 1]{p(a)} | !on",
     "deadline": "bell", "condition": "q(a)", "repair": "p(a)", "punishment": "r"}]})J");
}

// Starts from an empty root, so every positive condition is false somewhere
// from the first state on.
inline std::vector<TraceStep> random_trace(std::mt19937& rng, std::size_t length) {
  const std::vector<std::string> atoms{"on", "bell", "r", "p(a)", "q(a)", "p(b)", "q(b)"};
  std::bernoulli_distribution coin(0.5), rare(0.2), often(0.8);
  std::vector<TraceStep> trace{TraceStep{}};
  bool on = false;
  for (std::size_t i = 1; i < length; ++i) {
    TraceStep st;
    on = on ? often(rng) : coin(rng);
    if (on) st.atoms.insert("on");
    for (std::size_t k = 1; k < atoms.size(); ++k)
      if (atoms[k] == "bell" || atoms[k] == "r" ? rare(rng) : coin(rng)) st.atoms.insert(atoms[k]);
    for (const char* agent : {"a", "b"}) {
      if (!coin(rng)) continue;
      auto& made = st.acting[agent];
      for (const auto& a : st.atoms)
        if (coin(rng)) made.insert(a);
    }
    trace.push_back(std::move(st));
  }
  return trace;
}

inline std::string describe(const Event& e) { return event_json(e); }

// Empty when the monitor and the batch annotation agree on every event,
// every mark and the final ledger.
inline std::string compare(const NormSet& specs, const std::vector<TraceStep>& trace) {
  Monitor monitor(specs);
  std::vector<std::vector<Event>> online;
  for (const auto& st : trace) online.push_back(monitor.append_state(st));
  Annotation batch = annotate(specs, trace_model(trace, specs.agents));
  std::ostringstream out;
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (online[i] != batch.events[i]) {
      out << "events differ at " << i << ":";
      for (const auto& e : online[i]) out << "\n  online " << describe(e);
      for (const auto& e : batch.events[i]) out << "\n  batch  " << describe(e);
      return out.str();
    }
  if (monitor.trace().marks() != batch.model.marks()) return "marks differ";
  if (monitor.ledger() != batch.ledgers.back()) return "ledgers differ";
  return "";
}

} // namespace replay
