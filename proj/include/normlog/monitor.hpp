#pragma once

#include "normlog/lifecycle.hpp"
#include "normlog/norms.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace normlog {

/// One observed state: the atoms that hold, and for each agent that acted
/// on the incoming transition the atoms it brought about.
struct TraceStep {
  std::set<std::string> atoms;
  std::map<std::string, std::set<std::string>> acting;

  bool operator==(const TraceStep&) const = default;
};

TraceStep parse_trace_step(std::string_view json_line);
std::string dump_trace_step(const TraceStep& step);
/// One JSON object per non-empty line.
std::vector<TraceStep> load_trace(std::string_view jsonl);
std::vector<TraceStep> load_trace_file(const std::string& path);

/// The trace as a single-branch model with states s0, s1, ...
Model trace_model(const std::vector<TraceStep>& trace, const std::vector<std::string>& agents);

struct ActiveObligation {
  std::string norm;
  std::string agent;
  TimeValue t_begin = 0;
  std::string deadline;
};

std::string event_json(const Event& event);
std::string record_json(const ViolationRecord& record);

class TraceOracle;

/// Online monitor over a growing linear trace. Each append evaluates the
/// norms at the new head only; the modalities are answered from running
/// counters where the condition allows it.
class Monitor {
public:
  explicit Monitor(NormSet specs);
  ~Monitor();
  Monitor(const Monitor&) = delete;
  Monitor& operator=(const Monitor&) = delete;

  std::vector<Event> append_state(const TraceStep& step);

  std::vector<ViolationRecord> ledger() const { return engine_.ledger(); }
  /// Pending obligations of `agent`, the earliest instance per norm.
  std::vector<ActiveObligation> active_obligations(const std::string& agent) const;
  /// The obliged modality itself at the head, for the earliest active
  /// instance of (norm, agent). Usually false on a finite prefix, since the
  /// deadline has not been observed yet.
  std::optional<bool> obliged_strict(const std::string& norm, const std::string& agent);

  bool empty() const { return !model_; }
  const Model& trace() const;
  const NormEngine& engine() const { return engine_; }
  /// Formula evaluations plus counter updates so far.
  std::uint64_t evaluations() const;

private:
  NormSet specs_;
  std::set<std::string> vocabulary_;
  NormEngine engine_;
  std::unique_ptr<Model> model_;
  std::unique_ptr<TraceOracle> oracle_;
};

} // namespace normlog
