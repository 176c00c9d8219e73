#pragma once

#include "normlog/evaluator.hpp"
#include "normlog/norms.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace normlog {

enum class RecordStatus { Open, Repaired, Punished, RepairedAndPunished };

struct ViolationRecord {
  std::string norm;
  std::string agent;
  ViolationKind kind = ViolationKind::Act; // Act or Omission
  TimeValue t_begin = 0;
  TimeValue t_viol = 0;
  RecordStatus status = RecordStatus::Open;
  std::optional<TimeValue> t_repair, t_punish;

  bool operator==(const ViolationRecord&) const = default;
};

enum class EventType {
  NormActivated,
  NormDeactivated,
  ObligationActivated,
  ObligationDischarged,
  ViolationOpened,
  ViolationResolved,
};

struct Event {
  EventType type;
  TimeValue at = 0;
  std::string norm;
  std::string agent;
  TimeValue t_begin = 0;
  std::optional<ViolationRecord> record;
  std::optional<Resolution> via; // resolved events: empty when repaired and punished at once
  std::string deadline;

  bool operator==(const Event&) const = default;
};

const char* to_string(EventType type);
const char* to_string(RecordStatus status);
const char* to_string(ViolationKind kind);

/// Live norm instance: one spec under one assignment of agents, started at `tb`.
struct Instance {
  std::size_t unit;
  std::string norm;
  std::string agent;
  NormKind kind;
  TimeValue tb;
  bool active = true;
  std::size_t credits = 0;
  bool pending = false;
  Assignment tau; // tb plus resolved imports
};

/// Norm lifecycle over one branch of a model. Copying the engine forks the
/// branch state; the instantiated specs are shared.
class NormEngine {
public:
  NormEngine(const NormSet& specs, std::vector<std::string> agents);
  NormEngine(const NormEngine& other);
  NormEngine& operator=(const NormEngine& other);
  NormEngine(NormEngine&&) = default;
  NormEngine& operator=(NormEngine&&) = default;

  enum class Phase { Remedies, Resolutions, Deactivations, Marks, Probes, Activations };
  static constexpr Phase phases[] = {Phase::Remedies, Phase::Resolutions, Phase::Deactivations,
                                     Phase::Marks,    Phase::Probes,      Phase::Activations};

  /// Runs one phase at `s`; all earlier states of the branch must have been
  /// processed by this engine. Evaluation uses the horizon depth(s).
  void run(Phase phase, Model& model, StateId s, Oracle* oracle = nullptr);
  /// All phases in order.
  void step(Model& model, StateId s, Oracle* oracle = nullptr);

  /// Events produced since the last call, in bucket order.
  std::vector<Event> take_events();

  std::vector<ViolationRecord> ledger() const;
  const std::vector<Instance>& instances() const { return instances_; }
  /// The spec an instance runs, with agents substituted.
  const NormSpec& unit_spec(std::size_t unit) const { return shared_->units.at(unit).spec; }
  std::uint64_t evaluations() const { return evaluations_ + (ev_ ? ev_->evaluations() : 0); }

  /// Vocabulary the instantiated specs mention.
  std::set<std::string> atoms() const;
  const std::vector<std::string>& agents() const { return shared_->agents; }

private:
  struct Unit {
    NormSpec spec; // agent variables renamed to concrete agents
    std::vector<std::pair<std::string, std::string>> imports; // (norm, subject)
    // Probes over tb, tv, tr.
    StateFormula fresh = f::constant(false), repaired = f::constant(false),
                 punished = f::constant(false), acted = f::constant(false);
  };
  struct Shared {
    std::vector<std::string> agents;
    std::vector<Unit> units;
  };
  struct Record {
    ViolationRecord rec;
    std::size_t unit;
    Assignment tau;
  };

  Evaluator& evaluator(const Model& model, StateId s, Oracle* oracle);
  void invalidate();
  bool eval(const Model& model, StateId s, Oracle* oracle, const StateFormula& phi, const Assignment& tau);
  void emit(Event e);
  void mark(Model& model, SpecialKind kind, const std::string& norm, const std::string& agent, StateId s);

  void remedies(Model& model, StateId s, Oracle* oracle);
  void resolutions(Model& model, StateId s, Oracle* oracle);
  void deactivations(Model& model, StateId s, Oracle* oracle);
  void marks(Model& model, StateId s, Oracle* oracle);
  void probe(Model& model, StateId s, Oracle* oracle, const Instance& inst);
  void probes(Model& model, StateId s, Oracle* oracle);
  void activations(Model& model, StateId s, Oracle* oracle);
  std::optional<Assignment> resolve_imports(const Unit& unit) const;

  std::shared_ptr<const Shared> shared_;
  std::vector<Instance> instances_;
  std::vector<Record> records_;
  std::vector<bool> alpha_prev_;
  std::vector<Event> events_;
  std::uint64_t evaluations_ = 0;

  std::unique_ptr<Evaluator> ev_;
  StateId ev_state_ = 0;
};

/// Batch annotation with the per-branch ledgers kept.
struct Annotation {
  Model model;
  std::vector<std::vector<Event>> events;      // per state
  std::vector<std::vector<ViolationRecord>> ledgers; // per state, as of that state
};

Annotation annotate(const NormSet& specs, const Model& model);

} // namespace normlog
