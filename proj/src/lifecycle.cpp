#include "normlog/lifecycle.hpp"

#include "normlog/error.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace normlog {

namespace {

int bucket(EventType t) {
  switch (t) {
  case EventType::NormActivated:
  case EventType::NormDeactivated: return 0;
  case EventType::ObligationActivated:
  case EventType::ObligationDischarged: return 1;
  case EventType::ViolationOpened: return 2;
  case EventType::ViolationResolved: return 3;
  }
  return 4;
}

RecordStatus status_of(bool repaired, bool punished) {
  if (repaired && punished) return RecordStatus::RepairedAndPunished;
  if (repaired) return RecordStatus::Repaired;
  if (punished) return RecordStatus::Punished;
  return RecordStatus::Open;
}

TimeTerm var(const char* v) { return TimeTerm::var(v); }

} // namespace

const char* to_string(EventType type) {
  switch (type) {
  case EventType::NormActivated: return "normActivated";
  case EventType::NormDeactivated: return "normDeactivated";
  case EventType::ObligationActivated: return "obligationActivated";
  case EventType::ObligationDischarged: return "obligationDischarged";
  case EventType::ViolationOpened: return "violationOpened";
  case EventType::ViolationResolved: return "violationResolved";
  }
  return "?";
}

const char* to_string(RecordStatus status) {
  switch (status) {
  case RecordStatus::Open: return "open";
  case RecordStatus::Repaired: return "repaired";
  case RecordStatus::Punished: return "punished";
  case RecordStatus::RepairedAndPunished: return "repairedAndPunished";
  }
  return "?";
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
  case ViolationKind::Act: return "act";
  case ViolationKind::Omission: return "omission";
  case ViolationKind::Either: return "either";
  }
  return "?";
}

NormEngine::NormEngine(const NormSet& specs, std::vector<std::string> agents) {
  validate(specs);
  if (agents.empty()) throw NormError("no agents to instantiate norms over");
  auto shared = std::make_shared<Shared>();
  shared->agents = std::move(agents);
  for (const auto& spec : specs.norms) {
    for (const auto& binding : role_bindings(spec, shared->agents)) {
      Unit u;
      u.spec = instantiate(spec, binding);
      for (StateFormula* f : {&u.spec.activation, &u.spec.deactivation, &u.spec.condition, &u.spec.repair,
                              &u.spec.punishment})
        *f = normalize(*f);
      if (u.spec.deadline) u.spec.deadline = normalize(*u.spec.deadline);
      for (const auto& m : spec.imports) {
        std::string subject = u.spec.agent;
        std::vector<StateFormula> fields{u.spec.activation, u.spec.deactivation, u.spec.condition,
                                         u.spec.repair, u.spec.punishment};
        if (u.spec.deadline) fields.push_back(*u.spec.deadline);
        bool found = false;
        for (const auto& f : fields) {
          for (const auto& [norm, agent] : norm_references(f))
            if (norm == m) {
              subject = agent;
              found = true;
              break;
            }
          if (found) break;
        }
        u.imports.emplace_back(m, subject);
      }
      const auto& n = u.spec;
      ViolationKind kind = n.kind == NormKind::Obligation ? ViolationKind::Omission : ViolationKind::Act;
      u.fresh = f::violation(kind, n.id, n.agent, var("tb"), var("tv"), n.condition);
      u.repaired = f::resolved(Resolution::Repair, n.id, n.agent, var("tb"), var("tv"), var("tr"), n.condition);
      u.punished = f::resolved(Resolution::Punish, n.id, n.agent, var("tb"), var("tv"), var("tr"), n.condition);
      u.acted = f::stit(n.agent, n.condition);
      shared->units.push_back(std::move(u));
    }
  }
  alpha_prev_.assign(shared->units.size(), false);
  shared_ = std::move(shared);
}

NormEngine::NormEngine(const NormEngine& other)
    : shared_(other.shared_), instances_(other.instances_), records_(other.records_),
      alpha_prev_(other.alpha_prev_), events_(other.events_), evaluations_(other.evaluations()) {}

NormEngine& NormEngine::operator=(const NormEngine& other) {
  if (this != &other) {
    NormEngine copy(other);
    *this = std::move(copy);
  }
  return *this;
}

std::set<std::string> NormEngine::atoms() const {
  std::set<std::string> out;
  for (const auto& u : shared_->units) {
    std::vector<StateFormula> fields{u.spec.activation, u.spec.deactivation, u.spec.condition,
                                     u.spec.repair, u.spec.punishment};
    if (u.spec.deadline) fields.push_back(*u.spec.deadline);
    for (const auto& f : fields)
      for (auto& a : atom_keys(f)) out.insert(a);
  }
  return out;
}

void NormEngine::invalidate() {
  if (ev_) evaluations_ += ev_->evaluations();
  ev_.reset();
}

Evaluator& NormEngine::evaluator(const Model& model, StateId s, Oracle* oracle) {
  if (!ev_ || ev_state_ != s) {
    invalidate();
    ev_ = std::make_unique<Evaluator>(model, model.depth(s), oracle);
    ev_state_ = s;
  }
  return *ev_;
}

bool NormEngine::eval(const Model& model, StateId s, Oracle* oracle, const StateFormula& phi,
                      const Assignment& tau) {
  return evaluator(model, s, oracle).eval_state(s, phi, tau);
}

void NormEngine::emit(Event e) { events_.push_back(std::move(e)); }

void NormEngine::mark(Model& model, SpecialKind kind, const std::string& norm, const std::string& agent,
                      StateId s) {
  if (model.marked(kind, norm, agent, s)) return;
  model.mark(kind, norm, agent, s);
  invalidate();
}

void NormEngine::run(Phase phase, Model& model, StateId s, Oracle* oracle) {
  // Other engines may have changed marks since the last phase.
  invalidate();
  switch (phase) {
  case Phase::Remedies: remedies(model, s, oracle); break;
  case Phase::Resolutions: resolutions(model, s, oracle); break;
  case Phase::Deactivations: deactivations(model, s, oracle); break;
  case Phase::Marks: marks(model, s, oracle); break;
  case Phase::Probes: probes(model, s, oracle); break;
  case Phase::Activations: activations(model, s, oracle); break;
  }
  invalidate();
}

void NormEngine::step(Model& model, StateId s, Oracle* oracle) {
  for (Phase p : phases) run(p, model, s, oracle);
}

void NormEngine::remedies(Model& model, StateId s, Oracle* oracle) {
  if (model.depth(s) == 0) return;
  std::vector<std::tuple<SpecialKind, std::string, std::string>> out;
  for (const auto& r : records_) {
    if (!model.label(s).count(r.rec.agent)) continue;
    const auto& spec = shared_->units[r.unit].spec;
    if (!r.rec.t_repair && eval(model, s, oracle, spec.repair, r.tau))
      out.emplace_back(SpecialKind::Repair, r.rec.norm, r.rec.agent);
    if (!r.rec.t_punish && eval(model, s, oracle, spec.punishment, r.tau))
      out.emplace_back(SpecialKind::Punish, r.rec.norm, r.rec.agent);
  }
  for (const auto& [kind, norm, agent] : out) mark(model, kind, norm, agent, s);
}

void NormEngine::resolutions(Model& model, StateId s, Oracle* oracle) {
  const TimeValue d = model.depth(s);
  if (d == 0) return;
  for (auto& r : records_) {
    const auto& unit = shared_->units[r.unit];
    Assignment tau = r.tau.bind("tv", r.rec.t_viol).bind("tr", d - 1);
    bool repaired = !r.rec.t_repair && eval(model, s, oracle, unit.repaired, tau);
    bool punished = !r.rec.t_punish && eval(model, s, oracle, unit.punished, tau);
    if (repaired) r.rec.t_repair = d - 1;
    if (punished) r.rec.t_punish = d - 1;
    r.rec.status = status_of(r.rec.t_repair.has_value(), r.rec.t_punish.has_value());
    // One event per record and step; `via` stays empty when both resolve at once.
    if (repaired || punished) {
      std::optional<Resolution> via;
      if (!punished) via = Resolution::Repair;
      if (!repaired) via = Resolution::Punish;
      emit(Event{EventType::ViolationResolved, d, r.rec.norm, r.rec.agent, r.rec.t_begin, r.rec, via, {}});
    }
  }
}

void NormEngine::deactivations(Model& model, StateId s, Oracle* oracle) {
  const TimeValue d = model.depth(s);
  for (auto& inst : instances_) {
    if (!inst.active || inst.tb >= d) continue;
    if (!eval(model, s, oracle, shared_->units[inst.unit].spec.deactivation, inst.tau)) continue;
    inst.active = false;
    emit(Event{EventType::NormDeactivated, d, inst.norm, inst.agent, inst.tb, {}, {}, {}});
    if (inst.pending) {
      inst.pending = false;
      emit(Event{EventType::ObligationDischarged, d, inst.norm, inst.agent, inst.tb, {}, {}, {}});
    }
  }
}

void NormEngine::marks(Model& model, StateId s, Oracle* oracle) {
  const TimeValue d = model.depth(s);
  struct Step {
    std::size_t index;
    bool condition, credit, deadline;
  };
  std::vector<Step> steps;
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    const auto& inst = instances_[i];
    if (!inst.active || inst.tb >= d) continue;
    const auto& unit = shared_->units[inst.unit];
    Step st{i, eval(model, s, oracle, unit.spec.condition, inst.tau), false, false};
    if (inst.kind == NormKind::Obligation) {
      StateId parent = *model.parent(s);
      st.credit = evaluator(model, s, oracle).eval_state(parent, unit.acted, inst.tau);
      st.deadline = eval(model, s, oracle, *unit.spec.deadline, inst.tau);
    }
    steps.push_back(st);
  }
  for (const auto& st : steps) {
    auto& inst = instances_[st.index];
    if (inst.kind == NormKind::Prohibition) {
      if (st.condition) mark(model, SpecialKind::Violation, inst.norm, inst.agent, s);
      continue;
    }
    if (st.credit) {
      ++inst.credits;
      if (inst.pending) {
        inst.pending = false;
        emit(Event{EventType::ObligationDischarged, d, inst.norm, inst.agent, inst.tb, {}, {}, {}});
      }
    }
    if (!st.deadline) continue;
    mark(model, SpecialKind::Deadline, inst.norm, inst.agent, s);
    if (inst.credits > 0) --inst.credits;
    else if (!st.condition) mark(model, SpecialKind::Violation, inst.norm, inst.agent, s);
    if (inst.credits == 0) {
      inst.pending = true;
      emit(Event{EventType::ObligationActivated, d, inst.norm, inst.agent, inst.tb, {}, {},
                 render(*shared_->units[inst.unit].spec.deadline)});
    }
  }
}

void NormEngine::probe(Model& model, StateId s, Oracle* oracle, const Instance& inst) {
  const TimeValue d = model.depth(s);
  const auto& unit = shared_->units[inst.unit];
  if (!eval(model, s, oracle, unit.fresh, inst.tau.bind("tv", d))) return;
  ViolationKind kind = inst.kind == NormKind::Obligation ? ViolationKind::Omission : ViolationKind::Act;
  for (const auto& r : records_)
    if (r.rec.norm == inst.norm && r.rec.agent == inst.agent && r.rec.kind == kind && r.rec.t_begin == inst.tb &&
        r.rec.t_viol == d)
      return;
  ViolationRecord rec{inst.norm, inst.agent, kind, inst.tb, d, RecordStatus::Open, {}, {}};
  records_.push_back(Record{rec, inst.unit, inst.tau});
  emit(Event{EventType::ViolationOpened, d, inst.norm, inst.agent, inst.tb, rec, {}, {}});
}

void NormEngine::probes(Model& model, StateId s, Oracle* oracle) {
  const TimeValue d = model.depth(s);
  std::vector<Instance> current;
  for (const auto& inst : instances_)
    if (inst.active && inst.tb < d) current.push_back(inst);
  for (const auto& inst : current) probe(model, s, oracle, inst);
}

std::optional<Assignment> NormEngine::resolve_imports(const Unit& unit) const {
  Assignment tau;
  for (const auto& [norm, subject] : unit.imports) {
    auto it = std::find_if(instances_.rbegin(), instances_.rend(), [&](const Instance& i) {
      return i.norm == norm && i.agent == subject;
    });
    if (it == instances_.rend()) return std::nullopt;
    tau.set(import_variable(norm), it->tb);
  }
  return tau;
}

void NormEngine::activations(Model& model, StateId s, Oracle* oracle) {
  const TimeValue d = model.depth(s);
  const auto& units = shared_->units;
  std::vector<bool> alpha_now(units.size(), false), started(units.size(), false);
  for (bool again = true; again;) {
    again = false;
    std::vector<std::pair<std::size_t, Assignment>> fresh;
    for (std::size_t u = 0; u < units.size(); ++u) {
      if (started[u]) continue;
      auto tau = resolve_imports(units[u]);
      alpha_now[u] = tau && eval(model, s, oracle, units[u].spec.activation, *tau);
      if (!alpha_now[u]) continue;
      bool active = std::any_of(instances_.begin(), instances_.end(),
                                [&](const Instance& i) { return i.unit == u && i.active; });
      if (!active || !alpha_prev_[u]) fresh.emplace_back(u, tau->bind("tb", d));
    }
    for (auto& [u, tau] : fresh) {
      const auto& spec = units[u].spec;
      started[u] = true;
      again = true;
      Instance inst{u, spec.id, spec.agent, spec.kind, d, true, 0, false, tau};
      emit(Event{EventType::NormActivated, d, spec.id, spec.agent, d, {}, {}, {}});
      if (spec.kind == NormKind::Obligation) {
        inst.pending = true;
        emit(Event{EventType::ObligationActivated, d, spec.id, spec.agent, d, {}, {}, render(*spec.deadline)});
      }
      instances_.push_back(inst);
    }
    for (auto& [u, tau] : fresh) {
      const auto& spec = units[u].spec;
      if (spec.kind == NormKind::Prohibition && eval(model, s, oracle, spec.condition, tau))
        mark(model, SpecialKind::Violation, spec.id, spec.agent, s);
    }
    std::vector<Instance> born(instances_.end() - static_cast<std::ptrdiff_t>(fresh.size()), instances_.end());
    for (const auto& inst : born)
      if (inst.kind == NormKind::Prohibition) probe(model, s, oracle, inst);
  }
  alpha_prev_ = alpha_now;
}

std::vector<Event> NormEngine::take_events() {
  std::vector<Event> out = std::move(events_);
  events_.clear();
  std::stable_sort(out.begin(), out.end(),
                   [](const Event& a, const Event& b) { return bucket(a.type) < bucket(b.type); });
  return out;
}

std::vector<ViolationRecord> NormEngine::ledger() const {
  std::vector<ViolationRecord> out;
  for (const auto& r : records_) out.push_back(r.rec);
  std::stable_sort(out.begin(), out.end(), [](const ViolationRecord& a, const ViolationRecord& b) {
    return std::tie(a.t_viol, a.norm, a.agent) < std::tie(b.t_viol, b.norm, b.agent);
  });
  return out;
}

namespace {

// Same tree without marks, states added parent-first.
Model unmarked_copy(const Model& in, std::vector<StateId>& order) {
  Model out(in.name(in.root()), in.atoms(in.root()));
  for (const auto& a : in.agents()) out.declare_agent(a);
  for (const auto& n : in.norms()) out.declare_norm(n);
  std::vector<StateId> map(in.size());
  order = {in.root()};
  for (std::size_t i = 0; i < order.size(); ++i) {
    StateId s = order[i];
    for (StateId c : in.children(s)) {
      map[c] = out.add_state(in.name(c), map[s], in.label(c), in.atoms(c));
      order.push_back(c);
    }
  }
  for (auto& s : order) s = map[s];
  return out;
}

} // namespace

Annotation annotate(const NormSet& specs, const Model& model) {
  validate(specs);
  std::vector<StateId> order;
  Annotation out{unmarked_copy(model, order), {}, {}};
  Model& m = out.model;
  std::vector<std::string> agents = specs.agents;
  if (agents.empty()) agents.assign(m.agents().begin(), m.agents().end());
  for (const auto& a : agents)
    if (!m.has_agent(a)) throw NormError("unknown agent '" + a + "'");
  for (const auto& n : specs.norms) m.declare_norm(n.id);

  NormEngine proto(specs, agents);
  // Instantiation yields atoms a short model need not contain, so only the
  // predicate has to be known.
  auto predicate = [](const std::string& atom) { return atom.substr(0, atom.find('(')); };
  std::set<std::string> vocabulary;
  for (const auto& a : specs.atoms) vocabulary.insert(predicate(a));
  for (StateId s = 0; s < m.size(); ++s)
    for (const auto& a : m.atoms(s)) vocabulary.insert(predicate(a));
  for (const auto& a : proto.atoms())
    if (!vocabulary.count(predicate(a))) throw NormError("unknown atom '" + a + "'");

  std::vector<std::optional<NormEngine>> engines(m.size());
  out.events.resize(m.size());
  out.ledgers.resize(m.size());
  // Siblings share a horizon, so each phase runs across a whole level
  // before the next one starts.
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo;
    while (hi < order.size() && m.depth(order[hi]) == m.depth(order[lo])) ++hi;
    for (std::size_t i = lo; i < hi; ++i) {
      StateId s = order[i];
      auto parent = m.parent(s);
      engines[s].emplace(parent ? *engines[*parent] : proto);
    }
    for (auto phase : NormEngine::phases)
      for (std::size_t i = lo; i < hi; ++i) engines[order[i]]->run(phase, m, order[i]);
    for (std::size_t i = lo; i < hi; ++i) {
      StateId s = order[i];
      out.events[s] = engines[s]->take_events();
      out.ledgers[s] = engines[s]->ledger();
    }
    lo = hi;
  }
  return out;
}

Model derive_annotations(const NormSet& specs, const Model& model) { return annotate(specs, model).model; }

} // namespace normlog
