#include "normlog/monitor.hpp"

#include "normlog/error.hpp"

#include "overloaded.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace normlog {

using nlohmann::json;

namespace {

bool trackable(const StateFormula& phi);

bool trackable(const PathFormula& alpha) {
  return std::visit(overloaded{
                        [](const pf::Lift& n) { return trackable(n.formula); },
                        [](const pf::Not& n) { return trackable(n.operand); },
                        [](const pf::And& n) { return trackable(n.lhs) && trackable(n.rhs); },
                        [](const pf::Freeze& n) { return trackable(n.body); },
                        [](const pf::Next& n) { return n.direction == Direction::Backward && trackable(n.operand); },
                        [](const pf::Finally& n) {
                          return n.direction == Direction::Backward && trackable(n.operand);
                        },
                        [](const pf::Globally& n) {
                          return n.direction == Direction::Backward && trackable(n.operand);
                        },
                        [](const pf::Until& n) {
                          return n.direction == Direction::Backward && trackable(n.lhs) && trackable(n.rhs);
                        },
                        [](const auto&) { return false; },
                    },
                    alpha.node().value);
}

// Conditions whose value at a state never changes once the state exists:
// no look-ahead, no marks, no modalities.
bool trackable(const StateFormula& phi) {
  return std::visit(overloaded{
                        [](const sf::Constant&) { return true; },
                        [](const sf::Atom&) { return true; },
                        [](const sf::Less&) { return true; },
                        [](const sf::Equal&) { return true; },
                        [](const sf::Not& n) { return trackable(n.operand); },
                        [](const sf::And& n) { return trackable(n.lhs) && trackable(n.rhs); },
                        [](const sf::Freeze& n) { return trackable(n.body); },
                        [](const sf::Exists& n) { return trackable(n.operand); },
                        [](const sf::All& n) { return trackable(n.operand); },
                        [](const auto&) { return false; },
                    },
                    phi.node().value);
}

std::set<std::string> string_set(const json& j, const std::string& what) {
  if (!j.is_array()) throw NormError(what + " must be a list of strings");
  std::set<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) throw NormError(what + " must be a list of strings");
    out.insert(x.get<std::string>());
  }
  return out;
}

} // namespace

// Running answers for the modalities on a single growing branch. State ids
// coincide with depths. Values at positions before the head are final
// because tracked conditions cannot look ahead; the one exception, the
// "somewhere false" part of the agency operator, triggers a rebuild.
class TraceOracle : public Oracle {
public:
  explicit TraceOracle(const Model& model) : model_(model) {}

  std::uint64_t work() const { return work_; }

  void advance() {
    const std::size_t h = head();
    Evaluator ev(model_);
    std::set<const History*> flipped;
    for (auto& [_, hist] : histories_) {
      bool v = ev.eval_state(h, hist.phi, hist.tau);
      hist.value.push_back(v);
      if (!v && !hist.ever_false) {
        hist.ever_false = true;
        flipped.insert(&hist);
      }
    }
    work_ += ev.evaluations();
    for (auto& [_, t] : trackers_) {
      if (flipped.count(t.hist)) rebuild(t);
      else if (h > 0 && h - 1 >= t.tb) finalize(t, h - 1);
    }
  }

  std::optional<bool> stit(StateId s, const std::string& agent, const StateFormula& phi,
                           const Assignment& tau) override {
    const std::size_t h = head();
    if (model_.depth(s) >= h) return false;
    ++work_;
    StateId child = s + 1;
    if (!model_.label(child).count(agent)) return false;
    if (auto* sp = std::get_if<sf::Special>(&phi.node().value)) {
      if (!model_.has_norm(sp->norm) || !model_.has_agent(sp->agent)) return std::nullopt;
      const auto& marked = model_.marked_states(sp->kind, sp->norm, sp->agent);
      return marked.count(child) > 0 && marked.size() < h + 1;
    }
    if (!trackable(phi)) return std::nullopt;
    const History& hist = history(phi, tau);
    return hist.value[child] && hist.ever_false;
  }

  std::optional<bool> violation(StateId s, ViolationKind kind, const std::string& norm,
                                const std::string& agent, TimeValue tb, TimeValue tv, const StateFormula& phi,
                                const Assignment& tau) override {
    if (!trackable(phi) || !model_.has_norm(norm) || !model_.has_agent(agent)) return std::nullopt;
    if (!(tb <= tv && tv <= model_.depth(s))) return false;
    ++work_;
    Tracker& t = tracker(norm, agent, tb, phi, tau);
    if (tv < head()) return (kind == ViolationKind::Act ? t.act : t.omission)[tv - tb] != 0;
    return kind == ViolationKind::Act ? live_act(t) : live_omission(t);
  }

  std::optional<bool> resolved(StateId s, Resolution target, const std::string& norm, const std::string& agent,
                               TimeValue tb, TimeValue tv, TimeValue tr, const StateFormula& phi,
                               const Assignment& tau) override {
    if (!trackable(phi) || !model_.has_norm(norm) || !model_.has_agent(agent)) return std::nullopt;
    if (!(tb <= tv && tv <= tr && tr < model_.depth(s))) return false;
    ++work_;
    Tracker& t = tracker(norm, agent, tb, phi, tau);
    if (!t.act[tv - tb] && !t.omission[tv - tb]) return false;
    SpecialKind kind = target == Resolution::Repair ? SpecialKind::Repair : SpecialKind::Punish;
    const auto& marked = model_.marked_states(kind, norm, agent);
    if (marked.size() >= head() + 1) return false;
    auto acted_at = [&](StateId child) { return model_.label(child).count(agent) > 0; };
    if (!marked.count(tr + 1) || !acted_at(tr + 1)) return false;
    std::size_t done = 0;
    for (auto it = marked.lower_bound(tv + 1); it != marked.end() && *it <= tr + 1; ++it)
      if (acted_at(*it)) ++done;
    return done >= t.either_prefix[tv - tb];
  }

private:
  struct History {
    StateFormula phi;
    Assignment tau;
    std::vector<char> value;
    bool ever_false = false;
  };

  struct Tracker {
    std::string norm, agent;
    TimeValue tb;
    History* hist;
    // Over the finalized positions [tb, next).
    TimeValue next;
    bool act_broken = false, omission_broken = false, acted = false;
    TimeValue anchor;
    long deadlines = 0, handled = 0;
    std::vector<char> act, omission;
    std::vector<std::size_t> either_prefix;
  };

  std::size_t head() const { return model_.size() - 1; }

  static std::string key_of(const StateFormula& phi, const Assignment& tau) {
    std::string key = render(phi);
    for (const auto& v : free_time_variables(phi)) key += "|" + v + "=" + std::to_string(tau.get(v));
    return key;
  }

  History& history(const StateFormula& phi, const Assignment& tau) {
    std::string key = key_of(phi, tau);
    auto it = histories_.find(key);
    if (it != histories_.end()) return it->second;
    History hist{phi, tau, {}, false};
    Evaluator ev(model_);
    for (StateId s = 0; s <= head(); ++s) {
      hist.value.push_back(ev.eval_state(s, phi, tau));
      hist.ever_false = hist.ever_false || !hist.value.back();
    }
    work_ += ev.evaluations();
    return histories_.emplace(key, std::move(hist)).first->second;
  }

  Tracker& tracker(const std::string& norm, const std::string& agent, TimeValue tb, const StateFormula& phi,
                   const Assignment& tau) {
    std::string key = norm + "|" + agent + "|" + std::to_string(tb) + "|" + key_of(phi, tau);
    auto it = trackers_.find(key);
    if (it != trackers_.end()) return it->second;
    Tracker t;
    t.norm = norm;
    t.agent = agent;
    t.tb = tb;
    t.hist = &history(phi, tau);
    rebuild(t);
    return trackers_.emplace(key, std::move(t)).first->second;
  }

  bool mark_at(SpecialKind kind, const Tracker& t, std::size_t k) const {
    return model_.marked(kind, t.norm, t.agent, k);
  }

  // Agency of the tracked agent over the condition at position k.
  bool agency(const Tracker& t, std::size_t k) const {
    return k < head() && model_.label(k + 1).count(t.agent) && t.hist->value[k + 1] && t.hist->ever_false;
  }

  bool act_at(const Tracker& t, std::size_t k) const {
    bool v = mark_at(SpecialKind::Violation, t, k);
    bool phi = t.hist->value[k];
    return k > 0 && v && agency(t, k - 1) && !t.act_broken && !(phi && !v);
  }

  bool omission_base(const Tracker& t, std::size_t k) const {
    bool v = mark_at(SpecialKind::Violation, t, k), d = mark_at(SpecialKind::Deadline, t, k);
    return v && d && !t.omission_broken && !(v && t.hist->value[k]) && !t.acted;
  }

  bool live_act(const Tracker& t) const { return act_at(t, head()); }

  bool live_omission(const Tracker& t) const {
    const std::size_t h = head();
    return omission_base(t, h) && t.deadlines + mark_at(SpecialKind::Deadline, t, h) > t.handled;
  }

  void finalize(Tracker& t, std::size_t k) {
    ++work_;
    bool v = mark_at(SpecialKind::Violation, t, k), d = mark_at(SpecialKind::Deadline, t, k);
    bool phi = t.hist->value[k], e = agency(t, k);
    bool act = act_at(t, k);
    // An action at k itself counts against the omission once k has a successor.
    bool omission = omission_base(t, k) && t.deadlines + d - t.handled > (e ? 1 : 0);
    t.act.push_back(act);
    t.omission.push_back(omission);
    t.either_prefix.push_back((t.either_prefix.empty() ? 0 : t.either_prefix.back()) + (act || omission));
    t.act_broken = t.act_broken || (phi && !v);
    t.omission_broken = t.omission_broken || (v && phi);
    t.deadlines += d;
    t.handled += omission || e;
    if (d) {
      t.anchor = k;
      t.acted = false;
    } else if (e && k > t.anchor) {
      t.acted = true;
    }
    t.next = k + 1;
  }

  void rebuild(Tracker& t) {
    t.next = t.tb;
    t.anchor = t.tb;
    t.act_broken = t.omission_broken = t.acted = false;
    t.deadlines = t.handled = 0;
    t.act.clear();
    t.omission.clear();
    t.either_prefix.clear();
    for (std::size_t k = t.tb; k < head(); ++k) finalize(t, k);
  }

  const Model& model_;
  std::uint64_t work_ = 0;
  std::map<std::string, History> histories_;
  std::map<std::string, Tracker> trackers_;
};

TraceStep parse_trace_step(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw NormError(std::string("malformed trace line: ") + e.what());
  }
  if (!j.is_object()) throw NormError("trace line must be an object");
  for (const auto& [key, _] : j.items())
    if (key != "atoms" && key != "acting") throw NormError("unknown trace field '" + key + "'");
  TraceStep step;
  if (j.contains("atoms")) step.atoms = string_set(j["atoms"], "atoms");
  if (j.contains("acting")) {
    if (!j["acting"].is_object()) throw NormError("acting must map agents to atom lists");
    for (const auto& [agent, atoms] : j["acting"].items()) step.acting[agent] = string_set(atoms, "acting");
  }
  for (const auto& [agent, atoms] : step.acting)
    for (const auto& a : atoms)
      if (!step.atoms.count(a))
        throw NormError("agent '" + agent + "' brings about '" + a + "', which does not hold");
  return step;
}

std::string dump_trace_step(const TraceStep& step) {
  json j;
  j["atoms"] = step.atoms;
  j["acting"] = json::object();
  for (const auto& [agent, atoms] : step.acting) j["acting"][agent] = atoms;
  return j.dump();
}

std::vector<TraceStep> load_trace(std::string_view jsonl) {
  std::vector<TraceStep> out;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(parse_trace_step(line));
  return out;
}

std::vector<TraceStep> load_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NormError("cannot open trace file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_trace(ss.str());
}

Model trace_model(const std::vector<TraceStep>& trace, const std::vector<std::string>& agents) {
  if (trace.empty()) throw NormError("empty trace");
  if (!trace[0].acting.empty()) throw NormError("nobody acts into the first state");
  Model m("s0", trace[0].atoms);
  for (const auto& a : agents) m.declare_agent(a);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    std::set<std::string> label;
    for (const auto& [agent, _] : trace[i].acting) label.insert(agent);
    m.add_state("s" + std::to_string(i), i - 1, label, trace[i].atoms);
  }
  return m;
}

std::string record_json(const ViolationRecord& r) {
  json j{{"norm", r.norm},     {"agent", r.agent},   {"kind", to_string(r.kind)},
         {"tBegin", r.t_begin}, {"tViol", r.t_viol}, {"status", to_string(r.status)}};
  j["tRepair"] = r.t_repair ? json(*r.t_repair) : json(nullptr);
  j["tPunish"] = r.t_punish ? json(*r.t_punish) : json(nullptr);
  return j.dump();
}

std::string event_json(const Event& e) {
  json j{{"type", to_string(e.type)}, {"at", e.at}, {"norm", e.norm}, {"agent", e.agent}, {"tBegin", e.t_begin}};
  if (e.record) j["record"] = json::parse(record_json(*e.record));
  if (e.via) j["via"] = *e.via == Resolution::Repair ? "repair" : "punish";
  else if (e.type == EventType::ViolationResolved) j["via"] = "both";
  if (!e.deadline.empty()) j["deadline"] = e.deadline;
  return j.dump();
}

namespace {

std::vector<std::string> monitor_agents(const NormSet& specs) {
  if (specs.agents.empty()) throw NormError("the norm file must list the agents to monitor");
  return specs.agents;
}

} // namespace

Monitor::Monitor(NormSet specs) : specs_(std::move(specs)), engine_(specs_, monitor_agents(specs_)) {
  vocabulary_.insert(specs_.atoms.begin(), specs_.atoms.end());
  for (const auto& a : engine_.atoms()) vocabulary_.insert(a);
}

Monitor::~Monitor() = default;

const Model& Monitor::trace() const {
  if (!model_) throw NormError("the trace is empty");
  return *model_;
}

std::uint64_t Monitor::evaluations() const { return engine_.evaluations() + (oracle_ ? oracle_->work() : 0); }

std::vector<Event> Monitor::append_state(const TraceStep& step) {
  for (const auto& a : step.atoms)
    if (!vocabulary_.count(a)) throw NormError("unknown atom '" + a + "'");
  for (const auto& [agent, atoms] : step.acting) {
    if (std::find(specs_.agents.begin(), specs_.agents.end(), agent) == specs_.agents.end())
      throw NormError("unknown agent '" + agent + "'");
    for (const auto& a : atoms)
      if (!step.atoms.count(a)) throw NormError("agent '" + agent + "' brings about '" + a + "', which does not hold");
  }
  StateId head;
  if (!model_) {
    model_ = std::make_unique<Model>(trace_model({step}, specs_.agents));
    for (const auto& n : specs_.norms) model_->declare_norm(n.id);
    oracle_ = std::make_unique<TraceOracle>(*model_);
    head = model_->root();
  } else {
    std::set<std::string> label;
    for (const auto& [agent, _] : step.acting) label.insert(agent);
    head = model_->add_state("s" + std::to_string(model_->size()), model_->size() - 1, label, step.atoms);
  }
  oracle_->advance();
  engine_.step(*model_, head, oracle_.get());
  return engine_.take_events();
}

std::vector<ActiveObligation> Monitor::active_obligations(const std::string& agent) const {
  std::map<std::string, ActiveObligation> earliest;
  for (const auto& inst : engine_.instances()) {
    if (inst.agent != agent || inst.kind != NormKind::Obligation || !inst.active || !inst.pending) continue;
    auto it = earliest.find(inst.norm);
    if (it == earliest.end() || inst.tb < it->second.t_begin)
      earliest[inst.norm] =
          ActiveObligation{inst.norm, inst.agent, inst.tb, render(*engine_.unit_spec(inst.unit).deadline)};
  }
  std::vector<ActiveObligation> out;
  for (auto& [_, o] : earliest) out.push_back(o);
  return out;
}

std::optional<bool> Monitor::obliged_strict(const std::string& norm, const std::string& agent) {
  const Instance* first = nullptr;
  for (const auto& inst : engine_.instances())
    if (inst.norm == norm && inst.agent == agent && inst.active && inst.kind == NormKind::Obligation &&
        (!first || inst.tb < first->tb))
      first = &inst;
  if (!first) return std::nullopt;
  const auto& spec = engine_.unit_spec(first->unit);
  Evaluator ev(*model_, std::nullopt, oracle_.get());
  StateFormula duty = f::obliged(norm, agent, TimeTerm::var("tb"), spec.condition, *spec.deadline);
  return ev.eval_state(model_->size() - 1, duty, first->tau);
}

} // namespace normlog
