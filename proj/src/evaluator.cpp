#include "normlog/evaluator.hpp"

#include "normlog/deontic.hpp"
#include "normlog/error.hpp"

#include "overloaded.hpp"

#include <functional>

namespace normlog {

namespace {

void mix(std::size_t& seed, std::size_t v) { seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2); }

} // namespace

Assignment Assignment::bind(const std::string& variable, TimeValue value) const {
  Assignment out = *this;
  out.bindings_[variable] = value;
  return out;
}

TimeValue Assignment::get(const std::string& variable) const {
  auto it = bindings_.find(variable);
  if (it == bindings_.end()) throw EvalError("unbound time variable '" + variable + "'");
  return it->second;
}

TimeValue eval_time_term(const Assignment& tau, const TimeTerm& term) {
  TimeValue v = tau.get(term.variable);
  switch (term.offset) {
  case TimeTerm::Offset::None: return v;
  case TimeTerm::Offset::Plus: return v + term.constant;
  case TimeTerm::Offset::Minus:
    if (term.constant > v) throw EvalError("negative time in '" + render(term) + "'");
    return v - term.constant;
  }
  return v;
}

std::size_t DeonticKeyHash::operator()(const DeonticKey& k) const {
  std::size_t seed = std::hash<int>()(k.kind);
  mix(seed, k.state);
  mix(seed, std::hash<std::string>()(k.norm));
  mix(seed, std::hash<std::string>()(k.agent));
  mix(seed, k.t1);
  mix(seed, k.t2);
  mix(seed, k.t3);
  mix(seed, std::hash<const void*>()(k.formula));
  mix(seed, std::hash<const void*>()(k.extra));
  for (TimeValue v : k.bindings) mix(seed, v);
  return seed;
}

std::size_t Evaluator::KeyHash::operator()(const Key& k) const {
  std::size_t seed = std::hash<const void*>()(k.node);
  mix(seed, k.state);
  mix(seed, k.position);
  for (TimeValue v : k.bindings) mix(seed, v);
  return seed;
}

Evaluator::Evaluator(const Model& model, std::optional<std::size_t> horizon, Oracle* oracle)
    : model_(model), horizon_(horizon), oracle_(oracle) {}

const std::vector<std::string>& Evaluator::free_vars(const StateFormula& phi) {
  auto it = free_vars_.find(phi.id());
  if (it != free_vars_.end()) return it->second;
  pinned_states_.push_back(phi);
  auto vars = free_time_variables(phi);
  return free_vars_.emplace(phi.id(), std::vector<std::string>(vars.begin(), vars.end())).first->second;
}

const std::vector<std::string>& Evaluator::free_vars(const PathFormula& alpha) {
  auto it = free_vars_.find(alpha.id());
  if (it != free_vars_.end()) return it->second;
  pinned_paths_.push_back(alpha);
  auto vars = free_time_variables(alpha);
  return free_vars_.emplace(alpha.id(), std::vector<std::string>(vars.begin(), vars.end())).first->second;
}

std::vector<TimeValue> Evaluator::values(const std::vector<std::string>& vars,
                                         const Assignment& tau) const {
  std::vector<TimeValue> out;
  out.reserve(vars.size());
  for (const auto& v : vars) out.push_back(tau.get(v));
  return out;
}

std::vector<TimeValue> Evaluator::binding_key(const StateFormula& phi, const Assignment& tau) {
  return values(free_vars(phi), tau);
}

std::optional<bool> Evaluator::lookup(const DeonticKey& key) const {
  auto it = deontic_memo_.find(key);
  if (it == deontic_memo_.end()) return std::nullopt;
  return it->second;
}

void Evaluator::store(DeonticKey key, bool value) { deontic_memo_[std::move(key)] = value; }

const std::vector<StateId>& Evaluator::states_of(StateId end) {
  auto it = path_states_.find(end);
  if (it != path_states_.end()) return it->second;
  return path_states_.emplace(end, path_to(model_, end).states).first->second;
}

std::vector<Path> Evaluator::paths_through(StateId state) const {
  return ::normlog::paths_through(model_, state, horizon_);
}

std::vector<StateId> Evaluator::children(StateId state) const {
  if (horizon_ && model_.depth(state) >= *horizon_) return {};
  return model_.children(state);
}

const StateFormula& Evaluator::special_formula(SpecialKind kind, const std::string& norm,
                                               const std::string& agent) {
  Model::MarkKey key{kind, norm, agent};
  auto it = specials_.find(key);
  if (it == specials_.end()) it = specials_.emplace(key, f::special(kind, norm, agent)).first;
  return it->second;
}

bool Evaluator::special_value(SpecialKind kind, const std::string& norm, const std::string& agent,
                              StateId state) const {
  if (!model_.has_norm(norm)) throw EvalError("unknown norm '" + norm + "'");
  if (!model_.has_agent(agent)) throw EvalError("unknown agent '" + agent + "'");
  return model_.marked(kind, norm, agent, state);
}

StateFormula Evaluator::prepare(const StateFormula& phi, const Assignment& tau) {
  StateFormula f = is_normalized(phi) ? phi : normalize(phi);
  for (const auto& v : free_vars(f))
    if (!tau.contains(v)) throw EvalError("unbound time variable '" + v + "'");
  return f;
}

PathFormula Evaluator::prepare(const PathFormula& alpha, const Assignment& tau) {
  PathFormula f = is_normalized(alpha) ? alpha : normalize(alpha);
  for (const auto& v : free_vars(f))
    if (!tau.contains(v)) throw EvalError("unbound time variable '" + v + "'");
  return f;
}

bool Evaluator::eval_state(StateId state, const StateFormula& phi, const Assignment& tau) {
  model_.depth(state);
  if (!in_scope(state)) throw EvalError("state '" + model_.name(state) + "' lies beyond the horizon");
  return state_value(state, prepare(phi, tau), tau);
}

bool Evaluator::eval_stit(StateId state, const std::string& agent, const StateFormula& phi,
                          const Assignment& tau) {
  model_.depth(state);
  return stit_value(state, agent, prepare(phi, tau), tau);
}

bool Evaluator::eval_path(const Path& path, std::size_t j, const PathFormula& alpha,
                          const Assignment& tau) {
  if (path.size() == 0 || path[0] != model_.root()) throw EvalError("path must start at the root");
  for (std::size_t i = 1; i < path.size(); ++i)
    if (model_.parent(path[i]) != path[i - 1]) throw EvalError("path is not a chain of transitions");
  if (j >= path.size()) throw EvalError("position " + std::to_string(j) + " out of range");
  return path_value(path.back(), j, prepare(alpha, tau), tau);
}

std::size_t Evaluator::count_on_path(const Path& path, std::size_t i, std::size_t j,
                                     const PathFormula& alpha, const Assignment& tau) {
  if (i > j || j >= path.size()) throw EvalError("count interval out of range");
  PathFormula a = prepare(alpha, tau);
  Path cut = restrict(path, j);
  std::size_t n = 0;
  for (std::size_t k = i; k <= j; ++k)
    if (eval_path(cut, k, a, tau)) ++n;
  return n;
}

bool Evaluator::state_value(StateId state, const StateFormula& phi, const Assignment& tau) {
  Key key{phi.id(), state, 0, values(free_vars(phi), tau)};
  auto it = state_memo_.find(key);
  if (it != state_memo_.end()) return it->second;
  bool v = compute_state(state, phi, tau);
  state_memo_.emplace(std::move(key), v);
  return v;
}

bool Evaluator::path_value(StateId end, std::size_t j, const PathFormula& alpha,
                           const Assignment& tau) {
  Key key{alpha.id(), end, j, values(free_vars(alpha), tau)};
  auto it = path_memo_.find(key);
  if (it != path_memo_.end()) return it->second;
  bool v = compute_path(end, j, alpha, tau);
  path_memo_.emplace(std::move(key), v);
  return v;
}

bool Evaluator::settled_everywhere(const StateFormula& phi, const Assignment& tau) {
  Key key{phi.id(), 0, 0, values(free_vars(phi), tau)};
  auto it = settled_memo_.find(key);
  if (it != settled_memo_.end()) return it->second;
  bool all = true;
  for (StateId s = 0; s < model_.size() && all; ++s)
    if (in_scope(s) && !state_value(s, phi, tau)) all = false;
  settled_memo_.emplace(std::move(key), all);
  return all;
}

bool Evaluator::stit_value(StateId state, const std::string& agent, const StateFormula& phi,
                           const Assignment& tau) {
  if (!model_.has_agent(agent)) throw EvalError("unknown agent '" + agent + "'");
  DeonticKey key{-1, state, {}, agent, 0, 0, 0, phi.id(), nullptr, binding_key(phi, tau)};
  if (auto hit = lookup(key)) return *hit;
  ++evaluations_;
  if (oracle_)
    if (auto v = oracle_->stit(state, agent, phi, tau)) {
      store(std::move(key), *v);
      return *v;
    }
  auto kids = children(state);
  bool v = !kids.empty();
  for (StateId c : kids) {
    if (!v) break;
    v = model_.label(c).count(agent) > 0 && state_value(c, phi, tau);
  }
  if (v) v = !settled_everywhere(phi, tau);
  store(std::move(key), v);
  return v;
}

bool Evaluator::compute_state(StateId s, const StateFormula& phi, const Assignment& tau) {
  ++evaluations_;
  return std::visit(
      overloaded{
          [](const sf::Constant& n) { return n.value; },
          [&](const sf::Atom& n) { return model_.holds(s, n.key()); },
          [&](const sf::Less& n) { return eval_time_term(tau, n.lhs) < eval_time_term(tau, n.rhs); },
          [&](const sf::Equal& n) {
            return eval_time_term(tau, n.lhs) == eval_time_term(tau, n.rhs);
          },
          [&](const sf::Not& n) { return !state_value(s, n.operand, tau); },
          [&](const sf::And& n) { return state_value(s, n.lhs, tau) && state_value(s, n.rhs, tau); },
          [](const sf::Or&) -> bool { throw EvalError("disjunction reached the evaluator unnormalized"); },
          [](const sf::Implies&) -> bool {
            throw EvalError("implication reached the evaluator unnormalized");
          },
          [&](const sf::Stit& n) { return stit_value(s, n.agent, n.operand, tau); },
          [&](const sf::Exists& n) {
            for (StateId leaf : leaves_below(model_, s, horizon_))
              if (path_value(leaf, model_.depth(s), n.operand, tau)) return true;
            return false;
          },
          [&](const sf::All& n) {
            for (StateId leaf : leaves_below(model_, s, horizon_))
              if (!path_value(leaf, model_.depth(s), n.operand, tau)) return false;
            return true;
          },
          [&](const sf::Freeze& n) { return state_value(s, n.body, tau.bind(n.variable, model_.depth(s))); },
          [&](const sf::Special& n) { return special_value(n.kind, n.norm, n.agent, s); },
          [&](const sf::Violation& n) {
            TimeValue tb = eval_time_term(tau, n.begin), tv = eval_time_term(tau, n.at);
            if (oracle_)
              if (auto v = oracle_->violation(s, n.kind, n.norm, n.agent, tb, tv, n.condition, tau)) return *v;
            switch (n.kind) {
            case ViolationKind::Act: return deontic::act(*this, s, n.norm, n.agent, tb, tv, n.condition, tau);
            case ViolationKind::Omission:
              return deontic::omission(*this, s, n.norm, n.agent, tb, tv, n.condition, tau);
            case ViolationKind::Either: break;
            }
            throw EvalError("VIOL reached the evaluator unnormalized");
          },
          [&](const sf::Resolved& n) {
            TimeValue tb = eval_time_term(tau, n.begin), tv = eval_time_term(tau, n.at),
                      tr = eval_time_term(tau, n.resolved);
            if (oracle_)
              if (auto v = oracle_->resolved(s, n.kind, n.norm, n.agent, tb, tv, tr, n.condition, tau))
                return *v;
            return deontic::resolved(*this, s, n.kind, n.norm, n.agent, tb, tv, tr, n.condition, tau);
          },
          [&](const sf::Forbidden& n) {
            return deontic::forbidden(*this, s, n.norm, n.agent, eval_time_term(tau, n.begin),
                                      n.condition, tau);
          },
          [&](const sf::Obliged& n) {
            return deontic::obliged(*this, s, n.norm, n.agent, eval_time_term(tau, n.begin),
                                    n.condition, n.deadline, tau);
          },
      },
      phi.node().value);
}

bool Evaluator::compute_path(StateId end, std::size_t j, const PathFormula& alpha,
                             const Assignment& tau) {
  ++evaluations_;
  const std::size_t last = model_.depth(end);
  auto at = [&](std::size_t i) { return states_of(end)[i]; };
  return std::visit(
      overloaded{
          [&](const pf::Lift& n) { return state_value(at(j), n.formula, tau); },
          [&](const pf::Not& n) { return !path_value(end, j, n.operand, tau); },
          [&](const pf::And& n) {
            return path_value(end, j, n.lhs, tau) && path_value(end, j, n.rhs, tau);
          },
          [](const pf::Or&) -> bool { throw EvalError("disjunction reached the evaluator unnormalized"); },
          [](const pf::Implies&) -> bool {
            throw EvalError("implication reached the evaluator unnormalized");
          },
          [&](const pf::Freeze& n) { return path_value(end, j, n.body, tau.bind(n.variable, j)); },
          [&](const pf::Next& n) {
            if (n.direction == Direction::Forward) return j < last && path_value(end, j + 1, n.operand, tau);
            return j > 0 && path_value(end, j - 1, n.operand, tau);
          },
          [&](const pf::Finally& n) {
            if (n.direction == Direction::Forward) {
              for (std::size_t i = j + 1; i <= last; ++i)
                if (path_value(end, i, n.operand, tau)) return true;
              return false;
            }
            for (std::size_t i = 0; i < j; ++i)
              if (path_value(end, i, n.operand, tau)) return true;
            return false;
          },
          [&](const pf::Globally& n) {
            if (n.direction == Direction::Forward) {
              for (std::size_t i = j; i <= last; ++i)
                if (!path_value(end, i, n.operand, tau)) return false;
              return true;
            }
            for (std::size_t i = 0; i <= j; ++i)
              if (!path_value(end, i, n.operand, tau)) return false;
            return true;
          },
          [&](const pf::Until& n) {
            if (n.direction == Direction::Forward) {
              // lhs must hold from j up to the witness; stop at the first gap.
              for (std::size_t i = j + 1; i <= last; ++i) {
                if (!path_value(end, i - 1, n.lhs, tau)) return false;
                if (path_value(end, i, n.rhs, tau)) return true;
              }
              return false;
            }
            for (std::size_t i = j; i-- > 0;) {
              if (!path_value(end, i + 1, n.lhs, tau)) return false;
              if (path_value(end, i, n.rhs, tau)) return true;
            }
            return false;
          },
      },
      alpha.node().value);
}

std::size_t count_on_path(const Model& model, const Path& path, std::size_t i, std::size_t j,
                          const PathFormula& alpha, const Assignment& tau) {
  Evaluator ev(model);
  return ev.count_on_path(path, i, j, alpha, tau);
}

} // namespace normlog
