#include "normlog/model.hpp"

#include "normlog/error.hpp"

namespace normlog {

Model::Model(std::string root_name, std::set<std::string> root_atoms) {
  State root;
  root.name = std::move(root_name);
  root.atoms = std::move(root_atoms);
  by_name_.emplace(root.name, 0);
  states_.push_back(std::move(root));
}

const Model::State& Model::at(StateId s) const {
  if (s >= states_.size()) throw ModelError("unknown state #" + std::to_string(s));
  return states_[s];
}

Model::State& Model::at_mut(StateId s) {
  if (s >= states_.size()) throw ModelError("unknown state #" + std::to_string(s));
  return states_[s];
}

StateId Model::add_state(std::string name, StateId parent, std::set<std::string> agents,
                         std::set<std::string> atoms) {
  std::size_t d = at(parent).depth + 1;
  if (by_name_.count(name)) throw ModelError("duplicate state id '" + name + "'");
  for (const auto& a : agents)
    if (!has_agent(a)) throw ModelError("unknown agent '" + a + "' on transition into '" + name + "'");
  StateId id = states_.size();
  State s;
  s.name = name;
  s.parent = parent;
  s.label = std::move(agents);
  s.atoms = std::move(atoms);
  s.depth = d;
  states_.push_back(std::move(s));
  states_[parent].children.push_back(id);
  by_name_.emplace(std::move(name), id);
  if (d > height_) height_ = d;
  return id;
}

StateId Model::find(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw ModelError("unknown state '" + std::string(name) + "'");
  return it->second;
}

std::optional<StateId> Model::parent(StateId s) const { return at(s).parent; }

StateId Model::ancestor(StateId s, std::size_t d) const {
  if (d > at(s).depth) throw ModelError("no ancestor at depth " + std::to_string(d));
  while (states_[s].depth > d) s = *states_[s].parent;
  return s;
}

void Model::mark(SpecialKind kind, const std::string& norm, const std::string& agent, StateId s) {
  at(s);
  if (!has_norm(norm)) throw ModelError("unknown norm '" + norm + "'");
  if (!has_agent(agent)) throw ModelError("unknown agent '" + agent + "'");
  marks_[{kind, norm, agent}].insert(s);
}

bool Model::marked(SpecialKind kind, const std::string& norm, const std::string& agent,
                   StateId s) const {
  auto it = marks_.find(MarkKey{kind, norm, agent});
  return it != marks_.end() && it->second.count(s) > 0;
}

const std::set<StateId>& Model::marked_states(SpecialKind kind, const std::string& norm,
                                              const std::string& agent) const {
  static const std::set<StateId> none;
  auto it = marks_.find(MarkKey{kind, norm, agent});
  return it == marks_.end() ? none : it->second;
}

std::size_t depth(const Model& model, StateId state) { return model.depth(state); }

std::vector<StateId> leaves_below(const Model& model, StateId state,
                                  std::optional<std::size_t> horizon) {
  std::vector<StateId> out;
  std::vector<StateId> stack{state};
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    const auto& kids = model.children(s);
    if (kids.empty() || (horizon && model.depth(s) >= *horizon)) {
      out.push_back(s);
      continue;
    }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

Path path_to(const Model& model, StateId state) {
  Path p;
  p.states.resize(model.depth(state) + 1);
  for (StateId s = state;; s = *model.parent(s)) {
    p.states[model.depth(s)] = s;
    if (s == model.root()) break;
  }
  return p;
}

std::vector<Path> paths_through(const Model& model, StateId state,
                                std::optional<std::size_t> horizon) {
  if (horizon && model.depth(state) > *horizon) return {};
  std::vector<Path> out;
  for (StateId leaf : leaves_below(model, state, horizon)) out.push_back(path_to(model, leaf));
  return out;
}

Path restrict(const Path& path, std::size_t i) {
  if (i >= path.size())
    throw ModelError("restrict index " + std::to_string(i) + " out of range for path of length " +
                     std::to_string(path.size()));
  return Path{std::vector<StateId>(path.states.begin(), path.states.begin() + i + 1)};
}

} // namespace normlog
