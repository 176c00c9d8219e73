#pragma once

#include "normlog/syntax.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace normlog {

using StateId = std::size_t;

/// Finite sequence of states starting at the root.
struct Path {
  std::vector<StateId> states;

  std::size_t size() const { return states.size(); }
  StateId operator[](std::size_t i) const { return states.at(i); }
  StateId back() const { return states.back(); }
  bool operator==(const Path&) const = default;
};

/// Rooted tree of world states. State 0 is always the root; every other
/// state is added under an existing parent, so the tree invariants hold by
/// construction.
class Model {
public:
  explicit Model(std::string root_name = "w", std::set<std::string> root_atoms = {});

  StateId add_state(std::string name, StateId parent, std::set<std::string> agents,
                    std::set<std::string> atoms = {});

  void declare_agent(const std::string& agent) { agents_.insert(agent); }
  void declare_norm(const std::string& norm) { norms_.insert(norm); }
  const std::set<std::string>& agents() const { return agents_; }
  const std::set<std::string>& norms() const { return norms_; }
  bool has_agent(const std::string& a) const { return agents_.count(a) > 0; }
  bool has_norm(const std::string& n) const { return norms_.count(n) > 0; }

  StateId root() const { return 0; }
  std::size_t size() const { return states_.size(); }
  const std::string& name(StateId s) const { return at(s).name; }
  StateId find(std::string_view name) const;
  std::optional<StateId> parent(StateId s) const;
  const std::vector<StateId>& children(StateId s) const { return at(s).children; }
  /// Agents labelling the transition into `s` (empty for the root).
  const std::set<std::string>& label(StateId s) const { return at(s).label; }
  std::size_t depth(StateId s) const { return at(s).depth; }
  /// Ancestor of `s` at depth `d`; `s` itself when d == depth(s).
  StateId ancestor(StateId s, std::size_t d) const;
  std::size_t height() const { return height_; }

  const std::set<std::string>& atoms(StateId s) const { return at(s).atoms; }
  bool holds(StateId s, const std::string& atom) const { return at(s).atoms.count(atom) > 0; }
  void add_atom(StateId s, std::string atom) { at_mut(s).atoms.insert(std::move(atom)); }

  void mark(SpecialKind kind, const std::string& norm, const std::string& agent, StateId s);
  bool marked(SpecialKind kind, const std::string& norm, const std::string& agent,
              StateId s) const;
  const std::set<StateId>& marked_states(SpecialKind kind, const std::string& norm,
                                         const std::string& agent) const;
  using MarkKey = std::tuple<SpecialKind, std::string, std::string>;
  const std::map<MarkKey, std::set<StateId>>& marks() const { return marks_; }

private:
  struct State {
    std::string name;
    std::optional<StateId> parent;
    std::vector<StateId> children;
    std::set<std::string> label;
    std::set<std::string> atoms;
    std::size_t depth = 0;
  };

  const State& at(StateId s) const;
  State& at_mut(StateId s);

  std::vector<State> states_;
  std::map<std::string, StateId, std::less<>> by_name_;
  std::set<std::string> agents_, norms_;
  std::map<MarkKey, std::set<StateId>> marks_;
  std::size_t height_ = 0;
};

std::size_t depth(const Model& model, StateId state);

/// Maximal root-to-leaf paths through `state`. With a horizon, states deeper
/// than it are treated as absent.
std::vector<Path> paths_through(const Model& model, StateId state,
                                std::optional<std::size_t> horizon = std::nullopt);

/// Leaves below (or equal to) `state` under an optional horizon.
std::vector<StateId> leaves_below(const Model& model, StateId state,
                                  std::optional<std::size_t> horizon = std::nullopt);

/// The root path ending at `state`.
Path path_to(const Model& model, StateId state);

Path restrict(const Path& path, std::size_t i);

/// Parses a model document (JSON text) and validates it.
Model load_model(std::string_view document);
Model load_model_file(const std::string& path);
std::string dump_model(const Model& model);

} // namespace normlog
