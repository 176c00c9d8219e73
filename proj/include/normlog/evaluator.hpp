#pragma once

#include "normlog/model.hpp"
#include "normlog/syntax.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace normlog {

/// Partial map from time variables to time points.
class Assignment {
public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<const std::string, TimeValue>> init) : bindings_(init) {}

  Assignment bind(const std::string& variable, TimeValue value) const;
  void set(const std::string& variable, TimeValue value) { bindings_[variable] = value; }
  bool contains(const std::string& variable) const { return bindings_.count(variable) > 0; }
  TimeValue get(const std::string& variable) const;
  const std::map<std::string, TimeValue>& bindings() const { return bindings_; }

private:
  std::map<std::string, TimeValue> bindings_;
};

TimeValue eval_time_term(const Assignment& tau, const TimeTerm& term);

/// Cache key for the deontic modalities; `state` is the state whose value
/// determines the answer (an ancestor of the queried state).
struct DeonticKey {
  int kind;
  StateId state;
  std::string norm, agent;
  TimeValue t1, t2, t3;
  const void* formula;
  const void* extra;
  std::vector<TimeValue> bindings;

  bool operator==(const DeonticKey&) const = default;
};

struct DeonticKeyHash {
  std::size_t operator()(const DeonticKey& k) const;
};

/// Supplies answers for the modalities from outside the evaluator. A hook
/// returns nullopt to fall back to the definitions.
class Oracle {
public:
  virtual ~Oracle() = default;
  virtual std::optional<bool> stit(StateId state, const std::string& agent, const StateFormula& phi,
                                   const Assignment& tau) = 0;
  virtual std::optional<bool> violation(StateId state, ViolationKind kind, const std::string& norm,
                                        const std::string& agent, TimeValue tb, TimeValue tv,
                                        const StateFormula& phi, const Assignment& tau) = 0;
  virtual std::optional<bool> resolved(StateId state, Resolution target, const std::string& norm,
                                       const std::string& agent, TimeValue tb, TimeValue tv,
                                       TimeValue tr, const StateFormula& phi, const Assignment& tau) = 0;
};

/// Satisfaction relations over one model. Results are memoized, so an
/// evaluator must not outlive changes to its model: build a new one after
/// every mutation.
class Evaluator {
public:
  explicit Evaluator(const Model& model, std::optional<std::size_t> horizon = std::nullopt,
                     Oracle* oracle = nullptr);

  const Model& model() const { return model_; }
  std::optional<std::size_t> horizon() const { return horizon_; }
  bool in_scope(StateId s) const { return !horizon_ || model_.depth(s) <= *horizon_; }

  bool eval_state(StateId state, const StateFormula& phi, const Assignment& tau = {});
  bool eval_path(const Path& path, std::size_t j, const PathFormula& alpha,
                 const Assignment& tau = {});
  bool eval_stit(StateId state, const std::string& agent, const StateFormula& phi,
                 const Assignment& tau = {});
  std::size_t count_on_path(const Path& path, std::size_t i, std::size_t j,
                            const PathFormula& alpha, const Assignment& tau = {});

  std::vector<Path> paths_through(StateId state) const;
  std::vector<StateId> children(StateId state) const;

  /// Number of formula nodes evaluated without a cache hit.
  std::uint64_t evaluations() const { return evaluations_; }

  // Internal entry points shared with the deontic module. Formulas must be
  // normalized and their free variables bound.
  bool state_value(StateId state, const StateFormula& phi, const Assignment& tau);
  bool path_value(StateId end, std::size_t j, const PathFormula& alpha, const Assignment& tau);
  bool stit_value(StateId state, const std::string& agent, const StateFormula& phi,
                  const Assignment& tau);
  bool special_value(SpecialKind kind, const std::string& norm, const std::string& agent,
                     StateId state) const;
  const StateFormula& special_formula(SpecialKind kind, const std::string& norm,
                                      const std::string& agent);
  std::vector<TimeValue> binding_key(const StateFormula& phi, const Assignment& tau);
  std::optional<bool> lookup(const DeonticKey& key) const;
  void store(DeonticKey key, bool value);
  void count_evaluation() { ++evaluations_; }

private:
  struct Key {
    const void* node;
    StateId state;
    std::size_t position;
    std::vector<TimeValue> bindings;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  const std::vector<std::string>& free_vars(const StateFormula& phi);
  const std::vector<std::string>& free_vars(const PathFormula& alpha);
  std::vector<TimeValue> values(const std::vector<std::string>& vars, const Assignment& tau) const;
  const std::vector<StateId>& states_of(StateId end);
  bool compute_state(StateId state, const StateFormula& phi, const Assignment& tau);
  bool compute_path(StateId end, std::size_t j, const PathFormula& alpha, const Assignment& tau);
  bool settled_everywhere(const StateFormula& phi, const Assignment& tau);
  StateFormula prepare(const StateFormula& phi, const Assignment& tau);
  PathFormula prepare(const PathFormula& alpha, const Assignment& tau);

  const Model& model_;
  std::optional<std::size_t> horizon_;
  Oracle* oracle_;
  std::uint64_t evaluations_ = 0;

  std::unordered_map<const void*, std::vector<std::string>> free_vars_;
  std::vector<StateFormula> pinned_states_;
  std::vector<PathFormula> pinned_paths_;
  std::unordered_map<Key, bool, KeyHash> state_memo_, path_memo_, stit_memo_, settled_memo_;
  std::unordered_map<DeonticKey, bool, DeonticKeyHash> deontic_memo_;
  std::unordered_map<StateId, std::vector<StateId>> path_states_;
  std::map<Model::MarkKey, StateFormula> specials_;
};

/// Convenience wrapper building a one-off evaluator.
std::size_t count_on_path(const Model& model, const Path& path, std::size_t i, std::size_t j,
                          const PathFormula& alpha, const Assignment& tau = {});

} // namespace normlog
