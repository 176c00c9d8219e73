#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace normlog {

using TimeValue = std::uint64_t;

/// A time term: `t`, `t + c` or `t - c` over a temporal variable.
struct TimeTerm {
  enum class Offset { None, Plus, Minus };

  std::string variable;
  Offset offset = Offset::None;
  TimeValue constant = 0;

  static TimeTerm var(std::string name) { return {std::move(name), Offset::None, 0}; }
  static TimeTerm plus(std::string name, TimeValue c) { return {std::move(name), Offset::Plus, c}; }
  static TimeTerm minus(std::string name, TimeValue c) { return {std::move(name), Offset::Minus, c}; }

  bool operator==(const TimeTerm&) const = default;
};

enum class Direction { Forward, Backward };

/// The special propositions V, D, R and P.
enum class SpecialKind { Violation, Deadline, Repair, Punish };

enum class ViolationKind { Act, Omission, Either };

enum class Resolution { Repair, Punish };

struct StateNode;
struct PathNode;

/// Immutable handle to a state formula node. Copies share structure.
class StateFormula {
public:
  explicit StateFormula(std::shared_ptr<const StateNode> node) : node_(std::move(node)) {}

  const StateNode& node() const { return *node_; }
  const StateNode* id() const { return node_.get(); }

  bool operator==(const StateFormula& other) const;

private:
  std::shared_ptr<const StateNode> node_;
};

/// Immutable handle to a path formula node.
class PathFormula {
public:
  explicit PathFormula(std::shared_ptr<const PathNode> node) : node_(std::move(node)) {}

  const PathNode& node() const { return *node_; }
  const PathNode* id() const { return node_.get(); }

  bool operator==(const PathFormula& other) const;

private:
  std::shared_ptr<const PathNode> node_;
};

namespace sf {

struct Constant {
  bool value;
  bool operator==(const Constant&) const = default;
};

/// Predicate-style atom such as `litter(a)`; opaque per world.
struct Atom {
  std::string name;
  std::vector<std::string> args;

  /// Canonical valuation key, e.g. "call_out(b,a)".
  std::string key() const;
  bool operator==(const Atom&) const = default;
};

struct Less {
  TimeTerm lhs, rhs;
  bool operator==(const Less&) const = default;
};

struct Equal {
  TimeTerm lhs, rhs;
  bool operator==(const Equal&) const = default;
};

struct Not {
  StateFormula operand;
  bool operator==(const Not&) const = default;
};

struct And {
  StateFormula lhs, rhs;
  bool operator==(const And&) const = default;
};

struct Or {
  StateFormula lhs, rhs;
  bool operator==(const Or&) const = default;
};

struct Implies {
  StateFormula lhs, rhs;
  bool operator==(const Implies&) const = default;
};

/// E<agent> operand: the agent sees to it that operand.
struct Stit {
  std::string agent;
  StateFormula operand;
  bool operator==(const Stit&) const = default;
};

struct Exists {
  PathFormula operand;
  bool operator==(const Exists&) const = default;
};

struct All {
  PathFormula operand;
  bool operator==(const All&) const = default;
};

struct Freeze {
  std::string variable;
  StateFormula body;
  bool operator==(const Freeze&) const = default;
};

struct Special {
  SpecialKind kind;
  std::string norm;
  std::string agent;
  bool operator==(const Special&) const = default;
};

struct Violation {
  ViolationKind kind;
  std::string norm;
  std::string agent;
  TimeTerm begin;
  TimeTerm at;
  StateFormula condition;
  bool operator==(const Violation&) const = default;
};

struct Resolved {
  Resolution kind;
  std::string norm;
  std::string agent;
  TimeTerm begin;
  TimeTerm at;
  TimeTerm resolved;
  StateFormula condition;
  bool operator==(const Resolved&) const = default;
};

struct Forbidden {
  std::string norm;
  std::string agent;
  TimeTerm begin;
  StateFormula condition;
  bool operator==(const Forbidden&) const = default;
};

struct Obliged {
  std::string norm;
  std::string agent;
  TimeTerm begin;
  StateFormula condition;
  StateFormula deadline;
  bool operator==(const Obliged&) const = default;
};

} // namespace sf

namespace pf {

struct Lift {
  StateFormula formula;
  bool operator==(const Lift&) const = default;
};

struct Not {
  PathFormula operand;
  bool operator==(const Not&) const = default;
};

struct And {
  PathFormula lhs, rhs;
  bool operator==(const And&) const = default;
};

struct Or {
  PathFormula lhs, rhs;
  bool operator==(const Or&) const = default;
};

struct Implies {
  PathFormula lhs, rhs;
  bool operator==(const Implies&) const = default;
};

struct Freeze {
  std::string variable;
  PathFormula body;
  bool operator==(const Freeze&) const = default;
};

struct Next {
  Direction direction;
  PathFormula operand;
  bool operator==(const Next&) const = default;
};

struct Finally {
  Direction direction;
  PathFormula operand;
  bool operator==(const Finally&) const = default;
};

struct Globally {
  Direction direction;
  PathFormula operand;
  bool operator==(const Globally&) const = default;
};

struct Until {
  Direction direction;
  PathFormula lhs, rhs;
  bool operator==(const Until&) const = default;
};

} // namespace pf

struct StateNode {
  using Variant = std::variant<sf::Constant, sf::Atom, sf::Less, sf::Equal, sf::Not, sf::And,
                               sf::Or, sf::Implies, sf::Stit, sf::Exists, sf::All, sf::Freeze,
                               sf::Special, sf::Violation, sf::Resolved, sf::Forbidden,
                               sf::Obliged>;
  Variant value;
};

struct PathNode {
  using Variant = std::variant<pf::Lift, pf::Not, pf::And, pf::Or, pf::Implies, pf::Freeze,
                               pf::Next, pf::Finally, pf::Globally, pf::Until>;
  Variant value;
};

/// State formula builders.
namespace f {
StateFormula make(StateNode::Variant value);
StateFormula constant(bool value);
StateFormula atom(std::string name, std::vector<std::string> args = {});
StateFormula less(TimeTerm lhs, TimeTerm rhs);
StateFormula equal(TimeTerm lhs, TimeTerm rhs);
StateFormula neg(StateFormula operand);
StateFormula conj(StateFormula lhs, StateFormula rhs);
StateFormula disj(StateFormula lhs, StateFormula rhs);
StateFormula implies(StateFormula lhs, StateFormula rhs);
StateFormula stit(std::string agent, StateFormula operand);
StateFormula exists(PathFormula operand);
StateFormula all(PathFormula operand);
StateFormula freeze(std::string variable, StateFormula body);
StateFormula special(SpecialKind kind, std::string norm, std::string agent);
StateFormula violation(ViolationKind kind, std::string norm, std::string agent, TimeTerm begin,
                       TimeTerm at, StateFormula condition);
StateFormula resolved(Resolution kind, std::string norm, std::string agent, TimeTerm begin,
                      TimeTerm at, TimeTerm resolved, StateFormula condition);
StateFormula forbidden(std::string norm, std::string agent, TimeTerm begin, StateFormula condition);
StateFormula obliged(std::string norm, std::string agent, TimeTerm begin, StateFormula condition,
                     StateFormula deadline);
} // namespace f

/// Path formula builders.
namespace p {
PathFormula make(PathNode::Variant value);
PathFormula lift(StateFormula formula);
PathFormula neg(PathFormula operand);
PathFormula conj(PathFormula lhs, PathFormula rhs);
PathFormula disj(PathFormula lhs, PathFormula rhs);
PathFormula implies(PathFormula lhs, PathFormula rhs);
PathFormula freeze(std::string variable, PathFormula body);
PathFormula next(Direction d, PathFormula operand);
PathFormula finally(Direction d, PathFormula operand);
PathFormula globally(Direction d, PathFormula operand);
PathFormula until(Direction d, PathFormula lhs, PathFormula rhs);
} // namespace p

// Parsing. The returned formulas are normalized; the *_raw variants keep
// disjunction, implication and VIOL sugar as written.
StateFormula parse_state_formula(std::string_view text);
PathFormula parse_path_formula(std::string_view text);
StateFormula parse_state_formula_raw(std::string_view text);
PathFormula parse_path_formula_raw(std::string_view text);

std::string render(const StateFormula& formula);
std::string render(const PathFormula& formula);
std::string render(const TimeTerm& term);

/// Rewrites or/implies/VIOL into not/and and collapses path-level
/// connectives over state formulas into a single lifted state formula.
StateFormula normalize(const StateFormula& formula);
PathFormula normalize(const PathFormula& formula);
bool is_normalized(const StateFormula& formula);
bool is_normalized(const PathFormula& formula);

std::set<std::string> free_time_variables(const StateFormula& formula);
std::set<std::string> free_time_variables(const PathFormula& formula);

/// Renames agent identifiers (STIT agents, modality agents, atom arguments).
StateFormula substitute_agents(const StateFormula& formula,
                               const std::map<std::string, std::string>& renaming);

/// Norm ids referenced by special propositions and modalities, paired with
/// the agent identifier used at that reference.
std::vector<std::pair<std::string, std::string>> norm_references(const StateFormula& formula);

/// Atom keys that occur anywhere in the formula.
std::set<std::string> atom_keys(const StateFormula& formula);

} // namespace normlog
