#include "normlog/syntax.hpp"

#include "../overloaded.hpp"

namespace normlog {

namespace {

void add_term(std::set<std::string>& out, const TimeTerm& term) { out.insert(term.variable); }

void collect_free(const StateFormula& f, std::set<std::string>& out);
void collect_free(const PathFormula& f, std::set<std::string>& out);

void collect_free(const StateFormula& f, std::set<std::string>& out) {
  std::visit(overloaded{
                 [](const sf::Constant&) {},
                 [](const sf::Atom&) {},
                 [](const sf::Special&) {},
                 [&](const sf::Less& n) {
                   add_term(out, n.lhs);
                   add_term(out, n.rhs);
                 },
                 [&](const sf::Equal& n) {
                   add_term(out, n.lhs);
                   add_term(out, n.rhs);
                 },
                 [&](const sf::Not& n) { collect_free(n.operand, out); },
                 [&](const sf::And& n) {
                   collect_free(n.lhs, out);
                   collect_free(n.rhs, out);
                 },
                 [&](const sf::Or& n) {
                   collect_free(n.lhs, out);
                   collect_free(n.rhs, out);
                 },
                 [&](const sf::Implies& n) {
                   collect_free(n.lhs, out);
                   collect_free(n.rhs, out);
                 },
                 [&](const sf::Stit& n) { collect_free(n.operand, out); },
                 [&](const sf::Exists& n) { collect_free(n.operand, out); },
                 [&](const sf::All& n) { collect_free(n.operand, out); },
                 [&](const sf::Freeze& n) {
                   std::set<std::string> inner;
                   collect_free(n.body, inner);
                   inner.erase(n.variable);
                   out.insert(inner.begin(), inner.end());
                 },
                 [&](const sf::Violation& n) {
                   add_term(out, n.begin);
                   add_term(out, n.at);
                   collect_free(n.condition, out);
                 },
                 [&](const sf::Resolved& n) {
                   add_term(out, n.begin);
                   add_term(out, n.at);
                   add_term(out, n.resolved);
                   collect_free(n.condition, out);
                 },
                 [&](const sf::Forbidden& n) {
                   add_term(out, n.begin);
                   collect_free(n.condition, out);
                 },
                 [&](const sf::Obliged& n) {
                   add_term(out, n.begin);
                   collect_free(n.condition, out);
                   collect_free(n.deadline, out);
                 },
             },
             f.node().value);
}

void collect_free(const PathFormula& f, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const pf::Lift& n) { collect_free(n.formula, out); },
                 [&](const pf::Not& n) { collect_free(n.operand, out); },
                 [&](const pf::And& n) {
                   collect_free(n.lhs, out);
                   collect_free(n.rhs, out);
                 },
                 [&](const pf::Or& n) {
                   collect_free(n.lhs, out);
                   collect_free(n.rhs, out);
                 },
                 [&](const pf::Implies& n) {
                   collect_free(n.lhs, out);
                   collect_free(n.rhs, out);
                 },
                 [&](const pf::Freeze& n) {
                   std::set<std::string> inner;
                   collect_free(n.body, inner);
                   inner.erase(n.variable);
                   out.insert(inner.begin(), inner.end());
                 },
                 [&](const pf::Next& n) { collect_free(n.operand, out); },
                 [&](const pf::Finally& n) { collect_free(n.operand, out); },
                 [&](const pf::Globally& n) { collect_free(n.operand, out); },
                 [&](const pf::Until& n) {
                   collect_free(n.lhs, out);
                   collect_free(n.rhs, out);
                 },
             },
             f.node().value);
}

using Renaming = std::map<std::string, std::string>;

std::string rename(const std::string& name, const Renaming& r) {
  auto it = r.find(name);
  return it == r.end() ? name : it->second;
}

StateFormula subst(const StateFormula& f, const Renaming& r);

PathFormula subst(const PathFormula& f, const Renaming& r) {
  return std::visit(
      overloaded{
          [&](const pf::Lift& n) { return p::lift(subst(n.formula, r)); },
          [&](const pf::Not& n) { return p::neg(subst(n.operand, r)); },
          [&](const pf::And& n) { return p::conj(subst(n.lhs, r), subst(n.rhs, r)); },
          [&](const pf::Or& n) { return p::disj(subst(n.lhs, r), subst(n.rhs, r)); },
          [&](const pf::Implies& n) { return p::implies(subst(n.lhs, r), subst(n.rhs, r)); },
          [&](const pf::Freeze& n) { return p::freeze(n.variable, subst(n.body, r)); },
          [&](const pf::Next& n) { return p::next(n.direction, subst(n.operand, r)); },
          [&](const pf::Finally& n) { return p::finally(n.direction, subst(n.operand, r)); },
          [&](const pf::Globally& n) { return p::globally(n.direction, subst(n.operand, r)); },
          [&](const pf::Until& n) {
            return p::until(n.direction, subst(n.lhs, r), subst(n.rhs, r));
          },
      },
      f.node().value);
}

StateFormula subst(const StateFormula& f, const Renaming& r) {
  return std::visit(
      overloaded{
          [&](const sf::Constant&) { return f; },
          [&](const sf::Less&) { return f; },
          [&](const sf::Equal&) { return f; },
          [&](const sf::Atom& n) {
            std::vector<std::string> args;
            for (const auto& a : n.args) args.push_back(rename(a, r));
            return f::atom(n.name, std::move(args));
          },
          [&](const sf::Not& n) { return f::neg(subst(n.operand, r)); },
          [&](const sf::And& n) { return f::conj(subst(n.lhs, r), subst(n.rhs, r)); },
          [&](const sf::Or& n) { return f::disj(subst(n.lhs, r), subst(n.rhs, r)); },
          [&](const sf::Implies& n) { return f::implies(subst(n.lhs, r), subst(n.rhs, r)); },
          [&](const sf::Stit& n) { return f::stit(rename(n.agent, r), subst(n.operand, r)); },
          [&](const sf::Exists& n) { return f::exists(subst(n.operand, r)); },
          [&](const sf::All& n) { return f::all(subst(n.operand, r)); },
          [&](const sf::Freeze& n) { return f::freeze(n.variable, subst(n.body, r)); },
          [&](const sf::Special& n) { return f::special(n.kind, n.norm, rename(n.agent, r)); },
          [&](const sf::Violation& n) {
            return f::violation(n.kind, n.norm, rename(n.agent, r), n.begin, n.at,
                                subst(n.condition, r));
          },
          [&](const sf::Resolved& n) {
            return f::resolved(n.kind, n.norm, rename(n.agent, r), n.begin, n.at, n.resolved,
                               subst(n.condition, r));
          },
          [&](const sf::Forbidden& n) {
            return f::forbidden(n.norm, rename(n.agent, r), n.begin, subst(n.condition, r));
          },
          [&](const sf::Obliged& n) {
            return f::obliged(n.norm, rename(n.agent, r), n.begin, subst(n.condition, r),
                              subst(n.deadline, r));
          },
      },
      f.node().value);
}

// Generic pre-order walk over every state node reachable from a formula.
template <class Fn>
void walk(const StateFormula& f, Fn&& fn);

template <class Fn>
void walk(const PathFormula& f, Fn&& fn) {
  std::visit(overloaded{
                 [&](const pf::Lift& n) { walk(n.formula, fn); },
                 [&](const pf::Not& n) { walk(n.operand, fn); },
                 [&](const pf::And& n) {
                   walk(n.lhs, fn);
                   walk(n.rhs, fn);
                 },
                 [&](const pf::Or& n) {
                   walk(n.lhs, fn);
                   walk(n.rhs, fn);
                 },
                 [&](const pf::Implies& n) {
                   walk(n.lhs, fn);
                   walk(n.rhs, fn);
                 },
                 [&](const pf::Freeze& n) { walk(n.body, fn); },
                 [&](const pf::Next& n) { walk(n.operand, fn); },
                 [&](const pf::Finally& n) { walk(n.operand, fn); },
                 [&](const pf::Globally& n) { walk(n.operand, fn); },
                 [&](const pf::Until& n) {
                   walk(n.lhs, fn);
                   walk(n.rhs, fn);
                 },
             },
             f.node().value);
}

template <class Fn>
void walk(const StateFormula& f, Fn&& fn) {
  fn(f);
  std::visit(overloaded{
                 [](const sf::Constant&) {},
                 [](const sf::Atom&) {},
                 [](const sf::Less&) {},
                 [](const sf::Equal&) {},
                 [](const sf::Special&) {},
                 [&](const sf::Not& n) { walk(n.operand, fn); },
                 [&](const sf::And& n) {
                   walk(n.lhs, fn);
                   walk(n.rhs, fn);
                 },
                 [&](const sf::Or& n) {
                   walk(n.lhs, fn);
                   walk(n.rhs, fn);
                 },
                 [&](const sf::Implies& n) {
                   walk(n.lhs, fn);
                   walk(n.rhs, fn);
                 },
                 [&](const sf::Stit& n) { walk(n.operand, fn); },
                 [&](const sf::Exists& n) { walk(n.operand, fn); },
                 [&](const sf::All& n) { walk(n.operand, fn); },
                 [&](const sf::Freeze& n) { walk(n.body, fn); },
                 [&](const sf::Violation& n) { walk(n.condition, fn); },
                 [&](const sf::Resolved& n) { walk(n.condition, fn); },
                 [&](const sf::Forbidden& n) { walk(n.condition, fn); },
                 [&](const sf::Obliged& n) {
                   walk(n.condition, fn);
                   walk(n.deadline, fn);
                 },
             },
             f.node().value);
}

} // namespace

bool StateFormula::operator==(const StateFormula& other) const {
  return node_ == other.node_ || node_->value == other.node_->value;
}

bool PathFormula::operator==(const PathFormula& other) const {
  return node_ == other.node_ || node_->value == other.node_->value;
}

std::string sf::Atom::key() const {
  if (args.empty()) return name;
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += args[i];
  }
  return out + ")";
}

namespace f {
StateFormula make(StateNode::Variant value) {
  return StateFormula(std::make_shared<const StateNode>(StateNode{std::move(value)}));
}
StateFormula constant(bool value) { return make(sf::Constant{value}); }
StateFormula atom(std::string name, std::vector<std::string> args) {
  return make(sf::Atom{std::move(name), std::move(args)});
}
StateFormula less(TimeTerm lhs, TimeTerm rhs) { return make(sf::Less{std::move(lhs), std::move(rhs)}); }
StateFormula equal(TimeTerm lhs, TimeTerm rhs) {
  return make(sf::Equal{std::move(lhs), std::move(rhs)});
}
StateFormula neg(StateFormula operand) { return make(sf::Not{std::move(operand)}); }
StateFormula conj(StateFormula lhs, StateFormula rhs) {
  return make(sf::And{std::move(lhs), std::move(rhs)});
}
StateFormula disj(StateFormula lhs, StateFormula rhs) {
  return make(sf::Or{std::move(lhs), std::move(rhs)});
}
StateFormula implies(StateFormula lhs, StateFormula rhs) {
  return make(sf::Implies{std::move(lhs), std::move(rhs)});
}
StateFormula stit(std::string agent, StateFormula operand) {
  return make(sf::Stit{std::move(agent), std::move(operand)});
}
StateFormula exists(PathFormula operand) { return make(sf::Exists{std::move(operand)}); }
StateFormula all(PathFormula operand) { return make(sf::All{std::move(operand)}); }
StateFormula freeze(std::string variable, StateFormula body) {
  return make(sf::Freeze{std::move(variable), std::move(body)});
}
StateFormula special(SpecialKind kind, std::string norm, std::string agent) {
  return make(sf::Special{kind, std::move(norm), std::move(agent)});
}
StateFormula violation(ViolationKind kind, std::string norm, std::string agent, TimeTerm begin,
                       TimeTerm at, StateFormula condition) {
  return make(sf::Violation{kind, std::move(norm), std::move(agent), std::move(begin),
                            std::move(at), std::move(condition)});
}
StateFormula resolved(Resolution kind, std::string norm, std::string agent, TimeTerm begin,
                      TimeTerm at, TimeTerm resolved, StateFormula condition) {
  return make(sf::Resolved{kind, std::move(norm), std::move(agent), std::move(begin), std::move(at),
                           std::move(resolved), std::move(condition)});
}
StateFormula forbidden(std::string norm, std::string agent, TimeTerm begin, StateFormula condition) {
  return make(sf::Forbidden{std::move(norm), std::move(agent), std::move(begin), std::move(condition)});
}
StateFormula obliged(std::string norm, std::string agent, TimeTerm begin, StateFormula condition,
                     StateFormula deadline) {
  return make(sf::Obliged{std::move(norm), std::move(agent), std::move(begin), std::move(condition),
                          std::move(deadline)});
}
} // namespace f

namespace p {
PathFormula make(PathNode::Variant value) {
  return PathFormula(std::make_shared<const PathNode>(PathNode{std::move(value)}));
}
PathFormula lift(StateFormula formula) { return make(pf::Lift{std::move(formula)}); }
PathFormula neg(PathFormula operand) { return make(pf::Not{std::move(operand)}); }
PathFormula conj(PathFormula lhs, PathFormula rhs) { return make(pf::And{std::move(lhs), std::move(rhs)}); }
PathFormula disj(PathFormula lhs, PathFormula rhs) { return make(pf::Or{std::move(lhs), std::move(rhs)}); }
PathFormula implies(PathFormula lhs, PathFormula rhs) {
  return make(pf::Implies{std::move(lhs), std::move(rhs)});
}
PathFormula freeze(std::string variable, PathFormula body) {
  return make(pf::Freeze{std::move(variable), std::move(body)});
}
PathFormula next(Direction d, PathFormula operand) { return make(pf::Next{d, std::move(operand)}); }
PathFormula finally(Direction d, PathFormula operand) {
  return make(pf::Finally{d, std::move(operand)});
}
PathFormula globally(Direction d, PathFormula operand) {
  return make(pf::Globally{d, std::move(operand)});
}
PathFormula until(Direction d, PathFormula lhs, PathFormula rhs) {
  return make(pf::Until{d, std::move(lhs), std::move(rhs)});
}
} // namespace p

std::set<std::string> free_time_variables(const StateFormula& formula) {
  std::set<std::string> out;
  collect_free(formula, out);
  return out;
}

std::set<std::string> free_time_variables(const PathFormula& formula) {
  std::set<std::string> out;
  collect_free(formula, out);
  return out;
}

StateFormula substitute_agents(const StateFormula& formula, const Renaming& renaming) {
  if (renaming.empty()) return formula;
  return subst(formula, renaming);
}

std::vector<std::pair<std::string, std::string>> norm_references(const StateFormula& formula) {
  std::vector<std::pair<std::string, std::string>> out;
  walk(formula, [&](const StateFormula& f) {
    std::visit(overloaded{
                   [&](const sf::Special& n) { out.emplace_back(n.norm, n.agent); },
                   [&](const sf::Violation& n) { out.emplace_back(n.norm, n.agent); },
                   [&](const sf::Resolved& n) { out.emplace_back(n.norm, n.agent); },
                   [&](const sf::Forbidden& n) { out.emplace_back(n.norm, n.agent); },
                   [&](const sf::Obliged& n) { out.emplace_back(n.norm, n.agent); },
                   [](const auto&) {},
               },
               f.node().value);
  });
  return out;
}

std::set<std::string> atom_keys(const StateFormula& formula) {
  std::set<std::string> out;
  walk(formula, [&](const StateFormula& f) {
    if (auto* a = std::get_if<sf::Atom>(&f.node().value)) out.insert(a->key());
  });
  return out;
}

} // namespace normlog
