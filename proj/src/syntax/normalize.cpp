#include "normlog/syntax.hpp"

#include "../overloaded.hpp"

namespace normlog {

namespace {

const StateFormula* lifted(const PathFormula& f) {
  if (auto* l = std::get_if<pf::Lift>(&f.node().value)) return &l->formula;
  return nullptr;
}

StateFormula or_core(StateFormula a, StateFormula b) {
  return f::neg(f::conj(f::neg(std::move(a)), f::neg(std::move(b))));
}

PathFormula p_not(PathFormula a) {
  if (auto* s = lifted(a)) return p::lift(f::neg(*s));
  return p::neg(std::move(a));
}

PathFormula p_and(PathFormula a, PathFormula b) {
  auto *x = lifted(a), *y = lifted(b);
  if (x && y) return p::lift(f::conj(*x, *y));
  return p::conj(std::move(a), std::move(b));
}

} // namespace

StateFormula normalize(const StateFormula& formula) {
  return std::visit(
      overloaded{
          [&](const sf::Constant&) { return formula; },
          [&](const sf::Atom&) { return formula; },
          [&](const sf::Less&) { return formula; },
          [&](const sf::Equal&) { return formula; },
          [&](const sf::Special&) { return formula; },
          [](const sf::Not& n) { return f::neg(normalize(n.operand)); },
          [](const sf::And& n) { return f::conj(normalize(n.lhs), normalize(n.rhs)); },
          [](const sf::Or& n) { return or_core(normalize(n.lhs), normalize(n.rhs)); },
          [](const sf::Implies& n) {
            return f::neg(f::conj(normalize(n.lhs), f::neg(normalize(n.rhs))));
          },
          [](const sf::Stit& n) { return f::stit(n.agent, normalize(n.operand)); },
          [](const sf::Exists& n) { return f::exists(normalize(n.operand)); },
          [](const sf::All& n) { return f::all(normalize(n.operand)); },
          [](const sf::Freeze& n) { return f::freeze(n.variable, normalize(n.body)); },
          [](const sf::Violation& n) {
            StateFormula c = normalize(n.condition);
            if (n.kind != ViolationKind::Either)
              return f::violation(n.kind, n.norm, n.agent, n.begin, n.at, c);
            return or_core(f::violation(ViolationKind::Act, n.norm, n.agent, n.begin, n.at, c),
                           f::violation(ViolationKind::Omission, n.norm, n.agent, n.begin, n.at, c));
          },
          [](const sf::Resolved& n) {
            return f::resolved(n.kind, n.norm, n.agent, n.begin, n.at, n.resolved,
                               normalize(n.condition));
          },
          [](const sf::Forbidden& n) {
            return f::forbidden(n.norm, n.agent, n.begin, normalize(n.condition));
          },
          [](const sf::Obliged& n) {
            return f::obliged(n.norm, n.agent, n.begin, normalize(n.condition),
                              normalize(n.deadline));
          },
      },
      formula.node().value);
}

PathFormula normalize(const PathFormula& formula) {
  return std::visit(
      overloaded{
          [](const pf::Lift& n) { return p::lift(normalize(n.formula)); },
          [](const pf::Not& n) { return p_not(normalize(n.operand)); },
          [](const pf::And& n) { return p_and(normalize(n.lhs), normalize(n.rhs)); },
          [](const pf::Or& n) {
            return p_not(p_and(p_not(normalize(n.lhs)), p_not(normalize(n.rhs))));
          },
          [](const pf::Implies& n) {
            return p_not(p_and(normalize(n.lhs), p_not(normalize(n.rhs))));
          },
          [](const pf::Freeze& n) {
            PathFormula body = normalize(n.body);
            if (auto* s = lifted(body)) return p::lift(f::freeze(n.variable, *s));
            return p::freeze(n.variable, body);
          },
          [](const pf::Next& n) { return p::next(n.direction, normalize(n.operand)); },
          [](const pf::Finally& n) { return p::finally(n.direction, normalize(n.operand)); },
          [](const pf::Globally& n) { return p::globally(n.direction, normalize(n.operand)); },
          [](const pf::Until& n) {
            return p::until(n.direction, normalize(n.lhs), normalize(n.rhs));
          },
      },
      formula.node().value);
}

bool is_normalized(const StateFormula& formula) {
  return std::visit(
      overloaded{
          [](const sf::Constant&) { return true; },
          [](const sf::Atom&) { return true; },
          [](const sf::Less&) { return true; },
          [](const sf::Equal&) { return true; },
          [](const sf::Special&) { return true; },
          [](const sf::Or&) { return false; },
          [](const sf::Implies&) { return false; },
          [](const sf::Not& n) { return is_normalized(n.operand); },
          [](const sf::And& n) { return is_normalized(n.lhs) && is_normalized(n.rhs); },
          [](const sf::Stit& n) { return is_normalized(n.operand); },
          [](const sf::Exists& n) { return is_normalized(n.operand); },
          [](const sf::All& n) { return is_normalized(n.operand); },
          [](const sf::Freeze& n) { return is_normalized(n.body); },
          [](const sf::Violation& n) {
            return n.kind != ViolationKind::Either && is_normalized(n.condition);
          },
          [](const sf::Resolved& n) { return is_normalized(n.condition); },
          [](const sf::Forbidden& n) { return is_normalized(n.condition); },
          [](const sf::Obliged& n) { return is_normalized(n.condition) && is_normalized(n.deadline); },
      },
      formula.node().value);
}

bool is_normalized(const PathFormula& formula) {
  return std::visit(
      overloaded{
          [](const pf::Lift& n) { return is_normalized(n.formula); },
          [](const pf::Or&) { return false; },
          [](const pf::Implies&) { return false; },
          [](const pf::Not& n) { return !lifted(n.operand) && is_normalized(n.operand); },
          [](const pf::And& n) {
            return !(lifted(n.lhs) && lifted(n.rhs)) && is_normalized(n.lhs) &&
                   is_normalized(n.rhs);
          },
          [](const pf::Freeze& n) { return !lifted(n.body) && is_normalized(n.body); },
          [](const pf::Next& n) { return is_normalized(n.operand); },
          [](const pf::Finally& n) { return is_normalized(n.operand); },
          [](const pf::Globally& n) { return is_normalized(n.operand); },
          [](const pf::Until& n) { return is_normalized(n.lhs) && is_normalized(n.rhs); },
      },
      formula.node().value);
}

} // namespace normlog
