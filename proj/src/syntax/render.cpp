#include "normlog/syntax.hpp"

#include "../overloaded.hpp"

namespace normlog {

namespace {

// Binding strength, loosest first. A child printed in a slot that demands
// a tighter level gets parentheses.
enum Level { Implies = 1, Or, And, Until, Unary, Primary };

struct Out {
  std::string text;
  Level level;
  bool open_right; // ends in a freeze whose body would swallow a continuation
};

std::string dir_suffix(Direction d) { return d == Direction::Forward ? "+" : "-"; }

std::string wrap(const Out& o, Level need, bool right_edge) {
  if (o.level < need || (o.open_right && !right_edge)) return "(" + o.text + ")";
  return o.text;
}

Out render_state(const StateFormula& f);
Out render_path(const PathFormula& f);

Out binary(const Out& l, const Out& r, const char* op, Level level, bool right_assoc) {
  Level lneed = right_assoc ? static_cast<Level>(level + 1) : level;
  Level rneed = right_assoc ? level : static_cast<Level>(level + 1);
  Out out{wrap(l, lneed, false) + " " + op + " " + wrap(r, rneed, true), level, false};
  out.open_right = r.open_right && r.level >= rneed;
  return out;
}

Out unary(const std::string& prefix, const Out& o) {
  std::string body = wrap(o, Unary, true);
  bool open = o.open_right && o.level >= Unary;
  return {prefix + body, Unary, open};
}

std::string bracket(const std::string& kw, const std::string& norm, const std::string& agent,
                    std::initializer_list<const TimeTerm*> terms) {
  std::string s = kw + "[" + norm + "," + agent;
  for (const TimeTerm* t : terms) s += "," + render(*t);
  return s + "]";
}

std::string braced(const StateFormula& f) { return "{" + render(f) + "}"; }

Out render_state(const StateFormula& f) {
  return std::visit(
      overloaded{
          [](const sf::Constant& n) { return Out{n.value ? "true" : "false", Primary, false}; },
          [](const sf::Atom& n) { return Out{n.key(), Primary, false}; },
          [](const sf::Less& n) {
            return Out{render(n.lhs) + " < " + render(n.rhs), Primary, false};
          },
          [](const sf::Equal& n) {
            return Out{render(n.lhs) + " = " + render(n.rhs), Primary, false};
          },
          [](const sf::Not& n) { return unary("!", render_state(n.operand)); },
          [](const sf::And& n) {
            return binary(render_state(n.lhs), render_state(n.rhs), "&", And, false);
          },
          [](const sf::Or& n) {
            return binary(render_state(n.lhs), render_state(n.rhs), "|", Or, false);
          },
          [](const sf::Implies& n) {
            return binary(render_state(n.lhs), render_state(n.rhs), "->", Implies, true);
          },
          [](const sf::Stit& n) { return unary("E<" + n.agent + "> ", render_state(n.operand)); },
          [](const sf::Exists& n) { return unary("Epath ", render_path(n.operand)); },
          [](const sf::All& n) { return unary("Apath ", render_path(n.operand)); },
          [](const sf::Freeze& n) {
            return Out{n.variable + ".(" + render(n.body) + ")", Unary, true};
          },
          [](const sf::Special& n) {
            static const char* names[] = {"V", "D", "R", "P"};
            return Out{std::string(names[static_cast<int>(n.kind)]) + "[" + n.norm + "," +
                           n.agent + "]",
                       Primary, false};
          },
          [](const sf::Violation& n) {
            static const char* names[] = {"VIOLA", "VIOLO", "VIOL"};
            return Out{bracket(names[static_cast<int>(n.kind)], n.norm, n.agent,
                               {&n.begin, &n.at}) +
                           braced(n.condition),
                       Primary, false};
          },
          [](const sf::Resolved& n) {
            return Out{bracket(n.kind == Resolution::Repair ? "RVIOL" : "PVIOL", n.norm, n.agent,
                               {&n.begin, &n.at, &n.resolved}) +
                           braced(n.condition),
                       Primary, false};
          },
          [](const sf::Forbidden& n) {
            return Out{bracket("FORB", n.norm, n.agent, {&n.begin}) + braced(n.condition),
                       Primary, false};
          },
          [](const sf::Obliged& n) {
            return Out{bracket("OBL", n.norm, n.agent, {&n.begin}) + braced(n.condition) +
                           braced(n.deadline),
                       Primary, false};
          },
      },
      f.node().value);
}

Out render_path(const PathFormula& f) {
  return std::visit(
      overloaded{
          [](const pf::Lift& n) { return render_state(n.formula); },
          [](const pf::Not& n) { return unary("!", render_path(n.operand)); },
          [](const pf::And& n) {
            return binary(render_path(n.lhs), render_path(n.rhs), "&", And, false);
          },
          [](const pf::Or& n) {
            return binary(render_path(n.lhs), render_path(n.rhs), "|", Or, false);
          },
          [](const pf::Implies& n) {
            return binary(render_path(n.lhs), render_path(n.rhs), "->", Implies, true);
          },
          [](const pf::Freeze& n) {
            return Out{n.variable + ".(" + render(n.body) + ")", Unary, true};
          },
          [](const pf::Next& n) { return unary("X" + dir_suffix(n.direction) + " ", render_path(n.operand)); },
          [](const pf::Finally& n) {
            return unary("F" + dir_suffix(n.direction) + " ", render_path(n.operand));
          },
          [](const pf::Globally& n) {
            return unary("G" + dir_suffix(n.direction) + " ", render_path(n.operand));
          },
          [](const pf::Until& n) {
            return binary(render_path(n.lhs), render_path(n.rhs),
                          n.direction == Direction::Forward ? "U+" : "U-", Until, true);
          },
      },
      f.node().value);
}

} // namespace

std::string render(const TimeTerm& term) {
  switch (term.offset) {
  case TimeTerm::Offset::None: return term.variable;
  case TimeTerm::Offset::Plus: return term.variable + " + " + std::to_string(term.constant);
  case TimeTerm::Offset::Minus: return term.variable + " - " + std::to_string(term.constant);
  }
  return term.variable;
}

std::string render(const StateFormula& formula) { return render_state(formula).text; }

std::string render(const PathFormula& formula) { return render_path(formula).text; }

} // namespace normlog
