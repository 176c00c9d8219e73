#include "gen.hpp"

#include "normlog/error.hpp"
#include "normlog/syntax.hpp"

#include <doctest.h>

using namespace normlog;

namespace {

std::size_t error_position(const std::string& text) {
  try {
    parse_state_formula(text);
  } catch (const ParseError& e) {
    return e.position();
  }
  FAIL("no parse error for " << text);
  return 0;
}

} // namespace

TEST_CASE("render then parse is the identity on normalized formulas") {
  std::mt19937 rng(11);
  for (int n = 0; n < 2000; ++n) {
    gen::FormulaGen g(rng, {"x", "y"});
    StateFormula f = g.state(1 + static_cast<int>(gen::pick(rng, 6)));
    StateFormula norm = normalize(f);
    INFO(render(f));
    CHECK(is_normalized(norm));
    CHECK(parse_state_formula(render(f)) == norm);
    CHECK(parse_state_formula(render(norm)) == norm);
    CHECK(normalize(norm) == norm);
  }
  for (int n = 0; n < 500; ++n) {
    gen::FormulaGen g(rng, {"x"});
    PathFormula a = g.path(1 + static_cast<int>(gen::pick(rng, 5)));
    INFO(render(a));
    CHECK(parse_path_formula(render(a)) == normalize(a));
  }
}

TEST_CASE("sugar normalizes to the core connectives") {
  CHECK(parse_state_formula("p | q") == f::neg(f::conj(f::neg(f::atom("p")), f::neg(f::atom("q")))));
  CHECK(parse_state_formula("p -> q") == f::neg(f::conj(f::atom("p"), f::neg(f::atom("q")))));
  CHECK(parse_state_formula_raw("p | q") == f::disj(f::atom("p"), f::atom("q")));
  auto viol = [](ViolationKind k) {
    return f::violation(k, "i", "a", TimeTerm::var("x"), TimeTerm::var("y"), f::atom("p"));
  };
  CHECK(parse_state_formula("VIOL[i,a,x,y]{p}") == normalize(f::disj(viol(ViolationKind::Act), viol(ViolationKind::Omission))));
  CHECK(parse_state_formula_raw("VIOL[i,a,x,y]{p}") == viol(ViolationKind::Either));
}

TEST_CASE("precedence and grouping") {
  CHECK(parse_state_formula_raw("p & q | r") == f::disj(f::conj(f::atom("p"), f::atom("q")), f::atom("r")));
  CHECK(parse_state_formula_raw("!p & q") == f::conj(f::neg(f::atom("p")), f::atom("q")));
  CHECK(parse_state_formula_raw("E<a> p & q") == f::conj(f::stit("a", f::atom("p")), f::atom("q")));
  CHECK(parse_state_formula("Apath (p U+ X- q)") ==
        f::all(p::until(Direction::Forward, p::lift(f::atom("p")), p::next(Direction::Backward, p::lift(f::atom("q"))))));
  CHECK(parse_state_formula("t.(t < x + 1)") ==
        f::freeze("t", f::less(TimeTerm::var("t"), TimeTerm::plus("x", 1))));
  CHECK(parse_state_formula("litter(a)") == f::atom("litter", {"a"}));
}

TEST_CASE("parse errors carry the byte offset") {
  CHECK(error_position("p &") == 3);
  CHECK(error_position("p $ q") == 2);
  CHECK(error_position("FOO[i,a]") == 0);
  CHECK(error_position("V[i]") == 0);
  CHECK(error_position("VIOLA[i,a,tb,tv]{phi") == 20);
  CHECK(error_position("p q") == 2);
  CHECK_THROWS_AS(parse_state_formula("X+ p"), ParseError);
  CHECK_THROWS_AS(parse_state_formula("E<a> X+ p"), ParseError);
  CHECK_THROWS_WITH_AS(parse_state_formula("p &"), doctest::Contains("at position 3"), ParseError);
}

TEST_CASE("free time variables respect freezes") {
  CHECK(free_time_variables(parse_state_formula("t.(t < x) & y = z")) == std::set<std::string>{"x", "y", "z"});
  CHECK(free_time_variables(parse_state_formula("VIOLA[i,a,tb,tv]{t.(t = tb)}")) == std::set<std::string>{"tb", "tv"});
  CHECK(free_time_variables(parse_path_formula("t.F+ (x < t)")) == std::set<std::string>{"x"});
  CHECK(free_time_variables(parse_state_formula("p")).empty());
}

TEST_CASE("agent substitution and references") {
  StateFormula g = parse_state_formula("E<x> litter(x) & V[i,x] & VIOLA[k,y,tb,tv]{call_out(y,x)}");
  StateFormula h = substitute_agents(g, {{"x", "a"}, {"y", "b"}});
  CHECK(h == parse_state_formula("E<a> litter(a) & V[i,a] & VIOLA[k,b,tb,tv]{call_out(b,a)}"));
  auto refs = norm_references(h);
  CHECK(std::count(refs.begin(), refs.end(), std::pair<std::string, std::string>{"i", "a"}) == 1);
  CHECK(std::count(refs.begin(), refs.end(), std::pair<std::string, std::string>{"k", "b"}) == 1);
  CHECK(atom_keys(h) == std::set<std::string>{"litter(a)", "call_out(b,a)"});
}
