#include "brute.hpp"
#include "fixtures.hpp"
#include "gen.hpp"

#include "normlog/error.hpp"
#include "normlog/evaluator.hpp"

#include <doctest.h>

using namespace normlog;

namespace {

using Names = std::set<std::string>;

Names true_at(const Model& m, const std::string& formula, const Assignment& tau = {}) {
  Evaluator ev(m);
  StateFormula f = parse_state_formula(formula);
  Names out;
  for (StateId s = 0; s < m.size(); ++s)
    if (ev.eval_state(s, f, tau)) out.insert(m.name(s));
  return out;
}

Names leaves(const Model& m) {
  Names out;
  for (StateId s : leaves_below(m, m.root())) out.insert(m.name(s));
  return out;
}

} // namespace

TEST_CASE("time terms") {
  Assignment tau{{"x", 3}};
  CHECK(eval_time_term(tau, TimeTerm::var("x")) == 3);
  CHECK(eval_time_term(tau, TimeTerm::plus("x", 2)) == 5);
  CHECK(eval_time_term(tau, TimeTerm::minus("x", 3)) == 0);
  CHECK_THROWS_WITH_AS(eval_time_term(tau, TimeTerm::minus("x", 4)), doctest::Contains("negative time"), EvalError);
  CHECK_THROWS_WITH_AS(eval_time_term(tau, TimeTerm::var("y")), doctest::Contains("unbound"), EvalError);
  Model m = fixture("fig1a");
  Evaluator ev(m);
  CHECK_THROWS_AS(ev.eval_state(m.root(), parse_state_formula("t.(t - 1 < t)")), EvalError);
  CHECK_THROWS_AS(ev.eval_state(m.root(), parse_state_formula("x < y"), {{"x", 1}}), EvalError);
  CHECK_THROWS_AS(ev.eval_state(m.root(), parse_state_formula("V[nope,a]")), EvalError);
}

TEST_CASE("freeze binds the current depth") {
  Model m = fixture("fig1a");
  Evaluator ev(m);
  for (StateId s = 0; s < m.size(); ++s) {
    Assignment tau{{"x", m.depth(s)}};
    CHECK(ev.eval_state(s, parse_state_formula("t.(t = x)"), tau));
    CHECK_FALSE(ev.eval_state(s, parse_state_formula("t.(t < x)"), tau));
    // Inside a path formula the binding follows the position.
    CHECK(ev.eval_state(s, parse_state_formula("Apath G- t.(t < x | t = x)"), tau));
  }
}

TEST_CASE("future and past operators") {
  Model m = fixture("fig1a");
  // Strict F, reflexive G.
  CHECK(true_at(m, "Apath F+ true") == [&] {
    Names all;
    for (StateId s = 0; s < m.size(); ++s)
      if (!m.children(s).empty()) all.insert(m.name(s));
    return all;
  }());
  CHECK(true_at(m, "Epath X+ true") == true_at(m, "Apath F+ true"));
  CHECK(true_at(m, "Apath X- true").count("w") == 0);
  CHECK(true_at(m, "Apath F- true").count("w") == 0);
  CHECK(true_at(m, "Apath G+ true").size() == m.size());
  CHECK(true_at(m, "Epath F+ phi") == Names{"w", "s1", "s2", "s3", "s4", "s5"});
  CHECK(true_at(m, "Apath F- phi") == Names{"s7a", "s7b"});
  CHECK(true_at(m, "Epath (!phi U+ phi)") == Names{"w", "s1", "s2", "s3", "s4", "s5"});
  // Past until needs the left operand from just after the witness up to now.
  CHECK(true_at(m, "Apath (false U- t.(t = z))", {{"z", 0}}).empty());
  CHECK(true_at(m, "Apath ((!t.(t = z)) U- t.(t = z))", {{"z", 0}}) == true_at(m, "Apath X- true"));
  CHECK(leaves(m) == true_at(m, "Apath !X+ true"));
}

TEST_CASE("stit needs a choice, the agent on every transition and a possible alternative") {
  Model m = fixture("fig1a");
  CHECK(true_at(m, "E<a> phi") == Names{"s5"});
  // The condition holds everywhere, so no state can be seen to.
  CHECK(true_at(m, "E<a> true").empty());
  CHECK(true_at(m, "E<a> (phi | !phi)").empty());
  Model b = fixture("fig1b");
  CHECK(true_at(b, "E<a> phi") == Names{"s2"});
  CHECK(true_at(b, "E<a> phi").count("s6") == 0);
  Evaluator ev(m);
  CHECK_THROWS_AS(ev.eval_stit(m.root(), "zed", parse_state_formula("phi")), EvalError);
}

TEST_CASE("counting deadlines on a path") {
  Model m = fixture("fig1b");
  Path p = path_to(m, m.find("s7a"));
  CHECK(count_on_path(m, p, 1, 6, parse_path_formula("D[i,a]")) == 2);
  CHECK(count_on_path(m, p, 4, 6, parse_path_formula("D[i,a]")) == 1);
  CHECK(count_on_path(m, p, 1, 6, parse_path_formula("X- D[i,a]")) == 1);
  // The path is cut after j: nothing lies beyond position 6.
  CHECK(count_on_path(m, p, 6, 6, parse_path_formula("X+ true")) == 0);
  CHECK_THROWS_AS(count_on_path(m, p, 5, 4, parse_path_formula("true")), EvalError);
}

TEST_CASE("horizon hides deeper states") {
  Model m = fixture("fig1a");
  Evaluator ev(m, 5);
  CHECK_FALSE(ev.eval_state(m.find("s5"), parse_state_formula("E<a> phi")));
  CHECK(ev.eval_state(m.find("s5"), parse_state_formula("Apath !X+ true")));
  CHECK_THROWS_AS(ev.eval_state(m.find("s6"), parse_state_formula("true")), EvalError);
}

TEST_CASE("evaluator agrees with the brute-force semantics on random models") {
  std::mt19937 rng(5);
  std::size_t mismatches = 0;
  for (int n = 0; n < 300; ++n) {
    Model m = gen::random_model(rng, 10);
    brute::Oracle oracle(m);
    Evaluator ev(m);
    Assignment tau{{"x", gen::pick(rng, m.height() + 1)}};
    brute::Env env{{"x", static_cast<long long>(tau.get("x"))}};
    gen::FormulaGen g(rng, {"x"});
    StateFormula phi = g.state(4);
    PathFormula alpha = g.path(4);
    for (StateId s = 0; s < m.size(); ++s) mismatches += ev.eval_state(s, phi, tau) != oracle.state(s, phi, env);
    for (const auto& seq : oracle.paths(m.root())) {
      Path path{seq};
      for (std::size_t j = 0; j < seq.size(); ++j) {
        mismatches += ev.eval_path(path, j, alpha, tau) != oracle.path(seq, j, alpha, env);
        mismatches += ev.count_on_path(path, 0, j, alpha, tau) != oracle.count(seq, 0, j, alpha, env);
      }
    }
  }
  CHECK(mismatches == 0);
}
