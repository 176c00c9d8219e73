#include "fixtures.hpp"

#include "normlog/deontic.hpp"
#include "normlog/error.hpp"

#include <doctest.h>

using namespace normlog;

namespace {

std::set<std::string> true_at(const Model& m, const std::string& formula, const Assignment& tau) {
  Evaluator ev(m);
  StateFormula f = parse_state_formula(formula);
  std::set<std::string> out;
  for (StateId s = 0; s < m.size(); ++s)
    if (ev.eval_state(s, f, tau)) out.insert(m.name(s));
  return out;
}

using Names = std::set<std::string>;

} // namespace

TEST_CASE("act violation in the first figure") {
  Model m = fixture("fig1a");
  CHECK(true_at(m, "VIOLA[i,a,tb,tv]{phi}", {{"tb", 1}, {"tv", 6}}) == Names{"s6", "s7a", "s7b"});
  CHECK(true_at(m, "VIOLO[i,a,tb,tv]{phi}", {{"tb", 1}, {"tv", 6}}).empty());
  CHECK(true_at(m, "VIOL[i,a,tb,tv]{phi}", {{"tb", 1}, {"tv", 6}}) == Names{"s6", "s7a", "s7b"});
  CHECK(true_at(m, "VIOLA[i,a,tb,tv]{phi}", {{"tb", 1}, {"tv", 5}}).empty());
}

TEST_CASE("omission violation in the second figure") {
  Model m = fixture("fig1b");
  CHECK(true_at(m, "VIOLO[i,a,tb,tv]{phi}", {{"tb", 1}, {"tv", 6}}) == Names{"s6", "s7a", "s7b"});
  CHECK(true_at(m, "VIOLO[i,a,tb,tv]{phi}", {{"tb", 1}, {"tv", 3}}).empty());
  CHECK(true_at(m, "VIOL[i,a,tb,tv]{phi}", {{"tb", 1}, {"tv", 6}}) == Names{"s6", "s7a", "s7b"});
  Model twice = fixture("fig1b_double_action");
  CHECK(true_at(twice, "VIOLO[i,a,tb,tv]{phi}", {{"tb", 1}, {"tv", 6}}).empty());
}

TEST_CASE("repair in the third figure") {
  Model m = fixture("fig2");
  Assignment tau{{"tb", 1}, {"tv", 4}, {"tr", 6}};
  CHECK(true_at(m, "RVIOL[i,a,tb,tv,tr]{phi}", tau) == Names{"s7a", "s7b"});
  CHECK(true_at(m, "PVIOL[i,a,tb,tv,tr]{phi}", tau).empty());
  CHECK(true_at(m, "VIOL[i,a,tb,tv]{phi}", tau) == Names{"s4", "s5", "s6", "s7a", "s7b", "x4", "x5"});
}

TEST_CASE("forbidden fails only where the act would go unsanctioned") {
  Model a = fixture("fig1a");
  CHECK(true_at(a, "FORB[i,a,tb]{phi}", {{"tb", 1}}).size() == a.size());
  Model b = fixture("fig1b");
  Names all_but_s2;
  for (StateId s = 0; s < b.size(); ++s)
    if (b.name(s) != "s2") all_but_s2.insert(b.name(s));
  CHECK(true_at(b, "FORB[i,a,tb]{phi}", {{"tb", 1}}) == all_but_s2);
}

TEST_CASE("obliged needs a coming deadline on every branch") {
  Model b = fixture("fig1b");
  CHECK(true_at(b, "OBL[i,a,tb]{phi}{due}", {{"tb", 1}}) == Names{"s2", "s5"});
}

TEST_CASE("explain names the first unmet clause") {
  Model a = fixture("fig1a");
  Evaluator ev(a);
  StateId s6 = a.find("s6");
  StateFormula act = parse_state_formula_raw("VIOLA[i,a,tb,tv]{phi}");
  Verdict yes = explain(ev, s6, act, {{"tb", 1}, {"tv", 6}});
  CHECK(yes.value);
  CHECK(yes.clause.empty());
  CHECK(explain(ev, s6, act, {{"tb", 1}, {"tv", 5}}).clause == "a");
  CHECK(explain(ev, s6, act, {{"tb", 3}, {"tv", 2}}).clause == "interval");
  CHECK(explain(ev, s6, act, {{"tb", 1}, {"tv", 7}}).clause == "interval");
  Model b = fixture("fig1b");
  Evaluator eb(b);
  Verdict omit = explain(eb, b.find("s3"), parse_state_formula_raw("VIOLO[i,a,tb,tv]{phi}"), {{"tb", 1}, {"tv", 3}});
  CHECK_FALSE(omit.value);
  CHECK(omit.clause == "a");
  Verdict twice = explain(eb, b.find("s6"), parse_state_formula_raw("VIOLO[i,a,tb,tv]{phi}"), {{"tb", 1}, {"tv", 6}});
  CHECK(twice.value);
  Model d = fixture("fig1b_double_action");
  Evaluator ed(d);
  CHECK(explain(ed, d.find("s6"), parse_state_formula_raw("VIOLO[i,a,tb,tv]{phi}"), {{"tb", 1}, {"tv", 6}}).clause != "");
  CHECK(explain(ev, s6, parse_state_formula_raw("phi"), {}).clause.empty());
}
