#include "normlog/scenarios.hpp"

#include "normlog/evaluator.hpp"

#include <algorithm>

namespace normlog {

namespace {

NormSpec spec(std::string id, NormKind kind, std::string agent, std::vector<std::string> roles,
              std::vector<std::string> imports, const char* activation, const char* deactivation,
              const char* deadline, const char* condition, const char* repair, const char* punishment) {
  NormSpec n;
  n.id = std::move(id);
  n.kind = kind;
  n.agent = std::move(agent);
  n.roles = std::move(roles);
  n.imports = std::move(imports);
  n.activation = parse_state_formula(activation);
  n.deactivation = parse_state_formula(deactivation);
  if (deadline) n.deadline = parse_state_formula(deadline);
  n.condition = parse_state_formula(condition);
  n.repair = parse_state_formula(repair);
  n.punishment = parse_state_formula(punishment);
  return n;
}

TraceStep step(std::set<std::string> atoms, std::map<std::string, std::set<std::string>> acting = {}) {
  return TraceStep{std::move(atoms), std::move(acting)};
}

} // namespace

NormSet littering_norms() {
  NormSet set;
  set.agents = {"a", "b", "c"};
  for (const char* x : {"a", "b", "c"}) {
    for (const char* pred : {"in_plaza", "litter", "throw_can", "pick_up"}) set.atoms.push_back(std::string(pred) + "(" + x + ")");
    for (const char* y : {"a", "b", "c"})
      if (std::string(x) != y) set.atoms.push_back(std::string("call_out(") + x + "," + y + ")");
  }
  using K = NormKind;
  set.norms.push_back(spec("i", K::Prohibition, "a", {}, {}, "in_plaza(a)", "!in_plaza(a)", nullptr,
                           "litter(a)", "!litter(a)", "!litter(a)"));
  set.norms.push_back(spec("j", K::Obligation, "a", {}, {"i"}, "t.VIOLA[i,a,tbi,t]{litter(a)}",
                           "t.RVIOL[i,a,tbi,tb,t - 1]{litter(a)}", "!in_plaza(a) & Apath X- in_plaza(a)",
                           "!litter(a)", "false", "false"));
  set.norms.push_back(spec("k", K::Obligation, "b", {"a"}, {"i"}, "t.VIOL[i,a,tbi,t]{litter(a)} & in_plaza(b)",
                           "t.RVIOL[i,a,tbi,tb,t - 1]{litter(a)}", "!in_plaza(b) & Apath X- in_plaza(b)",
                           "call_out(b,a)", "false", "false"));
  set.norms.push_back(spec("l", K::Obligation, "c", {"b", "a"}, {"k"},
                           "t.VIOL[k,b,tbk,t]{call_out(b,a)} & in_plaza(c)",
                           "t.RVIOL[k,b,tbk,tb,t - 1]{call_out(b,a)}", "!in_plaza(c) & Apath X- in_plaza(c)",
                           "call_out(c,b)", "false", "false"));
  validate(set);
  return set;
}

Scenario littering(const LitteringOptions& o) {
  Scenario sc{littering_norms(), {}};
  const bool repair = o.repair && !o.silent_bystander;
  std::set<std::string> plaza{"in_plaza(a)", "in_plaza(b)", "in_plaza(c)"};
  auto with = [](std::set<std::string> s, std::initializer_list<std::string> extra) {
    s.insert(extra);
    return s;
  };
  auto& t = sc.trace;
  t.push_back(step({}));
  t.push_back(step(plaza, {{"a", {"in_plaza(a)"}}, {"b", {"in_plaza(b)"}}, {"c", {"in_plaza(c)"}}}));
  std::set<std::string> now = with(plaza, {"litter(a)"});
  // Throwing a can is one way of littering: throw_can(a) implies litter(a).
  for (std::size_t n = 0; n < std::max<std::size_t>(o.throws, 1); ++n)
    t.push_back(step(with(now, {"throw_can(a)"}), {{"a", {"litter(a)", "throw_can(a)"}}}));
  if (repair) {
    now = plaza;
    t.push_back(step(with(now, {"pick_up(a)"}), {{"a", {"pick_up(a)"}}}));
  }
  t.push_back(step(now));
  for (std::size_t n = 0; n < o.idle; ++n) t.push_back(step(now));
  if (!repair && !o.silent_bystander)
    t.push_back(step(with(now, {"call_out(b,a)"}), {{"b", {"call_out(b,a)"}}}));
  now.erase("in_plaza(a)");
  t.push_back(step(now, {{"a", {}}}));
  now.erase("in_plaza(b)");
  t.push_back(step(now, {{"b", {}}}));
  if (o.silent_bystander) t.push_back(step(with(now, {"call_out(c,b)"}), {{"c", {"call_out(c,b)"}}}));
  now.erase("in_plaza(c)");
  t.push_back(step(now, {{"c", {}}}));
  return sc;
}

Scenario repeating_obligation(std::size_t cycles, const std::set<std::size_t>& missed) {
  Scenario sc;
  sc.norms.agents = {"a"};
  sc.norms.atoms = {"on_duty(a)", "report(a)", "bell"};
  sc.norms.norms.push_back(spec("o", NormKind::Obligation, "a", {}, {}, "on_duty(a)", "!on_duty(a)", "bell",
                                "report(a)", "false", "false"));
  auto& t = sc.trace;
  t.push_back(step({}));
  t.push_back(step({"on_duty(a)"}, {{"a", {"on_duty(a)"}}}));
  for (std::size_t c = 0; c < cycles; ++c) {
    if (missed.count(c)) t.push_back(step({"on_duty(a)"}));
    else t.push_back(step({"on_duty(a)", "report(a)"}, {{"a", {"report(a)"}}}));
    t.push_back(step({"on_duty(a)"}));
    t.push_back(step({"on_duty(a)", "bell"}));
  }
  t.push_back(step({}, {{"a", {}}}));
  return sc;
}

std::vector<std::size_t> forbidden_depths(const Model& annotated, const std::string& norm,
                                          const std::string& agent, TimeValue tb, const StateFormula& phi) {
  Evaluator ev(annotated);
  std::vector<std::size_t> out;
  StateFormula f = f::forbidden(norm, agent, TimeTerm::var("tb"), phi);
  for (StateId s = 0; s < annotated.size(); ++s)
    if (annotated.depth(s) >= tb && ev.eval_state(s, f, {{"tb", tb}})) out.push_back(annotated.depth(s));
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace normlog
