#include "normlog/deontic.hpp"

#include "normlog/error.hpp"

namespace normlog {

namespace {

enum Code { CodeAct = 1, CodeOmission, CodeRepair, CodePunish, CodeForbidden, CodeObliged };

Verdict ok() { return {true, "", ""}; }
Verdict fail(const char* clause, std::string detail) { return {false, clause, std::move(detail)}; }

std::string num(TimeValue v) { return std::to_string(v); }

struct Query {
  Evaluator& ev;
  StateId s;
  const std::string& norm;
  const std::string& agent;
  const StateFormula& phi;
  const Assignment& tau;

  const Model& m() const { return ev.model(); }
  StateId anc(std::size_t k) const { return m().ancestor(s, k); }
  bool V(StateId w) const { return ev.special_value(SpecialKind::Violation, norm, agent, w); }
  bool D(StateId w) const { return ev.special_value(SpecialKind::Deadline, norm, agent, w); }
  bool E(StateId w) const { return ev.stit_value(w, agent, phi, tau); }
  bool holds(StateId w) const { return ev.state_value(w, phi, tau); }
};

Verdict act_verdict(const Query& q, TimeValue tb, TimeValue tv) {
  std::size_t d = q.m().depth(q.s);
  if (!(tb <= tv && tv <= d))
    return fail("interval", "needs t_b <= t_v <= depth, got " + num(tb) + ", " + num(tv) + ", " + num(d));
  StateId u = q.anc(tv);
  if (tv == 0 || !q.V(u) || !q.E(*q.m().parent(u)))
    return fail("a", "no V at depth " + num(tv) + " preceded by E<" + q.agent + "> of the condition");
  for (TimeValue k = tb; k <= tv; ++k) {
    StateId w = q.anc(k);
    if (q.holds(w) && !q.V(w)) return fail("b", "condition holds without V at depth " + num(k));
  }
  return ok();
}

Verdict omission_verdict(const Query& q, TimeValue tb, TimeValue tv) {
  std::size_t d = q.m().depth(q.s);
  if (!(tb <= tv && tv <= d))
    return fail("interval", "needs t_b <= t_v <= depth, got " + num(tb) + ", " + num(tv) + ", " + num(d));
  StateId u = q.anc(tv);
  if (!q.V(u) || !q.D(u)) return fail("a", "no V with D at depth " + num(tv));
  for (TimeValue k = tb; k <= tv; ++k) {
    StateId w = q.anc(k);
    if (q.V(w) && q.holds(w)) return fail("b", "V together with the condition at depth " + num(k));
  }
  // Back from t_v to the previous deadline (or t_b): no action, no deadline.
  bool clean = tb == tv;
  for (TimeValue k = tv; !clean && k-- > 0;) {
    StateId w = q.anc(k);
    if (k == tb || q.D(w)) {
      clean = true;
      break;
    }
    if (q.E(w)) break;
  }
  if (!clean) return fail("c", "agent acted since the previous deadline");
  std::size_t deadlines = 0, handled = 0;
  for (TimeValue k = tb; k <= tv; ++k) {
    StateId w = q.anc(k);
    if (q.D(w)) ++deadlines;
    if ((k < tv && deontic::omission(q.ev, w, q.norm, q.agent, tb, k, q.phi, q.tau)) || q.E(w)) ++handled;
  }
  if (deadlines <= handled)
    return fail("d", num(deadlines) + " deadlines against " + num(handled) + " actions or earlier violations");
  return ok();
}

Verdict resolved_verdict(const Query& q, Resolution target, TimeValue tb, TimeValue tv, TimeValue tr) {
  std::size_t d = q.m().depth(q.s);
  if (!(tb <= tv && tv <= tr && tv <= d))
    return fail("interval", "needs t_b <= t_v <= t_r and t_v <= depth, got " + num(tb) + ", " + num(tv) +
                                ", " + num(tr) + ", " + num(d));
  if (!deontic::either(q.ev, q.s, q.norm, q.agent, tb, tv, q.phi, q.tau))
    return fail("a", "no violation at t_v = " + num(tv));
  SpecialKind kind = target == Resolution::Repair ? SpecialKind::Repair : SpecialKind::Punish;
  const StateFormula& mark = q.ev.special_formula(kind, q.norm, q.agent);
  auto acts = [&](StateId w) { return q.ev.stit_value(w, q.agent, mark, q.tau); };
  if (!(tr < d) || !acts(q.anc(tr)))
    return fail("b", std::string("no E<") + q.agent + "> " + (target == Resolution::Repair ? "R" : "P") +
                         " strictly before now at depth " + num(tr));
  std::size_t actions = 0, open = 0;
  for (TimeValue k = tv; k <= tr; ++k)
    if (acts(q.anc(k))) ++actions;
  for (TimeValue k = tb; k <= tv; ++k) {
    StateId w = q.anc(k);
    if (!deontic::either(q.ev, w, q.norm, q.agent, tb, k, q.phi, q.tau)) continue;
    bool settled = false;
    for (TimeValue m = k + 1; m <= tv && !settled; ++m)
      settled = deontic::resolved(q.ev, q.anc(m), target, q.norm, q.agent, tb, k, m, q.phi, q.tau);
    if (!settled) ++open;
  }
  if (actions < open)
    return fail("c", num(actions) + " resolving actions against " + num(open) + " unresolved violations");
  return ok();
}

Verdict forbidden_verdict(const Query& q, TimeValue tb) {
  if (!q.E(q.s)) return ok();
  for (StateId c : q.ev.children(q.s))
    if (!deontic::act(q.ev, c, q.norm, q.agent, tb, q.m().depth(c), q.phi, q.tau))
      return fail("a", "successor '" + q.m().name(c) + "' carries no fresh act violation");
  return ok();
}

Verdict obliged_verdict(const Query& q, TimeValue tb, const StateFormula& deadline) {
  std::size_t d = q.m().depth(q.s);
  if (q.ev.state_value(q.s, deadline, q.tau)) return fail("b", "deadline already holds now");
  for (StateId leaf : leaves_below(q.m(), q.s, q.ev.horizon())) {
    Path path = path_to(q.m(), leaf);
    std::size_t j = d + 1;
    while (j < path.size() && !q.ev.state_value(path[j], deadline, q.tau)) ++j;
    if (j >= path.size()) return fail("a", "no deadline ahead on the path to '" + q.m().name(leaf) + "'");
    bool acted = false;
    for (std::size_t k = d; k < j; ++k) {
      if (deontic::omission(q.ev, path[k], q.norm, q.agent, tb, k, q.phi, q.tau))
        return fail("c", "fresh omission violation at depth " + num(k) + " before the deadline");
      acted = acted || q.E(path[k]);
    }
    if (!acted && !deontic::omission(q.ev, path[j], q.norm, q.agent, tb, j, q.phi, q.tau))
      return fail("d", "inaction does not raise a violation at the deadline at depth " + num(j));
  }
  return ok();
}

template <class Fn>
bool memo(Evaluator& ev, DeonticKey key, Fn&& compute) {
  if (auto hit = ev.lookup(key)) return *hit;
  ev.count_evaluation();
  bool v = compute();
  ev.store(std::move(key), v);
  return v;
}

} // namespace

namespace deontic {

bool act(Evaluator& ev, StateId s, const std::string& norm, const std::string& agent, TimeValue tb,
         TimeValue tv, const StateFormula& phi, const Assignment& tau) {
  if (!(tb <= tv && tv <= ev.model().depth(s))) return false;
  StateId anchor = ev.model().ancestor(s, tv);
  DeonticKey key{CodeAct, anchor, norm, agent, tb, tv, 0, phi.id(), nullptr, ev.binding_key(phi, tau)};
  return memo(ev, std::move(key), [&] { return act_verdict({ev, anchor, norm, agent, phi, tau}, tb, tv).value; });
}

bool omission(Evaluator& ev, StateId s, const std::string& norm, const std::string& agent,
              TimeValue tb, TimeValue tv, const StateFormula& phi, const Assignment& tau) {
  if (!(tb <= tv && tv <= ev.model().depth(s))) return false;
  StateId anchor = ev.model().ancestor(s, tv);
  DeonticKey key{CodeOmission, anchor, norm, agent, tb, tv, 0, phi.id(), nullptr, ev.binding_key(phi, tau)};
  return memo(ev, std::move(key),
              [&] { return omission_verdict({ev, anchor, norm, agent, phi, tau}, tb, tv).value; });
}

bool either(Evaluator& ev, StateId s, const std::string& norm, const std::string& agent,
            TimeValue tb, TimeValue tv, const StateFormula& phi, const Assignment& tau) {
  return act(ev, s, norm, agent, tb, tv, phi, tau) || omission(ev, s, norm, agent, tb, tv, phi, tau);
}

bool resolved(Evaluator& ev, StateId s, Resolution target, const std::string& norm,
              const std::string& agent, TimeValue tb, TimeValue tv, TimeValue tr,
              const StateFormula& phi, const Assignment& tau) {
  std::size_t d = ev.model().depth(s);
  if (!(tb <= tv && tv <= tr && tr < d)) return false;
  StateId anchor = ev.model().ancestor(s, tr + 1);
  DeonticKey key{target == Resolution::Repair ? CodeRepair : CodePunish, anchor, norm, agent, tb, tv, tr,
                 phi.id(), nullptr, ev.binding_key(phi, tau)};
  return memo(ev, std::move(key), [&] {
    return resolved_verdict({ev, anchor, norm, agent, phi, tau}, target, tb, tv, tr).value;
  });
}

bool forbidden(Evaluator& ev, StateId s, const std::string& norm, const std::string& agent,
               TimeValue tb, const StateFormula& phi, const Assignment& tau) {
  DeonticKey key{CodeForbidden, s, norm, agent, tb, 0, 0, phi.id(), nullptr, ev.binding_key(phi, tau)};
  return memo(ev, std::move(key), [&] { return forbidden_verdict({ev, s, norm, agent, phi, tau}, tb).value; });
}

bool obliged(Evaluator& ev, StateId s, const std::string& norm, const std::string& agent,
             TimeValue tb, const StateFormula& phi, const StateFormula& deadline,
             const Assignment& tau) {
  std::vector<TimeValue> bindings = ev.binding_key(phi, tau);
  for (TimeValue v : ev.binding_key(deadline, tau)) bindings.push_back(v);
  DeonticKey key{CodeObliged, s, norm, agent, tb, 0, 0, phi.id(), deadline.id(), std::move(bindings)};
  return memo(ev, std::move(key),
              [&] { return obliged_verdict({ev, s, norm, agent, phi, tau}, tb, deadline).value; });
}

} // namespace deontic

bool viol_act(Evaluator& ev, StateId state, const ViolationQuery& q, const Assignment& tau) {
  return ev.eval_state(state, f::violation(ViolationKind::Act, q.norm, q.agent, q.begin, q.at, q.condition), tau);
}

bool viol_omit(Evaluator& ev, StateId state, const ViolationQuery& q, const Assignment& tau) {
  return ev.eval_state(state, f::violation(ViolationKind::Omission, q.norm, q.agent, q.begin, q.at, q.condition),
                       tau);
}

bool viol_either(Evaluator& ev, StateId state, const ViolationQuery& q, const Assignment& tau) {
  return ev.eval_state(state, f::violation(ViolationKind::Either, q.norm, q.agent, q.begin, q.at, q.condition),
                       tau);
}

bool viol_resolved(Evaluator& ev, StateId state, const RepairQuery& q, const Assignment& tau) {
  return ev.eval_state(
      state, f::resolved(q.target, q.norm, q.agent, q.begin, q.at, q.resolved, q.condition), tau);
}

bool forbidden(Evaluator& ev, StateId state, const std::string& norm, const std::string& agent,
               const TimeTerm& begin, const StateFormula& phi, const Assignment& tau) {
  return ev.eval_state(state, f::forbidden(norm, agent, begin, phi), tau);
}

bool obliged(Evaluator& ev, StateId state, const std::string& norm, const std::string& agent,
             const TimeTerm& begin, const StateFormula& phi, const StateFormula& deadline,
             const Assignment& tau) {
  return ev.eval_state(state, f::obliged(norm, agent, begin, phi, deadline), tau);
}

Verdict explain(Evaluator& ev, StateId state, const StateFormula& formula, const Assignment& tau) {
  const auto& node = formula.node().value;
  auto bound = [&](const StateFormula& whole) {
    // Runs the binding checks and warms the caches.
    return ev.eval_state(state, whole, tau);
  };
  if (auto* n = std::get_if<sf::Violation>(&node)) {
    bool value = bound(formula);
    StateFormula phi = normalize(n->condition);
    ev.binding_key(phi, tau);
    Query q{ev, state, n->norm, n->agent, phi, tau};
    TimeValue tb = eval_time_term(tau, n->begin), tv = eval_time_term(tau, n->at);
    if (n->kind == ViolationKind::Act) return act_verdict(q, tb, tv);
    if (n->kind == ViolationKind::Omission) return omission_verdict(q, tb, tv);
    if (value) return ok();
    Verdict a = act_verdict(q, tb, tv), o = omission_verdict(q, tb, tv);
    return {false, "act:" + a.clause + ",omission:" + o.clause, a.detail + "; " + o.detail};
  }
  if (auto* n = std::get_if<sf::Resolved>(&node)) {
    bound(formula);
    StateFormula phi = normalize(n->condition);
    ev.binding_key(phi, tau);
    Query q{ev, state, n->norm, n->agent, phi, tau};
    return resolved_verdict(q, n->kind, eval_time_term(tau, n->begin), eval_time_term(tau, n->at),
                            eval_time_term(tau, n->resolved));
  }
  if (auto* n = std::get_if<sf::Forbidden>(&node)) {
    bound(formula);
    StateFormula phi = normalize(n->condition);
    ev.binding_key(phi, tau);
    return forbidden_verdict({ev, state, n->norm, n->agent, phi, tau}, eval_time_term(tau, n->begin));
  }
  if (auto* n = std::get_if<sf::Obliged>(&node)) {
    bound(formula);
    StateFormula phi = normalize(n->condition), delta = normalize(n->deadline);
    ev.binding_key(phi, tau);
    ev.binding_key(delta, tau);
    return obliged_verdict({ev, state, n->norm, n->agent, phi, tau}, eval_time_term(tau, n->begin), delta);
  }
  return {bound(formula), "", ""};
}

} // namespace normlog
