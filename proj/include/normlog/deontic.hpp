#pragma once

#include "normlog/evaluator.hpp"

#include <string>

namespace normlog {

struct ViolationQuery {
  ViolationKind kind = ViolationKind::Either;
  std::string norm;
  std::string agent;
  TimeTerm begin; // t_b
  TimeTerm at;    // t_v
  StateFormula condition;
};

struct RepairQuery {
  Resolution target = Resolution::Repair;
  std::string norm;
  std::string agent;
  TimeTerm begin;
  TimeTerm at;
  TimeTerm resolved; // t_r
  StateFormula condition;
};

bool viol_act(Evaluator& ev, StateId state, const ViolationQuery& q, const Assignment& tau = {});
bool viol_omit(Evaluator& ev, StateId state, const ViolationQuery& q, const Assignment& tau = {});
bool viol_either(Evaluator& ev, StateId state, const ViolationQuery& q, const Assignment& tau = {});
bool viol_resolved(Evaluator& ev, StateId state, const RepairQuery& q, const Assignment& tau = {});
bool forbidden(Evaluator& ev, StateId state, const std::string& norm, const std::string& agent,
               const TimeTerm& begin, const StateFormula& phi, const Assignment& tau = {});
bool obliged(Evaluator& ev, StateId state, const std::string& norm, const std::string& agent,
             const TimeTerm& begin, const StateFormula& phi, const StateFormula& deadline,
             const Assignment& tau = {});

/// Outcome of a modality check. `clause` names the first unmet condition:
/// "interval" for the time-point guard, otherwise "a".."d" as listed in
/// docs/grammar.md. Empty when the value is true or the formula is not a
/// modality.
struct Verdict {
  bool value = false;
  std::string clause;
  std::string detail;
};

Verdict explain(Evaluator& ev, StateId state, const StateFormula& formula, const Assignment& tau = {});

// Value-level forms: time points already evaluated, condition normalized.
namespace deontic {

bool act(Evaluator& ev, StateId s, const std::string& norm, const std::string& agent, TimeValue tb,
         TimeValue tv, const StateFormula& phi, const Assignment& tau);
bool omission(Evaluator& ev, StateId s, const std::string& norm, const std::string& agent,
              TimeValue tb, TimeValue tv, const StateFormula& phi, const Assignment& tau);
bool either(Evaluator& ev, StateId s, const std::string& norm, const std::string& agent,
            TimeValue tb, TimeValue tv, const StateFormula& phi, const Assignment& tau);
bool resolved(Evaluator& ev, StateId s, Resolution target, const std::string& norm,
              const std::string& agent, TimeValue tb, TimeValue tv, TimeValue tr,
              const StateFormula& phi, const Assignment& tau);
bool forbidden(Evaluator& ev, StateId s, const std::string& norm, const std::string& agent,
               TimeValue tb, const StateFormula& phi, const Assignment& tau);
bool obliged(Evaluator& ev, StateId s, const std::string& norm, const std::string& agent,
             TimeValue tb, const StateFormula& phi, const StateFormula& deadline,
             const Assignment& tau);

} // namespace deontic

} // namespace normlog
