#pragma once

#include "normlog/model.hpp"
#include "normlog/syntax.hpp"

#include <random>
#include <string>
#include <vector>

namespace gen {

using namespace normlog;

inline const std::vector<std::string> kAgents{"a", "b"};
inline const std::vector<std::string> kAtoms{"p", "q", "r"};
inline const std::string kNorm = "i";

inline std::size_t pick(std::mt19937& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool chance(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }

/// Random tree of 1..max_states states over agents a, b, atoms p, q, r and
/// the special propositions of norm i.
inline Model random_model(std::mt19937& rng, std::size_t max_states = 12) {
  auto atoms = [&] {
    std::set<std::string> out;
    for (const auto& p : kAtoms)
      if (chance(rng, 0.5)) out.insert(p);
    return out;
  };
  Model m("s0", atoms());
  for (const auto& a : kAgents) m.declare_agent(a);
  m.declare_norm(kNorm);
  std::size_t n = 1 + pick(rng, max_states);
  for (std::size_t k = 1; k < n; ++k) {
    // Bias towards deep trees so intervals have room.
    StateId parent = chance(rng, 0.6) ? k - 1 : pick(rng, k);
    std::set<std::string> label;
    for (const auto& a : kAgents)
      if (chance(rng, 0.7)) label.insert(a);
    m.add_state("s" + std::to_string(k), parent, label, atoms());
  }
  for (StateId s = 0; s < m.size(); ++s)
    for (const auto& a : kAgents)
      for (SpecialKind kind : {SpecialKind::Violation, SpecialKind::Deadline, SpecialKind::Repair, SpecialKind::Punish})
        if (chance(rng, kind == SpecialKind::Violation ? 0.45 : 0.3)) m.mark(kind, kNorm, a, s);
  return m;
}

/// Generates formulas of AST depth at most `depth`. Time terms only use
/// variables from `bound`, plus those bound by freezes on the way down.
class FormulaGen {
public:
  FormulaGen(std::mt19937& rng, std::vector<std::string> bound) : rng_(rng), bound_(std::move(bound)) {}

  StateFormula state(int depth) {
    if (depth <= 1) return leaf();
    switch (pick(rng_, 15)) {
    case 0: return leaf();
    case 1: return f::neg(state(depth - 1));
    case 2: return f::conj(state(depth - 1), state(depth - 1));
    case 3: return f::disj(state(depth - 1), state(depth - 1));
    case 4: return f::implies(state(depth - 1), state(depth - 1));
    case 5: return f::stit(agent(), state(depth - 1));
    case 6: return f::exists(path(depth - 1));
    case 7: return f::all(path(depth - 1));
    case 8: return freeze(depth);
    case 9:
    case 10: {
      ViolationKind kind = std::vector{ViolationKind::Act, ViolationKind::Omission, ViolationKind::Either}[pick(rng_, 3)];
      return f::violation(kind, kNorm, agent(), term(), term(), state(depth - 1));
    }
    case 11:
      return f::resolved(chance(rng_, 0.5) ? Resolution::Repair : Resolution::Punish, kNorm, agent(), term(), term(),
                         term(), state(depth - 1));
    case 12: return f::forbidden(kNorm, agent(), term(), state(depth - 1));
    case 13: return f::obliged(kNorm, agent(), term(), state(depth - 1), state(depth - 1));
    default: return f::special(special_kind(), kNorm, agent());
    }
  }

  PathFormula path(int depth) {
    if (depth <= 1) return p::lift(leaf());
    auto dir = [&] { return chance(rng_, 0.5) ? Direction::Forward : Direction::Backward; };
    switch (pick(rng_, 10)) {
    case 0:
    case 1: return p::lift(state(depth - 1));
    case 2: return p::neg(path(depth - 1));
    case 3: return p::conj(path(depth - 1), path(depth - 1));
    case 4: return p::disj(path(depth - 1), path(depth - 1));
    case 5: return p::next(dir(), path(depth - 1));
    case 6: return p::finally(dir(), path(depth - 1));
    case 7: return p::globally(dir(), path(depth - 1));
    case 8: return p::until(dir(), path(depth - 1), path(depth - 1));
    default: {
      std::string v = fresh();
      bound_.push_back(v);
      PathFormula body = path(depth - 1);
      bound_.pop_back();
      return p::freeze(v, body);
    }
    }
  }

  TimeTerm term() {
    const std::string& v = bound_[pick(rng_, bound_.size())];
    return chance(rng_, 0.25) ? TimeTerm::plus(v, 1 + pick(rng_, 2)) : TimeTerm::var(v);
  }

private:
  std::mt19937& rng_;
  std::vector<std::string> bound_;
  int fresh_ = 0;

  std::string agent() { return kAgents[pick(rng_, kAgents.size())]; }
  SpecialKind special_kind() {
    return std::vector{SpecialKind::Violation, SpecialKind::Deadline, SpecialKind::Repair, SpecialKind::Punish}[pick(rng_, 4)];
  }
  std::string fresh() { return "t" + std::to_string(fresh_++); }

  StateFormula leaf() {
    switch (pick(rng_, 8)) {
    case 0: return f::constant(chance(rng_, 0.5));
    case 1: return f::special(special_kind(), kNorm, agent());
    case 2: return chance(rng_, 0.5) ? f::less(term(), term()) : f::equal(term(), term());
    default: return f::atom(kAtoms[pick(rng_, kAtoms.size())]);
    }
  }

  StateFormula freeze(int depth) {
    std::string v = fresh();
    bound_.push_back(v);
    StateFormula body = state(depth - 1);
    bound_.pop_back();
    return f::freeze(v, body);
  }
};

} // namespace gen
