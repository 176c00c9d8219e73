#pragma once

// Naive reference semantics: every quantifier enumerates root-to-leaf paths
// explicitly, nothing is cached and no evaluator code is reused. Only the
// raw tree accessors of Model are used.

#include "normlog/model.hpp"
#include "normlog/syntax.hpp"

#include <map>
#include <string>
#include <vector>

namespace brute {

using normlog::Model;
using normlog::PathFormula;
using normlog::StateFormula;
using normlog::StateId;

using Env = std::map<std::string, long long>;
using Seq = std::vector<StateId>;

class Oracle {
public:
  explicit Oracle(const Model& model);

  bool state(StateId s, const StateFormula& phi, const Env& env) const;
  /// Path formula at position j of seq; seq is a prefix of some root path.
  bool path(const Seq& seq, std::size_t j, const PathFormula& alpha, const Env& env) const;
  /// Positions k in [i, j] where alpha holds on seq cut after j.
  std::size_t count(const Seq& seq, std::size_t i, std::size_t j, const PathFormula& alpha,
                    const Env& env) const;

  /// Every maximal root path through s.
  std::vector<Seq> paths(StateId s) const;

private:
  const Model& m_;
  std::vector<Seq> all_;

  long long term(const normlog::TimeTerm& t, const Env& env) const;
  bool marked(normlog::SpecialKind kind, const std::string& norm, const std::string& agent,
              StateId s) const;
  bool stit(StateId s, const std::string& agent, const StateFormula& phi, const Env& env) const;
  bool act(StateId s, const std::string& norm, const std::string& agent, long long tb, long long tv,
           const StateFormula& phi, const Env& env) const;
  bool omission(StateId s, const std::string& norm, const std::string& agent, long long tb, long long tv,
                const StateFormula& phi, const Env& env) const;
  bool either(StateId s, const std::string& norm, const std::string& agent, long long tb, long long tv,
              const StateFormula& phi, const Env& env) const;
  bool resolved(StateId s, normlog::Resolution kind, const std::string& norm, const std::string& agent,
                long long tb, long long tv, long long tr, const StateFormula& phi, const Env& env) const;
  bool forbidden(StateId s, const std::string& norm, const std::string& agent, long long tb,
                 const StateFormula& phi, const Env& env) const;
  bool obliged(StateId s, const std::string& norm, const std::string& agent, long long tb,
               const StateFormula& phi, const StateFormula& deadline, const Env& env) const;
};

} // namespace brute
