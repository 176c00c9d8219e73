#pragma once

#include "normlog/evaluator.hpp"
#include "normlog/model.hpp"
#include "normlog/syntax.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace normlog {

enum class NormKind { Obligation, Prohibition };

struct NormSpec {
  std::string id;
  NormKind kind = NormKind::Prohibition;
  std::string agent;              // subject variable
  std::vector<std::string> roles; // further agent variables (metanorms)
  StateFormula activation = f::constant(false);
  StateFormula deactivation = f::constant(false);
  std::optional<StateFormula> deadline;
  StateFormula condition = f::constant(false);
  StateFormula repair = f::constant(false);
  StateFormula punishment = f::constant(false);
  std::vector<std::string> imports;
};

struct NormSet {
  std::vector<std::string> agents; // concrete agents the specs range over
  std::vector<std::string> atoms;  // declared vocabulary, on top of the atoms the specs mention
  std::vector<NormSpec> norms;

  const NormSpec* find(const std::string& id) const;
};

/// Name of the time variable carrying the activation time of `norm`.
std::string import_variable(const std::string& norm);

/// Checks ids, deadline presence and that every free time variable is
/// either `tb` or declared through imports.
void validate(const NormSet& set);
void validate(const NormSpec& spec);

NormSet load_norms(std::string_view document);
NormSet load_norms_file(const std::string& path);
std::string dump_norms(const NormSet& set);

/// Renames agent variables throughout the spec.
NormSpec instantiate(const NormSpec& spec, const std::map<std::string, std::string>& renaming);

/// All injective assignments of concrete agents to the subject and roles.
std::vector<std::map<std::string, std::string>> role_bindings(const NormSpec& spec,
                                                              const std::vector<std::string>& agents);

/// Full temporal formula of a norm. Free variables are the imported ones.
StateFormula expand_norm(const NormSpec& spec);

/// Evaluates the expanded norm; `bindings` must resolve every import.
bool holds_norm(Evaluator& ev, StateId state, const NormSpec& spec, const Assignment& bindings);

/// Computes V/D/R/P for the specs over the model, in depth order.
Model derive_annotations(const NormSet& specs, const Model& model);

} // namespace normlog
