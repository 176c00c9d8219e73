#include "normlog/norms.hpp"

#include "normlog/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace normlog {

namespace {

using nlohmann::json;

const char* kind_name(NormKind k) { return k == NormKind::Obligation ? "obligation" : "prohibition"; }

StateFormula parse_field(const json& j, const std::string& norm, const char* field) {
  if (!j.is_string()) throw NormError("norm '" + norm + "': field '" + field + "' must be a formula string");
  try {
    return parse_state_formula(j.get<std::string>());
  } catch (const ParseError& e) {
    throw NormError("norm '" + norm + "': field '" + field + "': " + e.what());
  }
}

std::vector<std::string> string_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw NormError(what + " must be a list of strings");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) throw NormError(what + " must be a list of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

NormSpec parse_spec(const json& j) {
  if (!j.is_object()) throw NormError("each norm must be an object");
  static const std::set<std::string> known{"id",        "kind",       "agent",     "roles",
                                           "activation", "deactivation", "deadline", "condition",
                                           "repair",    "punishment", "imports"};
  if (!j.contains("id") || !j["id"].is_string()) throw NormError("norm without a string 'id'");
  NormSpec n;
  n.id = j["id"].get<std::string>();
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw NormError("norm '" + n.id + "': unknown field '" + key + "'");
  for (const char* req : {"kind", "agent", "activation", "deactivation", "condition"})
    if (!j.contains(req)) throw NormError("norm '" + n.id + "': missing field '" + req + "'");
  std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
  if (kind == "obligation") n.kind = NormKind::Obligation;
  else if (kind == "prohibition") n.kind = NormKind::Prohibition;
  else throw NormError("norm '" + n.id + "': kind must be 'obligation' or 'prohibition'");
  if (!j["agent"].is_string()) throw NormError("norm '" + n.id + "': agent must be a string");
  n.agent = j["agent"].get<std::string>();
  if (j.contains("roles")) n.roles = string_list(j["roles"], "norm '" + n.id + "': roles");
  if (j.contains("imports")) n.imports = string_list(j["imports"], "norm '" + n.id + "': imports");
  n.activation = parse_field(j["activation"], n.id, "activation");
  n.deactivation = parse_field(j["deactivation"], n.id, "deactivation");
  n.condition = parse_field(j["condition"], n.id, "condition");
  if (j.contains("deadline")) n.deadline = parse_field(j["deadline"], n.id, "deadline");
  if (j.contains("repair")) n.repair = parse_field(j["repair"], n.id, "repair");
  if (j.contains("punishment")) n.punishment = parse_field(j["punishment"], n.id, "punishment");
  return n;
}

void check_variables(const NormSpec& n, const StateFormula& phi, const char* field, bool allow_tb) {
  std::set<std::string> allowed;
  if (allow_tb) allowed.insert("tb");
  for (const auto& m : n.imports) allowed.insert(import_variable(m));
  for (const auto& v : free_time_variables(phi))
    if (!allowed.count(v))
      throw NormError("norm '" + n.id + "': field '" + field + "' uses undeclared time variable '" + v +
                      "'");
}

TimeTerm var(const char* v) { return TimeTerm::var(v); }

// Witness that the violation frozen at tv was resolved by the step just
// before the current position.
StateFormula resolution_event(const NormSpec& n, Resolution target) {
  return f::freeze("t", f::conj(f::less(var("tv"), var("t")),
                                f::resolved(target, n.id, n.agent, var("tb"), var("tv"),
                                            TimeTerm::minus("t", 1), n.condition)));
}

PathFormula follow_up(const NormSpec& n, Resolution target, const StateFormula& fresh) {
  StateFormula goal = target == Resolution::Repair ? n.repair : n.punishment;
  StateFormula event = resolution_event(n, target);
  StateFormula duty = f::all(p::until(Direction::Forward,
                                      p::lift(f::obliged(n.id, n.agent, var("tb"), goal, event)),
                                      p::lift(event)));
  return p::globally(Direction::Forward, p::freeze("tv", p::lift(f::implies(fresh, duty))));
}

} // namespace

const NormSpec* NormSet::find(const std::string& id) const {
  for (const auto& n : norms)
    if (n.id == id) return &n;
  return nullptr;
}

std::string import_variable(const std::string& norm) { return "tb" + norm; }

void validate(const NormSpec& n) {
  if (n.id.empty()) throw NormError("norm with an empty id");
  if (n.agent.empty()) throw NormError("norm '" + n.id + "': empty agent");
  if (n.kind == NormKind::Obligation && !n.deadline)
    throw NormError("norm '" + n.id + "': obligation without a deadline");
  if (n.kind == NormKind::Prohibition && n.deadline)
    throw NormError("norm '" + n.id + "': prohibition with a deadline");
  std::set<std::string> vars{n.agent};
  for (const auto& r : n.roles)
    if (!vars.insert(r).second) throw NormError("norm '" + n.id + "': duplicate agent variable '" + r + "'");
  check_variables(n, n.activation, "activation", false);
  check_variables(n, n.deactivation, "deactivation", true);
  check_variables(n, n.condition, "condition", true);
  check_variables(n, n.repair, "repair", true);
  check_variables(n, n.punishment, "punishment", true);
  if (n.deadline) check_variables(n, *n.deadline, "deadline", true);
}

void validate(const NormSet& set) {
  std::set<std::string> ids;
  for (const auto& n : set.norms)
    if (!ids.insert(n.id).second) throw NormError("duplicate norm id '" + n.id + "'");
  for (const auto& n : set.norms) {
    validate(n);
    for (const auto& m : n.imports)
      if (!ids.count(m)) throw NormError("norm '" + n.id + "' imports unknown norm '" + m + "'");
    if (!set.agents.empty() && set.agents.size() < n.roles.size() + 1)
      throw NormError("norm '" + n.id + "' needs more agents than declared");
  }
  std::set<std::string> agents;
  for (const auto& a : set.agents)
    if (!agents.insert(a).second) throw NormError("duplicate agent '" + a + "'");
}

NormSet load_norms(std::string_view document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error& e) {
    throw NormError(std::string("malformed norm file: ") + e.what());
  }
  if (!j.is_object()) throw NormError("norm file must be an object");
  for (const auto& [key, _] : j.items())
    if (key != "agents" && key != "atoms" && key != "norms")
      throw NormError("unknown top-level field '" + key + "'");
  NormSet set;
  if (j.contains("agents")) set.agents = string_list(j["agents"], "agents");
  if (j.contains("atoms")) set.atoms = string_list(j["atoms"], "atoms");
  if (!j.contains("norms") || !j["norms"].is_array()) throw NormError("norm file needs a 'norms' list");
  for (const auto& n : j["norms"]) set.norms.push_back(parse_spec(n));
  validate(set);
  return set;
}

NormSet load_norms_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NormError("cannot open norm file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_norms(ss.str());
}

std::string dump_norms(const NormSet& set) {
  json out;
  out["agents"] = set.agents;
  if (!set.atoms.empty()) out["atoms"] = set.atoms;
  out["norms"] = json::array();
  for (const auto& n : set.norms) {
    json j{{"id", n.id},
           {"kind", kind_name(n.kind)},
           {"agent", n.agent},
           {"activation", render(n.activation)},
           {"deactivation", render(n.deactivation)},
           {"condition", render(n.condition)},
           {"repair", render(n.repair)},
           {"punishment", render(n.punishment)}};
    if (!n.roles.empty()) j["roles"] = n.roles;
    if (!n.imports.empty()) j["imports"] = n.imports;
    if (n.deadline) j["deadline"] = render(*n.deadline);
    out["norms"].push_back(std::move(j));
  }
  return out.dump(2);
}

NormSpec instantiate(const NormSpec& spec, const std::map<std::string, std::string>& renaming) {
  auto rename = [&](const std::string& a) {
    auto it = renaming.find(a);
    return it == renaming.end() ? a : it->second;
  };
  NormSpec n = spec;
  n.agent = rename(spec.agent);
  for (auto& r : n.roles) r = rename(r);
  n.activation = substitute_agents(spec.activation, renaming);
  n.deactivation = substitute_agents(spec.deactivation, renaming);
  n.condition = substitute_agents(spec.condition, renaming);
  n.repair = substitute_agents(spec.repair, renaming);
  n.punishment = substitute_agents(spec.punishment, renaming);
  if (spec.deadline) n.deadline = substitute_agents(*spec.deadline, renaming);
  return n;
}

std::vector<std::map<std::string, std::string>> role_bindings(const NormSpec& spec,
                                                              const std::vector<std::string>& agents) {
  std::vector<std::string> vars{spec.agent};
  vars.insert(vars.end(), spec.roles.begin(), spec.roles.end());
  std::vector<std::map<std::string, std::string>> out;
  std::map<std::string, std::string> current;
  std::set<std::string> used;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == vars.size()) {
      out.push_back(current);
      return;
    }
    for (const auto& a : agents) {
      if (used.count(a)) continue;
      used.insert(a);
      current[vars[i]] = a;
      go(i + 1);
      used.erase(a);
    }
  };
  go(0);
  return out;
}

StateFormula expand_norm(const NormSpec& n) {
  validate(n);
  const StateFormula& beta = n.deactivation;
  PathFormula body = p::lift(f::constant(true));
  StateFormula fresh = f::constant(false);
  if (n.kind == NormKind::Obligation) {
    const StateFormula& delta = *n.deadline;
    StateFormula duty = f::obliged(n.id, n.agent, var("tb"), n.condition, delta);
    StateFormula persist = f::all(p::until(Direction::Forward, p::lift(f::implies(delta, duty)), p::lift(beta)));
    fresh = f::conj(delta, f::violation(ViolationKind::Omission, n.id, n.agent, var("tb"), var("tv"),
                                        n.condition));
    body = p::conj(p::lift(duty), p::lift(persist));
  } else {
    StateFormula ban = f::forbidden(n.id, n.agent, var("tb"), n.condition);
    fresh = f::violation(ViolationKind::Act, n.id, n.agent, var("tb"), var("tv"), n.condition);
    body = p::lift(f::all(p::until(Direction::Forward, p::lift(ban), p::lift(beta))));
  }
  StateFormula repairs = f::all(follow_up(n, Resolution::Repair, fresh));
  StateFormula punishes = f::all(follow_up(n, Resolution::Punish, fresh));
  StateFormula whole = f::conj(f::conj(f::all(body), repairs), punishes);
  return f::implies(n.activation, f::freeze("tb", whole));
}

bool holds_norm(Evaluator& ev, StateId state, const NormSpec& spec, const Assignment& bindings) {
  for (const auto& m : spec.imports)
    if (!bindings.contains(import_variable(m)))
      throw NormError("norm '" + spec.id + "': unresolved import '" + import_variable(m) + "'");
  return ev.eval_state(state, expand_norm(spec), bindings);
}

} // namespace normlog
