#include "normlog/deontic.hpp"
#include "normlog/error.hpp"
#include "normlog/lifecycle.hpp"
#include "normlog/model.hpp"
#include "normlog/monitor.hpp"
#include "normlog/norms.hpp"
#include "normlog/scenarios.hpp"
#include "normlog/syntax.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace normlog;

namespace {

Assignment parse_bindings(const std::vector<std::string>& binds) {
  Assignment tau;
  for (const auto& b : binds) {
    auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0) throw Error("binding '" + b + "' is not of the form v=n");
    std::string value = b.substr(eq + 1);
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
      throw Error("binding '" + b + "' needs a natural number");
    tau.set(b.substr(0, eq), std::stoull(value));
  }
  return tau;
}

int cmd_check(const std::string& model_path, const std::string& text, const std::string& state,
              const std::vector<std::string>& binds) {
  Model model = load_model_file(model_path);
  StateFormula formula = parse_state_formula(text);
  Assignment tau = parse_bindings(binds);
  for (const auto& v : free_time_variables(formula))
    if (!tau.contains(v)) throw Error("time variable '" + v + "' needs a --bind");
  Evaluator ev(model);
  Verdict verdict = explain(ev, model.find(state), formula, tau);
  std::cout << (verdict.value ? "true" : "false") << "\n";
  if (!verdict.value && !verdict.clause.empty())
    std::cout << "clause (" << verdict.clause << ") unmet: " << verdict.detail << "\n";
  return verdict.value ? 0 : 1;
}

std::string ledger_table(const std::vector<ViolationRecord>& ledger) {
  std::ostringstream out;
  out << "norm agent kind     tBegin tViol status              tRepair tPunish\n";
  auto opt = [](const std::optional<std::size_t>& t) { return t ? std::to_string(*t) : std::string("-"); };
  for (const auto& r : ledger) {
    char line[160];
    std::snprintf(line, sizeof line, "%-4s %-5s %-8s %6zu %5zu %-19s %7s %7s\n", r.norm.c_str(), r.agent.c_str(),
                  to_string(r.kind), r.t_begin, r.t_viol, to_string(r.status),
                  opt(r.t_repair).c_str(), opt(r.t_punish).c_str());
    out << line;
  }
  if (ledger.empty()) out << "(no violations)\n";
  return out.str();
}

// Events go to --events-out when given, with the ledger table on stdout;
// otherwise events and then ledger records go to stdout, one object per line.
int cmd_monitor(const std::string& norms_path, const std::string& trace_path, const std::string& events_out) {
  NormSet specs = load_norms_file(norms_path);
  std::vector<TraceStep> trace = load_trace_file(trace_path);
  std::ofstream file;
  if (!events_out.empty()) {
    file.open(events_out);
    if (!file) throw Error("cannot write '" + events_out + "'");
  }
  std::ostream& events = events_out.empty() ? std::cout : file;
  Monitor monitor(specs);
  for (const auto& st : trace)
    for (const auto& e : monitor.append_state(st)) events << event_json(e) << "\n";
  if (events_out.empty()) {
    for (const auto& r : monitor.ledger()) std::cout << "{\"ledger\":" << record_json(r) << "}\n";
  } else {
    std::cout << ledger_table(monitor.ledger());
  }
  return 0;
}

std::string narrate(const Event& e, const Monitor& monitor) {
  std::string norm = e.norm + "[" + e.agent + "]";
  switch (e.type) {
  case EventType::NormActivated: return "norm " + norm + " activated";
  case EventType::NormDeactivated: return "norm " + norm + " deactivated";
  case EventType::ObligationActivated: {
    const NormEngine& engine = monitor.engine();
    for (const auto& inst : engine.instances())
      if (inst.norm == e.norm && inst.agent == e.agent && inst.tb == e.t_begin)
        return e.agent + " is obliged under " + e.norm + " to see to " + render(engine.unit_spec(inst.unit).condition) +
               " before " + e.deadline;
    return e.agent + " is obliged under " + e.norm + " before " + e.deadline;
  }
  case EventType::ObligationDischarged: return "obligation " + norm + " discharged";
  case EventType::ViolationOpened:
    return e.agent + " violated " + e.norm + " by " + to_string(e.record->kind) + " at time " +
           std::to_string(e.record->t_viol);
  case EventType::ViolationResolved:
    return "violation of " + e.norm + " by " + e.agent + " at time " + std::to_string(e.record->t_viol) + " " +
           (!e.via ? "repaired and punished" : *e.via == Resolution::Punish ? "punished" : "repaired");
  }
  return "";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

struct ScenarioArgs {
  std::string name;
  bool no_repair = false;
  bool silent = false;
  std::size_t throws = 1;
  std::size_t cycles = 3;
  std::vector<std::size_t> missed{1};
  std::string norms_out, trace_out;
};

int cmd_scenario(const ScenarioArgs& a) {
  Scenario sc;
  if (a.name == "littering" || a.name == "metanorm-cascade") {
    LitteringOptions o;
    o.repair = a.name == "littering" && !a.no_repair;
    o.silent_bystander = a.silent;
    o.throws = a.throws;
    sc = littering(o);
  } else if (a.name == "repeating-obligation") {
    sc = repeating_obligation(a.cycles, {a.missed.begin(), a.missed.end()});
  } else {
    throw Error("unknown scenario '" + a.name + "'; expected littering, metanorm-cascade or repeating-obligation");
  }
  if (!a.norms_out.empty()) write_file(a.norms_out, dump_norms(sc.norms));
  if (!a.trace_out.empty()) {
    std::string text;
    for (const auto& st : sc.trace) text += dump_trace_step(st) + "\n";
    write_file(a.trace_out, text);
  }
  Monitor monitor(sc.norms);
  for (std::size_t t = 0; t < sc.trace.size(); ++t)
    for (const auto& e : monitor.append_state(sc.trace[t])) std::cout << "t=" << t << ": " << narrate(e, monitor) << "\n";
  if (a.name != "repeating-obligation") {
    // Prohibitions that follow from i, checked on the annotated trace.
    Annotation an = annotate(sc.norms, trace_model(sc.trace, sc.norms.agents));
    for (const char* phi : {"litter(a)", "throw_can(a)"}) {
      std::cout << "forbidden to see to " << phi << " under i at times";
      for (std::size_t d : forbidden_depths(an.model, "i", "a", 1, parse_state_formula(phi))) {
        if (an.model.holds(d, "in_plaza(a)")) std::cout << " " << d;
      }
      std::cout << " (while in plaza)\n";
    }
  }
  std::cout << ledger_table(monitor.ledger());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normative temporal logic: formula checks, norm monitoring and scenarios"};
  app.require_subcommand(1);

  std::string model_path, formula, state;
  std::vector<std::string> binds;
  auto* check = app.add_subcommand("check", "evaluate a state formula on a model file");
  check->add_option("--model", model_path, "model JSON file")->required();
  check->add_option("--formula", formula, "state formula")->required();
  check->add_option("--state", state, "state id")->required();
  check->add_option("--bind", binds, "time variable binding v=n")->take_all();

  std::string norms_path, trace_path, events_out;
  auto* mon = app.add_subcommand("monitor", "run the norm monitor over a JSONL trace");
  mon->add_option("--norms", norms_path, "norm set JSON file")->required();
  mon->add_option("--trace", trace_path, "trace JSONL file")->required();
  mon->add_option("--events-out", events_out, "write events here instead of stdout");

  ScenarioArgs sa;
  auto* scen = app.add_subcommand("scenario", "replay a built-in scenario");
  scen->add_option("name", sa.name, "littering, metanorm-cascade or repeating-obligation")->required();
  scen->add_flag("--no-repair", sa.no_repair, "a never picks the litter up");
  scen->add_flag("--silent-bystander", sa.silent, "b leaves without calling a out");
  scen->add_option("--throws", sa.throws, "cans thrown by a")->check(CLI::PositiveNumber);
  scen->add_option("--cycles", sa.cycles, "deadline cycles of the repeating obligation");
  scen->add_option("--missed", sa.missed, "zero-based cycles without a report")->take_all();
  scen->add_option("--norms-out", sa.norms_out, "write the scenario norms as JSON");
  scen->add_option("--trace-out", sa.trace_out, "write the scenario trace as JSONL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (*check) return cmd_check(model_path, formula, state, binds);
    if (*mon) return cmd_monitor(norms_path, trace_path, events_out);
    return cmd_scenario(sa);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
