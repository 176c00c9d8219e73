#include "replay.hpp"

#include "normlog/error.hpp"
#include "normlog/monitor.hpp"
#include "normlog/scenarios.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace normlog;

namespace {

struct Run {
  std::vector<std::vector<Event>> events;
  std::vector<ViolationRecord> ledger;
};

Run monitor(const Scenario& sc, Monitor& m) {
  Run r;
  for (const auto& st : sc.trace) r.events.push_back(m.append_state(st));
  r.ledger = m.ledger();
  return r;
}

std::size_t count(const std::vector<std::vector<Event>>& events, EventType type, const std::string& norm = "") {
  std::size_t n = 0;
  for (const auto& step : events)
    for (const auto& e : step)
      if (e.type == type && (norm.empty() || e.norm == norm)) ++n;
  return n;
}

std::size_t records_of(const std::vector<ViolationRecord>& ledger, const std::string& norm, const std::string& agent) {
  return std::count_if(ledger.begin(), ledger.end(),
                       [&](const ViolationRecord& r) { return r.norm == norm && r.agent == agent; });
}

bool has_obligation(Monitor& m, const std::string& agent, const std::string& norm) {
  auto active = m.active_obligations(agent);
  return std::any_of(active.begin(), active.end(), [&](const ActiveObligation& o) { return o.norm == norm; });
}

} // namespace

TEST_CASE("littering with a prompt clean-up") {
  Scenario sc = littering();
  Monitor m(sc.norms);
  Run r = monitor(sc, m);
  REQUIRE(r.ledger.size() == 1);
  CHECK(r.ledger[0].norm == "i");
  CHECK(r.ledger[0].agent == "a");
  CHECK(r.ledger[0].t_begin == 1);
  CHECK(r.ledger[0].t_viol == 2);
  CHECK(r.ledger[0].status == RecordStatus::RepairedAndPunished);
  CHECK(r.ledger[0].t_repair == 2);
  CHECK(count(r.events, EventType::ViolationOpened) == 1);
  // The clean-up obligation starts with the violation and ends with the repair.
  CHECK(count(r.events, EventType::NormActivated, "j") == 1);
  CHECK(r.events[2].end() != std::find_if(r.events[2].begin(), r.events[2].end(), [](const Event& e) {
          return e.type == EventType::ObligationActivated && e.norm == "j";
        }));
  CHECK(count(r.events, EventType::NormDeactivated, "j") == 1);
  CHECK(m.active_obligations("a").empty());
}

TEST_CASE("the clean-up obligation stays active until the pick-up") {
  Scenario sc = littering();
  Monitor m(sc.norms);
  for (std::size_t i = 0; i < 3; ++i) m.append_state(sc.trace[i]);
  CHECK(has_obligation(m, "a", "j"));
  CHECK(has_obligation(m, "b", "k"));
  // The modality proper needs the deadline on the trace, which has not come.
  CHECK(m.obliged_strict("j", "a") == false);
  m.append_state(sc.trace[3]);
  CHECK_FALSE(has_obligation(m, "a", "j"));
}

TEST_CASE("an unrepaired throw obliges the bystander") {
  LitteringOptions o;
  o.repair = false;
  Scenario sc = littering(o);
  Monitor m(sc.norms);
  Run r = monitor(sc, m);
  CHECK(records_of(r.ledger, "i", "a") == 1);
  CHECK(records_of(r.ledger, "j", "a") == 1);
  // b called a out; c did not.
  CHECK(records_of(r.ledger, "k", "b") == 0);
  CHECK(records_of(r.ledger, "k", "c") == 1);
  CHECK(count(r.events, EventType::NormActivated, "l") == 0);
}

TEST_CASE("a silent bystander obliges the third agent") {
  LitteringOptions o;
  o.silent_bystander = true;
  Scenario sc = littering(o);
  Monitor m(sc.norms);
  std::size_t b_leaves = sc.trace.size() - 3;
  for (std::size_t i = 0; i <= b_leaves; ++i) m.append_state(sc.trace[i]);
  CHECK(has_obligation(m, "c", "l"));
  for (std::size_t i = b_leaves + 1; i < sc.trace.size(); ++i) m.append_state(sc.trace[i]);
  auto ledger = m.ledger();
  CHECK(records_of(ledger, "k", "b") == 1);
  CHECK(records_of(ledger, "l", "c") == 0);
}

TEST_CASE("every throw is its own violation") {
  for (std::size_t n : {1, 2, 3, 5}) {
    LitteringOptions o;
    o.throws = n;
    o.repair = false;
    Scenario sc = littering(o);
    Monitor m(sc.norms);
    monitor(sc, m);
    CHECK(records_of(m.ledger(), "i", "a") == n);
  }
}

TEST_CASE("repairs are matched to throws in order") {
  LitteringOptions o;
  o.throws = 2;
  Scenario sc = littering(o);
  Monitor m(sc.norms);
  monitor(sc, m);
  auto ledger = m.ledger();
  REQUIRE(records_of(ledger, "i", "a") == 2);
  // The pick-up settles the first throw only; leaving the clean plaza is a
  // second act keeping it clean, which settles the other.
  CHECK(ledger[0].t_repair == 3);
  CHECK(ledger[1].t_repair == 5);
}

TEST_CASE("a missed cycle of a repeating obligation") {
  Scenario sc = repeating_obligation(3, {1});
  Monitor m(sc.norms);
  Run r = monitor(sc, m);
  REQUIRE(r.ledger.size() == 1);
  CHECK(r.ledger[0].kind == ViolationKind::Omission);
  CHECK(r.ledger[0].t_viol == 7);
  // Two reports, then going off duty ends the last cycle.
  CHECK(count(r.events, EventType::ObligationDischarged) == 3);
  Scenario clean = repeating_obligation(3, {});
  Monitor m2(clean.norms);
  monitor(clean, m2);
  CHECK(m2.ledger().empty());
}

TEST_CASE("monitor input errors") {
  Scenario sc = littering();
  Monitor m(sc.norms);
  CHECK_THROWS_AS(m.append_state(TraceStep{{}, {{"a", {}}}}), NormError);
  m.append_state(sc.trace[0]);
  CHECK_THROWS_AS(m.append_state(TraceStep{{"in_plaza(zed)"}, {}}), NormError);
  CHECK_THROWS_AS(m.append_state(TraceStep{{}, {{"zed", {}}}}), NormError);
  CHECK_THROWS_AS(m.append_state(TraceStep{{}, {{"a", {"litter(a)"}}}}), NormError);
  CHECK_THROWS_AS(parse_trace_step(R"({"atoms": [], "extra": 1})"), NormError);
  CHECK(parse_trace_step(dump_trace_step(sc.trace[1])) == sc.trace[1]);
}

TEST_CASE("monitor replays the batch annotation on the scenarios") {
  std::vector<Scenario> scenarios{littering(), repeating_obligation(4, {1, 2})};
  for (bool silent : {false, true})
    for (std::size_t throws : {1, 3}) {
      LitteringOptions o;
      o.repair = false;
      o.silent_bystander = silent;
      o.throws = throws;
      scenarios.push_back(littering(o));
    }
  for (const auto& sc : scenarios) CHECK(replay::compare(sc.norms, sc.trace) == "");
}

TEST_CASE("monitor replays the batch annotation on random traces") {
  std::mt19937 rng(7);
  NormSet specs = replay::norms();
  for (int i = 0; i < 30; ++i) {
    auto trace = replay::random_trace(rng, 2 + rng() % 24);
    INFO("trace " << i);
    CHECK(replay::compare(specs, trace) == "");
  }
}

TEST_CASE("appending costs the same at any trace length") {
  auto cost = [](std::size_t idle) {
    LitteringOptions o;
    o.idle = idle;
    Scenario sc = littering(o);
    Monitor m(sc.norms);
    for (const auto& st : sc.trace) m.append_state(st);
    return m.evaluations();
  };
  std::uint64_t base = cost(0), c100 = cost(100), c200 = cost(200);
  CHECK(c100 > base);
  // Each idle step adds the same amount of work.
  CHECK(c200 - c100 == c100 - base);
}
