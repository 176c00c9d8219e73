#pragma once

#include "normlog/monitor.hpp"
#include "normlog/norms.hpp"

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace normlog {

struct Scenario {
  NormSet norms;
  std::vector<TraceStep> trace;
};

struct LitteringOptions {
  bool repair = true;            // a picks the litter up again
  bool silent_bystander = false; // b leaves without calling a out; implies no repair
  std::size_t throws = 1;        // consecutive throws by a
  std::size_t idle = 0;          // extra idle steps before anyone leaves
};

/// Three agents in a plaza. Norms: i forbids littering, j obliges the
/// litterer to clean up before leaving, k obliges bystanders to call the
/// litterer out, l obliges a third agent to call out a silent bystander.
Scenario littering(const LitteringOptions& options = {});
NormSet littering_norms();

/// One agent on duty who must report before each bell. `missed` lists the
/// zero-based cycles without a report.
Scenario repeating_obligation(std::size_t cycles, const std::set<std::size_t>& missed);

/// Depths of the states of `annotated` at or after `tb` where agent is
/// forbidden under `norm` to see to `phi`.
std::vector<std::size_t> forbidden_depths(const Model& annotated, const std::string& norm,
                                          const std::string& agent, TimeValue tb, const StateFormula& phi);

} // namespace normlog
