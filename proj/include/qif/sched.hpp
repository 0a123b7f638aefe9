#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "qif/rational.hpp"

namespace qif {

// What a policy may observe: the thread choices made so far and the public
// values along the path (current value last). Secrets and beliefs are
// deliberately out of view.
struct SchedHistory {
  std::vector<int> threads;
  std::vector<std::uint64_t> o_values;
};

struct SchedDecision {
  Rational weight;
  int thread;
};

class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual std::string name() const = 0;
  // Weights over enabled threads; must sum to exactly 1.
  virtual std::vector<SchedDecision> decide(
      const SchedHistory& history, const std::vector<int>& enabled) const = 0;
};

using SchedulerPtr = std::shared_ptr<const Scheduler>;

// 1/|enabled| each, history-independent.
SchedulerPtr uniform_scheduler();

// Deterministic: all weight on the highest-ranked enabled position. `order`
// lists positions from highest to lowest priority; unlisted positions rank
// after the listed ones, ascending. An empty order prefers the leftmost.
SchedulerPtr priority_scheduler(std::vector<int> order);

// Always picks the rightmost enabled thread.
SchedulerPtr rightmost_scheduler();

// History-dependent table policy:
//   { "rules": [ { "prefix": [0, 1], "weights": { "0": "3/4", "1": "1/4" } } ],
//     "default": "uniform" | { "0": "1" } }
// A rule fires when the executed-thread history equals its prefix; otherwise
// the required default applies. Weights must sum to 1 and may only name
// enabled threads.
SchedulerPtr table_scheduler(const nlohmann::json& spec, std::string name);
SchedulerPtr table_scheduler_from_file(const std::string& path);

// CLI syntax: "uniform" | "priority:left" | "priority:right" |
// "priority:1,0,..." | "table:PATH". Throws SchedulerError.
SchedulerPtr make_scheduler(const std::string& spec);

// decide() plus invariant checks: weights sum to exactly 1, every thread is
// enabled, no duplicates. Throws SchedulerError.
std::vector<SchedDecision> checked_decide(const Scheduler& policy,
                                          const SchedHistory& history,
                                          const std::vector<int>& enabled);

}  // namespace qif
