#include "qif/sched.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include "qif/errors.hpp"

namespace qif {

namespace {

class UniformScheduler final : public Scheduler {
 public:
  std::string name() const override { return "uniform"; }

  std::vector<SchedDecision> decide(
      const SchedHistory&, const std::vector<int>& enabled) const override {
    const Rational share(1, static_cast<std::uint64_t>(enabled.size()));
    std::vector<SchedDecision> decisions;
    decisions.reserve(enabled.size());
    for (const int t : enabled) {
      decisions.push_back({share, t});
    }
    return decisions;
  }
};

class PriorityScheduler final : public Scheduler {
 public:
  PriorityScheduler(std::vector<int> order, bool rightmost, std::string name)
      : order_(std::move(order)), rightmost_(rightmost), name_(std::move(name)) {}

  std::string name() const override { return name_; }

  std::vector<SchedDecision> decide(
      const SchedHistory&, const std::vector<int>& enabled) const override {
    int best = enabled.front();
    for (const int t : enabled) {
      if (rank(t) < rank(best)) {
        best = t;
      }
    }
    return {{Rational(1), best}};
  }

 private:
  // Listed positions rank first, in list order; the rest follow ascending.
  long rank(int position) const {
    if (rightmost_) {
      return -static_cast<long>(position);
    }
    const auto it = std::find(order_.begin(), order_.end(), position);
    if (it != order_.end()) {
      return it - order_.begin();
    }
    return static_cast<long>(order_.size()) + position;
  }

  std::vector<int> order_;
  bool rightmost_;
  std::string name_;
};

struct TableRule {
  std::vector<int> prefix;
  std::map<int, Rational> weights;
};

class TableScheduler final : public Scheduler {
 public:
  TableScheduler(std::vector<TableRule> rules,
                 std::optional<std::map<int, Rational>> default_weights,
                 std::string name)
      : rules_(std::move(rules)),
        default_weights_(std::move(default_weights)),
        name_(std::move(name)) {}

  std::string name() const override { return name_; }

  std::vector<SchedDecision> decide(
      const SchedHistory& history,
      const std::vector<int>& enabled) const override {
    for (const TableRule& rule : rules_) {
      if (rule.prefix == history.threads) {
        return apply_weights(rule.weights, enabled);
      }
    }
    if (!default_weights_) {
      // default: "uniform"
      const Rational share(1, static_cast<std::uint64_t>(enabled.size()));
      std::vector<SchedDecision> decisions;
      for (const int t : enabled) {
        decisions.push_back({share, t});
      }
      return decisions;
    }
    return apply_weights(*default_weights_, enabled);
  }

 private:
  static std::vector<SchedDecision> apply_weights(
      const std::map<int, Rational>& weights, const std::vector<int>& enabled) {
    std::vector<SchedDecision> decisions;
    for (const auto& [thread, weight] : weights) {
      if (std::find(enabled.begin(), enabled.end(), thread) == enabled.end()) {
        throw SchedulerError("table rule references thread " +
                             std::to_string(thread) +
                             ", which is not enabled here");
      }
      decisions.push_back({weight, thread});
    }
    return decisions;
  }

  std::vector<TableRule> rules_;
  std::optional<std::map<int, Rational>> default_weights_;
  std::string name_;
};

std::map<int, Rational> parse_weights(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw SchedulerError("scheduler weights must be an object");
  }
  std::map<int, Rational> weights;
  Rational total = 0;
  for (const auto& [key, value] : j.items()) {
    int thread = 0;
    try {
      thread = std::stoi(key);
    } catch (const std::exception&) {
      throw SchedulerError("weight key '" + key + "' is not a thread index");
    }
    const Rational w = parse_frac(value.get<std::string>());
    if (w < 0) {
      throw SchedulerError("negative scheduler weight for thread " + key);
    }
    weights.emplace(thread, w);
    total += w;
  }
  if (total != 1) {
    throw SchedulerError("scheduler weights sum to " + frac_string(total) +
                         ", expected exactly 1");
  }
  return weights;
}

}  // namespace

SchedulerPtr uniform_scheduler() {
  return std::make_shared<UniformScheduler>();
}

SchedulerPtr priority_scheduler(std::vector<int> order) {
  std::string name = "priority:";
  if (order.empty()) {
    name += "left";
  } else {
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i > 0) {
        name += ',';
      }
      name += std::to_string(order[i]);
    }
  }
  return std::make_shared<PriorityScheduler>(std::move(order), false,
                                             std::move(name));
}

SchedulerPtr rightmost_scheduler() {
  return std::make_shared<PriorityScheduler>(std::vector<int>{}, true,
                                             "priority:right");
}

SchedulerPtr table_scheduler(const nlohmann::json& spec, std::string name) {
  if (!spec.is_object()) {
    throw SchedulerError("scheduler table must be a JSON object");
  }
  std::vector<TableRule> rules;
  if (spec.contains("rules")) {
    if (!spec["rules"].is_array()) {
      throw SchedulerError("'rules' must be an array");
    }
    for (const auto& r : spec["rules"]) {
      TableRule rule;
      if (!r.contains("prefix") || !r["prefix"].is_array()) {
        throw SchedulerError("each rule needs a 'prefix' array");
      }
      for (const auto& t : r["prefix"]) {
        rule.prefix.push_back(t.get<int>());
      }
      if (!r.contains("weights")) {
        throw SchedulerError("each rule needs a 'weights' object");
      }
      rule.weights = parse_weights(r["weights"]);
      rules.push_back(std::move(rule));
    }
  }
  if (!spec.contains("default")) {
    throw SchedulerError("scheduler table needs a 'default' rule");
  }
  std::optional<std::map<int, Rational>> default_weights;
  if (spec["default"].is_string()) {
    if (spec["default"].get<std::string>() != "uniform") {
      throw SchedulerError("unknown default rule '" +
                           spec["default"].get<std::string>() + "'");
    }
  } else {
    default_weights = parse_weights(spec["default"]);
  }
  return std::make_shared<TableScheduler>(
      std::move(rules), std::move(default_weights), std::move(name));
}

SchedulerPtr table_scheduler_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchedulerError("cannot open scheduler table: " + path);
  }
  nlohmann::json spec;
  try {
    in >> spec;
  } catch (const nlohmann::json::exception& e) {
    throw SchedulerError("malformed scheduler table " + path + ": " + e.what());
  }
  return table_scheduler(spec, "table:" + path);
}

SchedulerPtr make_scheduler(const std::string& spec) {
  if (spec == "uniform") {
    return uniform_scheduler();
  }
  if (spec.rfind("priority:", 0) == 0) {
    const std::string arg = spec.substr(9);
    if (arg == "left" || arg == "L") {
      return priority_scheduler({});
    }
    if (arg == "right" || arg == "R") {
      return rightmost_scheduler();
    }
    std::vector<int> order;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        order.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw SchedulerError("bad priority position '" + item + "' in '" +
                             spec + "'");
      }
    }
    if (order.empty()) {
      throw SchedulerError("empty priority order in '" + spec + "'");
    }
    return priority_scheduler(std::move(order));
  }
  if (spec.rfind("table:", 0) == 0) {
    return table_scheduler_from_file(spec.substr(6));
  }
  throw SchedulerError("unknown scheduler '" + spec +
                       "' (expected uniform, priority:..., or table:PATH)");
}

std::vector<SchedDecision> checked_decide(const Scheduler& policy,
                                          const SchedHistory& history,
                                          const std::vector<int>& enabled) {
  if (enabled.empty()) {
    throw SchedulerError("no enabled threads to schedule");
  }
  std::vector<SchedDecision> decisions = policy.decide(history, enabled);
  Rational total = 0;
  std::set<int> seen;
  for (const SchedDecision& d : decisions) {
    if (std::find(enabled.begin(), enabled.end(), d.thread) == enabled.end()) {
      throw SchedulerError("scheduler '" + policy.name() + "' picked thread " +
                           std::to_string(d.thread) + ", which is not enabled");
    }
    if (!seen.insert(d.thread).second) {
      throw SchedulerError("scheduler '" + policy.name() +
                           "' returned thread " + std::to_string(d.thread) +
                           " twice");
    }
    total += d.weight;
  }
  if (total != 1) {
    throw SchedulerError("scheduler '" + policy.name() +
                         "' weights sum to " + frac_string(total) +
                         ", expected exactly 1");
  }
  return decisions;
}

}  // namespace qif
