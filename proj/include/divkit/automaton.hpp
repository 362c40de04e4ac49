#pragma once

// Situated automaton: each state performs one activity. Mandatory reactive
// transitions fire on events and take precedence over deliberation; otherwise
// the deliberative candidate with the highest utility is chosen.

#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "divkit/error.hpp"

namespace divkit {

struct AutomatonState {
  std::string id;
  std::string activity;
  bool virtual_state = false;  // stands in for a special action in logs
};

struct DeliberativeCandidate {
  std::string activity;
  std::string next_state;  // may equal the current state
};

class AutomatonSpec {
 public:
  AutomatonSpec() = default;

  AutomatonSpec(std::vector<AutomatonState> states, std::map<std::pair<std::string, std::string>, std::string> reactive,
                std::map<std::string, std::vector<DeliberativeCandidate>> deliberative)
      : states_(std::move(states)), reactive_(std::move(reactive)), deliberative_(std::move(deliberative)) {
    std::set<std::string> ids, activities;
    for (const auto& s : states_) {
      require(ids.insert(s.id).second, ErrorKind::validation, "automaton: duplicate state '" + s.id + "'");
      require(activities.insert(s.activity).second, ErrorKind::validation,
              "automaton: activity '" + s.activity + "' shared by two states");
    }
    for (const auto& [key, target] : reactive_) {
      require(ids.count(key.first), ErrorKind::validation, "automaton: reactive transition from unknown state '" + key.first + "'");
      require(ids.count(target), ErrorKind::validation, "automaton: reactive transition to unknown state '" + target + "'");
    }
    for (const auto& s : states_) {
      auto it = deliberative_.find(s.id);
      require(it != deliberative_.end() && !it->second.empty(), ErrorKind::validation,
              "automaton: state '" + s.id + "' has no deliberative candidate");
      for (const auto& c : it->second)
        require(ids.count(c.next_state), ErrorKind::validation, "automaton: candidate leads to unknown state '" + c.next_state + "'");
    }
  }

  const std::vector<AutomatonState>& states() const noexcept { return states_; }

  bool has_state(const std::string& id) const {
    for (const auto& s : states_)
      if (s.id == id) return true;
    return false;
  }

  const AutomatonState& state(const std::string& id) const {
    for (const auto& s : states_)
      if (s.id == id) return s;
    fail(ErrorKind::not_found, "automaton: unknown state '" + id + "'");
  }

  const std::string* reactive_target(const std::string& state, const std::string& event) const {
    auto it = reactive_.find({state, event});
    return it == reactive_.end() ? nullptr : &it->second;
  }

  const std::vector<DeliberativeCandidate>& candidates(const std::string& state) const {
    auto it = deliberative_.find(state);
    require(it != deliberative_.end(), ErrorKind::not_found, "automaton: unknown state '" + state + "'");
    return it->second;
  }

 private:
  std::vector<AutomatonState> states_;
  std::map<std::pair<std::string, std::string>, std::string> reactive_;
  std::map<std::string, std::vector<DeliberativeCandidate>> deliberative_;
};

struct AutomatonOutcome {
  std::string activity;
  std::string next_state;
  bool reactive = false;
};

/// One automaton cycle. `utilities` holds one score per deliberative candidate
/// of `current`; ties go to the lowest candidate index.
inline AutomatonOutcome automaton_step(const AutomatonSpec& spec, const std::string& current,
                                       std::span<const std::string> events, std::span<const double> utilities) {
  require(spec.has_state(current), ErrorKind::not_found, "automaton: unknown state '" + current + "'");
  for (const auto& e : events) {
    if (const std::string* target = spec.reactive_target(current, e))
      return {spec.state(*target).activity, *target, true};
  }
  const auto& cands = spec.candidates(current);
  require(utilities.size() == cands.size(), ErrorKind::validation,
          "automaton: expected " + std::to_string(cands.size()) + " utilities for state '" + current + "'");
  std::size_t best = 0;
  for (std::size_t i = 1; i < cands.size(); ++i)
    if (utilities[i] > utilities[best]) best = i;
  return {cands[best].activity, cands[best].next_state, false};
}

}  // namespace divkit
