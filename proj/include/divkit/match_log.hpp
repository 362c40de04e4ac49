#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "divkit/society.hpp"

namespace divkit {

struct LogRow {
  std::int64_t tick = 0;
  AgentId agent;
  std::string state;
  std::string activity;
  double x = 0.0;
  double y = 0.0;
};

struct LogEvent {
  std::int64_t tick = 0;
  std::string kind;  // kickoff, goal, malfunction, substitution
  std::string agent;  // empty when the event is not tied to one agent
  std::optional<std::array<double, 2>> position;  // new home position for substitutions
};

struct RosterEntry {
  AgentId id;
  int side = 0;  // 0 or 1
  std::string role;
  double home_x = 0.0;
  double home_y = 0.0;
  double offensiveness = 0.0;
};

/// Tick-level record of one simulated match.
///
/// Rows hold one entry per live agent per tick, ticks contiguous from 0.
/// Positions are in side-0 field coordinates.
struct MatchLog {
  std::uint64_t seed = 0;
  std::int64_t ticks = 0;
  std::array<std::string, 2> teams;
  std::vector<std::string> states;  // automaton state space, including virtual states
  std::vector<RosterEntry> roster;
  std::vector<LogRow> rows;
  std::vector<LogEvent> events;
  std::array<int, 2> score{0, 0};

  const RosterEntry* find(const AgentId& id) const {
    for (const auto& r : roster)
      if (r.id == id) return &r;
    return nullptr;
  }
};

/// Half-open tick range [begin, end).
struct TickWindow {
  std::int64_t begin = 0;
  std::int64_t end = 0;

  bool contains(std::int64_t t) const { return t >= begin && t < end; }
  std::int64_t length() const { return end - begin; }
};

}  // namespace divkit
