#pragma once

// Behavioral difference between agents with fixed policies (Phi1, Phi2), the
// equivalence / epsilon-similarity / epsilon-homogeneity predicates, and
// state-visit distributions extracted from simulator logs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "divkit/error.hpp"
#include "divkit/match_log.hpp"
#include "divkit/society.hpp"

namespace divkit {

/// Registry of perceptual-state ids shared by the agents being compared.
class StateSpace {
 public:
  StateSpace() = default;
  explicit StateSpace(std::set<std::string> ids) : ids_(std::move(ids)) {}

  void add(const std::string& id) { ids_.insert(id); }
  bool contains(const std::string& id) const { return ids_.count(id) != 0; }
  const std::set<std::string>& ids() const noexcept { return ids_; }

 private:
  std::set<std::string> ids_;
};

struct PolicyEntry {
  std::string action;
  std::int64_t visits = 0;
};

/// One agent's fixed policy: a single action per perceptual state, with visit counts.
struct PolicyTable {
  AgentId agent;
  std::map<std::string, PolicyEntry> entries;

  std::int64_t total_visits() const {
    std::int64_t n = 0;
    for (const auto& [_, e] : entries) n += e.visits;
    return n;
  }

  const PolicyEntry* find(const std::string& state) const {
    auto it = entries.find(state);
    return it == entries.end() ? nullptr : &it->second;
  }

  void set(const std::string& state, std::string action, std::int64_t visits = 0) {
    require(visits >= 0, ErrorKind::validation, "policy table: negative visit count for state '" + state + "'");
    entries[state] = {std::move(action), visits};
  }
};

inline StateSpace state_space_of(const std::vector<PolicyTable>& tables) {
  StateSpace s;
  for (const auto& t : tables)
    for (const auto& [state, _] : t.entries) s.add(state);
  return s;
}

namespace detail {

// A state defined for only one agent counts as a difference; undefined for both, as agreement.
inline int differs(const PolicyEntry* a, const PolicyEntry* b) {
  if (a == nullptr && b == nullptr) return 0;
  if (a == nullptr || b == nullptr) return 1;
  return a->action == b->action ? 0 : 1;
}

inline std::set<std::string> defined_union(const PolicyTable& a, const PolicyTable& b) {
  std::set<std::string> u;
  for (const auto& [s, _] : a.entries) u.insert(s);
  for (const auto& [s, _] : b.entries) u.insert(s);
  return u;
}

}  // namespace detail

/// 0 when both agents map `state` to the same action, otherwise 1.
inline int response_difference(const StateSpace& space, const PolicyTable& a, const PolicyTable& b,
                               const std::string& state) {
  require(space.contains(state), ErrorKind::not_found, "unknown state id '" + state + "'");
  return detail::differs(a.find(state), b.find(state));
}

/// Fraction of states (defined for either agent) on which the policies disagree.
inline double phi1(const PolicyTable& a, const PolicyTable& b) {
  const auto states = detail::defined_union(a, b);
  require(!states.empty(), ErrorKind::validation, "phi1: no states defined for either agent");
  std::size_t diff = 0;
  for (const auto& s : states) diff += static_cast<std::size_t>(detail::differs(a.find(s), b.find(s)));
  return static_cast<double>(diff) / static_cast<double>(states.size());
}

/// Disagreement weighted by the mean visit frequency of each state.
inline double phi2(const PolicyTable& a, const PolicyTable& b) {
  const double na = static_cast<double>(a.total_visits());
  const double nb = static_cast<double>(b.total_visits());
  require(na > 0.0, ErrorKind::validation, "phi2: agent '" + a.agent.value + "' has zero total visits");
  require(nb > 0.0, ErrorKind::validation, "phi2: agent '" + b.agent.value + "' has zero total visits");
  double sum = 0.0;
  for (const auto& s : detail::defined_union(a, b)) {
    const PolicyEntry* ea = a.find(s);
    const PolicyEntry* eb = b.find(s);
    if (!detail::differs(ea, eb)) continue;
    double pa = ea ? static_cast<double>(ea->visits) / na : 0.0;
    double pb = eb ? static_cast<double>(eb->visits) / nb : 0.0;
    sum += 0.5 * (pa + pb);
  }
  return std::min(sum, 1.0);
}

struct BehavioralDifference {
  double phi1 = 0.0;
  double phi2 = 0.0;
};

inline BehavioralDifference behavioral_difference(const PolicyTable& a, const PolicyTable& b) {
  return {phi1(a, b), phi2(a, b)};
}

inline bool is_equivalent(const PolicyTable& a, const PolicyTable& b) {
  for (const auto& s : detail::defined_union(a, b))
    if (detail::differs(a.find(s), b.find(s))) return false;
  return true;
}

inline bool is_epsilon_similar(const PolicyTable& a, const PolicyTable& b, double epsilon) {
  require(epsilon > 0.0, ErrorKind::validation, "epsilon must be positive");
  return phi2(a, b) < epsilon;
}

inline bool is_epsilon_homogeneous(const std::vector<PolicyTable>& tables, double epsilon) {
  require(tables.size() >= 2, ErrorKind::validation, "epsilon-homogeneity needs at least two agents");
  require(epsilon > 0.0, ErrorKind::validation, "epsilon must be positive");
  for (std::size_t i = 0; i < tables.size(); ++i)
    for (std::size_t j = i + 1; j < tables.size(); ++j)
      if (!is_epsilon_similar(tables[i], tables[j], epsilon)) return false;
  return true;
}

/// Reads `agent_id,state_id,action_id,visit_count` rows, grouping by agent in
/// order of first appearance.
inline std::vector<PolicyTable> read_policy_csv(std::istream& in, const std::string& source = "policy") {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::validation, source + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == "agent_id,state_id,action_id,visit_count", ErrorKind::validation,
          source + ":1: expected header 'agent_id,state_id,action_id,visit_count'");
  std::vector<PolicyTable> tables;
  std::map<std::string, std::size_t> slot;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    require(f.size() == 4, ErrorKind::validation, where + "expected 4 fields, got " + std::to_string(f.size()));
    for (int k = 0; k < 3; ++k) require(!f[k].empty(), ErrorKind::validation, where + "empty field " + std::to_string(k + 1));
    std::int64_t visits = 0;
    std::size_t used = 0;
    try {
      visits = std::stoll(f[3], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == f[3].size() && !f[3].empty() && visits >= 0, ErrorKind::validation,
            where + "visit_count must be a non-negative integer");
    auto [it, fresh] = slot.emplace(f[0], tables.size());
    if (fresh) tables.push_back(PolicyTable{AgentId(f[0]), {}});
    PolicyTable& t = tables[it->second];
    require(t.entries.count(f[1]) == 0, ErrorKind::validation,
            where + "state '" + f[1] + "' listed twice for agent '" + f[0] + "'");
    t.set(f[1], f[2], visits);
  }
  return tables;
}

inline std::string write_policy_csv(const std::vector<PolicyTable>& tables) {
  std::ostringstream os;
  os << "agent_id,state_id,action_id,visit_count\n";
  for (const auto& t : tables)
    for (const auto& [s, e] : t.entries) os << t.agent.value << ',' << s << ',' << e.action << ',' << e.visits << '\n';
  return os.str();
}

/// Relative frequency of each automaton state in one agent's log rows.
struct StateVisitDistribution {
  AgentId agent;
  std::map<std::string, double> frequencies;
  std::int64_t samples = 0;
};

inline StateVisitDistribution state_distribution(const MatchLog& log, const AgentId& agent, TickWindow window) {
  require(window.length() > 0, ErrorKind::validation, "state_distribution: empty window");
  require(log.find(agent) != nullptr, ErrorKind::not_found, "unknown agent '" + agent.value + "'");
  StateVisitDistribution out;
  out.agent = agent;
  std::map<std::string, std::int64_t> counts;
  for (const auto& row : log.rows) {
    if (row.agent == agent && window.contains(row.tick)) {
      ++counts[row.state];
      ++out.samples;
    }
  }
  require(out.samples > 0, ErrorKind::insufficient_data,
          "state_distribution: agent '" + agent.value + "' has no rows in the window");
  for (const auto& [s, c] : counts) out.frequencies[s] = static_cast<double>(c) / static_cast<double>(out.samples);
  return out;
}

/// Lifts logged state-visit frequencies into feature space: one dimension per
/// automaton state, in `log.states` order.
inline Society behavioral_features(const MatchLog& log, const std::vector<AgentId>& agents, TickWindow window) {
  std::vector<Agent> out;
  out.reserve(agents.size());
  for (const AgentId& id : agents) {
    StateVisitDistribution d = state_distribution(log, id, window);
    Agent a;
    a.id = id;
    a.attributes["role"] = log.find(id)->role;
    a.features.reserve(log.states.size());
    for (const auto& s : log.states) {
      auto it = d.frequencies.find(s);
      a.features.push_back(it == d.frequencies.end() ? 0.0 : it->second);
    }
    for (const auto& [s, _] : d.frequencies) {
      bool known = false;
      for (const auto& k : log.states) known = known || k == s;
      require(known, ErrorKind::validation, "log row uses state '" + s + "' outside the automaton state space");
    }
    out.push_back(std::move(a));
  }
  return Society(log.states, std::move(out));
}

}  // namespace divkit
