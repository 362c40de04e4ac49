#pragma once

// File formats: society, team and dynamics-scenario documents (JSON syntax),
// match logs (CSV plus a JSON sidecar). Every loader validates strictly and
// reports the offending field as a JSON-path-like location.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "divkit/behavior.hpp"
#include "divkit/dynamics.hpp"
#include "divkit/error.hpp"
#include "divkit/match_log.hpp"
#include "divkit/society.hpp"
#include "divkit/team_sim.hpp"

namespace divkit::io {

using json = nlohmann::ordered_json;

/// %.9g, the precision used for every number this tool prints.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::validation, path + ": cannot open file");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::validation, path + ": cannot write file");
  out << content;
}

inline json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::validation, source + ": " + e.what());
  }
}

namespace detail {

class Cursor {
 public:
  Cursor(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& get() const { return j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void error(const std::string& what) const { fail(ErrorKind::validation, path_ + ": " + what); }

  const Cursor& object(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) error("expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, _] : j_.items())
      if (!ok.count(k)) error("unknown field '" + k + "'");
    return *this;
  }

  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }

  Cursor field(const std::string& key) const {
    if (!j_.is_object()) error("expected an object");
    if (!j_.contains(key)) error("missing field '" + key + "'");
    return Cursor(j_.at(key), path_ + "." + key);
  }

  Cursor at(std::size_t i) const { return Cursor(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }

  std::size_t array_size() const {
    if (!j_.is_array()) error("expected an array");
    return j_.size();
  }

  double number() const {
    if (!j_.is_number()) error("expected a number");
    double v = j_.get<double>();
    if (!std::isfinite(v)) error("expected a finite number");
    return v;
  }

  std::string string() const {
    if (!j_.is_string()) error("expected a string");
    return j_.get<std::string>();
  }

  std::uint64_t unsigned_integer() const {
    if (!j_.is_number_unsigned()) error("expected a non-negative integer");
    return j_.get<std::uint64_t>();
  }

  std::int64_t integer() const {
    if (!j_.is_number_integer()) error("expected an integer");
    return j_.get<std::int64_t>();
  }

 private:
  const json& j_;
  std::string path_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Society

inline Society society_from_json(const json& j, const std::string& source = "society") {
  detail::Cursor root(j, source);
  root.object({"dimension_names", "agents"});
  std::vector<std::string> dims;
  auto d = root.field("dimension_names");
  for (std::size_t i = 0; i < d.array_size(); ++i) dims.push_back(d.at(i).string());
  std::vector<Agent> agents;
  std::set<std::string> ids;
  auto arr = root.field("agents");
  for (std::size_t i = 0; i < arr.array_size(); ++i) {
    auto a = arr.at(i);
    a.object({"id", "attributes", "features"});
    Agent agent;
    agent.id = AgentId(a.field("id").string());
    if (agent.id.value.empty()) a.field("id").error("empty id");
    if (!ids.insert(agent.id.value).second) a.field("id").error("duplicate id '" + agent.id.value + "'");
    auto attrs = a.field("attributes");
    if (!attrs.get().is_object()) attrs.error("expected an object");
    for (const auto& [k, v] : attrs.get().items()) agent.attributes[k] = detail::Cursor(v, attrs.path() + "." + k).string();
    auto f = a.field("features");
    for (std::size_t k = 0; k < f.array_size(); ++k) agent.features.push_back(f.at(k).number());
    if (agent.features.size() != dims.size())
      f.error("expected " + std::to_string(dims.size()) + " values (one per dimension name), got " +
              std::to_string(agent.features.size()));
    agents.push_back(std::move(agent));
  }
  try {
    return Society(std::move(dims), std::move(agents));
  } catch (const Error& e) {
    fail(e.kind(), source + ": " + e.what());
  }
}

inline Society load_society(const std::string& path) { return society_from_json(parse_json(read_file(path), path), path); }

inline json society_to_json(const Society& s) {
  json agents = json::array();
  for (const Agent& a : s.agents()) {
    json attrs = json::object();
    for (const auto& [k, v] : a.attributes) attrs[k] = v;
    agents.push_back({{"id", a.id.value}, {"attributes", attrs}, {"features", a.features}});
  }
  return {{"dimension_names", s.dimension_names()}, {"agents", agents}};
}

// ---------------------------------------------------------------------------
// Teams

inline TeamConfig team_from_json(const json& j, const std::string& source = "team") {
  detail::Cursor root(j, source);
  root.object({"name", "players"});
  TeamConfig t;
  t.name = root.field("name").string();
  auto players = root.field("players");
  for (std::size_t i = 0; i < players.array_size(); ++i) {
    auto p = players.at(i);
    p.object({"id", "role", "offensiveness", "home"});
    PlayerConfig pc;
    pc.id = AgentId(p.field("id").string());
    const std::string role = p.field("role").string();
    try {
      pc.role = role_by_name(role);
    } catch (const Error&) {
      p.field("role").error("unknown role '" + role + "'");
    }
    if (p.has("home")) {
      auto h = p.field("home");
      if (h.array_size() != 2) h.error("expected [x, y]");
      pc.role.home = {h.at(0).number(), h.at(1).number()};
    }
    pc.traits.offensiveness = p.field("offensiveness").number();
    t.players.push_back(std::move(pc));
  }
  try {
    t.validate();
  } catch (const Error& e) {
    fail(e.kind(), source + ": " + e.what());
  }
  return t;
}

inline TeamConfig load_team(const std::string& path) { return team_from_json(parse_json(read_file(path), path), path); }

inline json team_to_json(const TeamConfig& t) {
  json players = json::array();
  for (const auto& p : t.players) {
    json pj = {{"id", p.id.value}, {"role", p.role.name}, {"offensiveness", p.traits.offensiveness}};
    if (p.role.home != role_by_name(p.role.name).home) pj["home"] = {p.role.home.x, p.role.home.y};
    players.push_back(pj);
  }
  return {{"name", t.name}, {"players", players}};
}

// ---------------------------------------------------------------------------
// Dynamics scenario

struct Scenario {
  VibrationParams params{1.0, 0.0, 1.0};
  InitialConditions init;
  Forcing forcing;
  double dt = 0.01;
  double t_end = 20.0;
};

inline Scenario scenario_from_json(const json& j, const std::string& source = "scenario") {
  detail::Cursor root(j, source);
  root.object({"params", "init", "forcing", "grid"});
  auto p = root.field("params");
  p.object({"M", "R", "E"});
  Scenario s;
  const double m = p.field("M").number(), r = p.field("R").number(), e = p.field("E").number();
  if (m <= 0.0) p.field("M").error("M must be positive");
  if (e <= 0.0) p.field("E").error("E must be positive");
  if (r < 0.0) p.field("R").error("R must be non-negative");
  s.params = VibrationParams(m, r, e);
  if (root.has("init")) {
    auto i = root.field("init");
    i.object({"D0", "V0"});
    if (i.has("D0")) s.init.displacement = i.field("D0").number();
    if (i.has("V0")) s.init.speed = i.field("V0").number();
  }
  if (root.has("forcing")) {
    auto f = root.field("forcing");
    for (std::size_t k = 0; k < f.array_size(); ++k) {
      auto t = f.at(k);
      const std::string type = t.field("type").string();
      const std::string label = t.has("label") ? t.field("label").string() : type;
      if (type == "sinusoid") {
        t.object({"type", "label", "amplitude", "omega", "phase"});
        double w = t.field("omega").number();
        if (w < 0.0) t.field("omega").error("omega must be >= 0");
        s.forcing.sinusoids.push_back({label, t.field("amplitude").number(), w, t.has("phase") ? t.field("phase").number() : 0.0});
      } else if (type == "constant") {
        t.object({"type", "label", "amplitude"});
        s.forcing.steps.push_back({label, t.field("amplitude").number(), 0.0});
      } else if (type == "step") {
        t.object({"type", "label", "amplitude", "onset"});
        double on = t.field("onset").number();
        if (on < 0.0) t.field("onset").error("onset must be >= 0");
        s.forcing.steps.push_back({label, t.field("amplitude").number(), on});
      } else if (type == "impulse") {
        t.object({"type", "label", "magnitude", "time"});
        double at = t.field("time").number();
        if (at < 0.0) t.field("time").error("time must be >= 0");
        s.forcing.impulses.push_back({label, t.field("magnitude").number(), at});
      } else {
        t.field("type").error("unknown forcing type '" + type + "' (sinusoid, constant, step, impulse)");
      }
    }
  }
  auto g = root.field("grid");
  g.object({"dt", "t_end"});
  s.dt = g.field("dt").number();
  s.t_end = g.field("t_end").number();
  if (s.dt <= 0.0) g.field("dt").error("dt must be positive");
  if (s.t_end <= 0.0) g.field("t_end").error("t_end must be positive");
  if (s.t_end / s.dt > 5e7) g.error("grid has more than 5e7 steps");
  return s;
}

inline Scenario load_scenario(const std::string& path) { return scenario_from_json(parse_json(read_file(path), path), path); }

/// t,D,D_prime,F
inline std::string trajectory_csv(const Trajectory& tr) {
  std::string out = "t,D,D_prime,F\n";
  for (const auto& s : tr.samples) out += fmt(s.t) + ',' + fmt(s.d) + ',' + fmt(s.v) + ',' + fmt(s.f) + '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Match logs

/// tick,agent_id,state_id,activity_id,x,y
inline std::string match_log_csv(const MatchLog& log) {
  std::string out = "tick,agent_id,state_id,activity_id,x,y\n";
  for (const auto& r : log.rows)
    out += std::to_string(r.tick) + ',' + r.agent.value + ',' + r.state + ',' + r.activity + ',' + fmt(r.x) + ',' + fmt(r.y) + '\n';
  return out;
}

inline json match_summary_json(const MatchLog& log) {
  json roster = json::array();
  for (const auto& r : log.roster)
    roster.push_back({{"id", r.id.value}, {"side", r.side}, {"role", r.role}, {"home", {r.home_x, r.home_y}},
                      {"offensiveness", r.offensiveness}});
  json events = json::array();
  for (const auto& e : log.events) {
    json ej = {{"tick", e.tick}, {"kind", e.kind}, {"agent", e.agent}};
    if (e.position) ej["position"] = {(*e.position)[0], (*e.position)[1]};
    events.push_back(ej);
  }
  return {{"seed", log.seed},     {"ticks", log.ticks},   {"teams", log.teams}, {"score", log.score},
          {"states", log.states}, {"roster", roster},     {"events", events}};
}

inline MatchLog match_log_from(const std::string& csv, const std::string& summary, const std::string& source) {
  MatchLog log;
  const json doc = parse_json(summary, source + " (summary)");
  detail::Cursor root(doc, source + " (summary)");
  root.object({"seed", "ticks", "teams", "score", "states", "roster", "events"});
  log.seed = root.field("seed").unsigned_integer();
  log.ticks = root.field("ticks").integer();
  auto teams = root.field("teams");
  if (teams.array_size() != 2) teams.error("expected two team names");
  log.teams = {teams.at(0).string(), teams.at(1).string()};
  auto score = root.field("score");
  if (score.array_size() != 2) score.error("expected two scores");
  log.score = {static_cast<int>(score.at(0).integer()), static_cast<int>(score.at(1).integer())};
  auto states = root.field("states");
  for (std::size_t i = 0; i < states.array_size(); ++i) log.states.push_back(states.at(i).string());
  auto roster = root.field("roster");
  for (std::size_t i = 0; i < roster.array_size(); ++i) {
    auto r = roster.at(i);
    RosterEntry e;
    e.id = AgentId(r.field("id").string());
    e.side = static_cast<int>(r.field("side").integer());
    e.role = r.field("role").string();
    auto h = r.field("home");
    if (h.array_size() != 2) h.error("expected [x, y]");
    e.home_x = h.at(0).number();
    e.home_y = h.at(1).number();
    e.offensiveness = r.field("offensiveness").number();
    log.roster.push_back(e);
  }
  auto events = root.field("events");
  for (std::size_t i = 0; i < events.array_size(); ++i) {
    auto ev = events.at(i);
    LogEvent e;
    e.tick = ev.field("tick").integer();
    e.kind = ev.field("kind").string();
    e.agent = ev.field("agent").string();
    if (ev.has("position")) {
      auto p = ev.field("position");
      if (p.array_size() != 2) p.error("expected [x, y]");
      e.position = std::array<double, 2>{p.at(0).number(), p.at(1).number()};
    }
    log.events.push_back(e);
  }

  std::istringstream in(csv);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::validation, source + ": empty log");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == "tick,agent_id,state_id,activity_id,x,y", ErrorKind::validation,
          source + ":1: expected header 'tick,agent_id,state_id,activity_id,x,y'");
  std::set<std::string> known;
  for (const auto& r : log.roster) known.insert(r.id.value);
  std::set<std::string> state_set(log.states.begin(), log.states.end());
  std::int64_t last_tick = 0;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    require(f.size() == 6, ErrorKind::validation, where + "expected 6 fields, got " + std::to_string(f.size()));
    LogRow row;
    try {
      std::size_t used = 0;
      row.tick = std::stoll(f[0], &used);
      require(used == f[0].size(), ErrorKind::validation, where + "tick: not an integer");
      row.x = std::stod(f[4], &used);
      require(used == f[4].size(), ErrorKind::validation, where + "x: not a number");
      row.y = std::stod(f[5], &used);
      require(used == f[5].size(), ErrorKind::validation, where + "y: not a number");
    } catch (const std::logic_error&) {
      fail(ErrorKind::validation, where + "malformed number");
    }
    row.agent = AgentId(f[1]);
    row.state = f[2];
    row.activity = f[3];
    require(known.count(f[1]) != 0, ErrorKind::validation, where + "agent '" + f[1] + "' not in the roster");
    require(state_set.count(f[2]) != 0, ErrorKind::validation, where + "state '" + f[2] + "' not in the state list");
    require(row.tick >= last_tick && row.tick < log.ticks, ErrorKind::validation, where + "tick out of order or out of range");
    last_tick = row.tick;
    log.rows.push_back(std::move(row));
  }
  return log;
}

inline MatchLog load_match_log(const std::string& csv_path, const std::string& summary_path) {
  return match_log_from(read_file(csv_path), read_file(summary_path), csv_path);
}

/// Per-agent policies read off a log: the perceptual state is the automaton
/// state on the previous tick, the action the activity chosen on this tick
/// (most frequent, ties to the lexicographically smallest).
inline std::vector<PolicyTable> policies_from_log(const MatchLog& log, TickWindow window) {
  std::map<std::string, std::map<std::string, std::map<std::string, std::int64_t>>> counts;
  std::map<std::string, std::pair<std::int64_t, std::string>> previous;  // agent -> (tick, state)
  for (const auto& r : log.rows) {
    if (!window.contains(r.tick)) continue;
    auto it = previous.find(r.agent.value);
    if (it != previous.end() && it->second.first + 1 == r.tick) ++counts[r.agent.value][it->second.second][r.activity];
    previous[r.agent.value] = {r.tick, r.state};
  }
  std::vector<PolicyTable> out;
  for (const auto& rost : log.roster) {
    auto it = counts.find(rost.id.value);
    if (it == counts.end()) continue;
    PolicyTable t{rost.id, {}};
    for (const auto& [state, acts] : it->second) {
      std::string best;
      std::int64_t best_n = -1, total = 0;
      for (const auto& [a, n] : acts) {
        total += n;
        if (n > best_n) {
          best = a;
          best_n = n;
        }
      }
      t.set(state, best, total);
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace divkit::io
