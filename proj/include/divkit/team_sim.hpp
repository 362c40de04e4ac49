#pragma once

// Deterministic soccer-team simulator used to regenerate the role/trait
// experiment: six built-in team configurations, their positional and trait
// entropies, an abstract zone-possession match model driven by a situated
// automaton per player, malfunction injection, and diversity time series.
//
// The match model is synthetic. Scores exist to exercise the pipeline and its
// symmetry properties; they are not meant to predict real soccer results.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "divkit/automaton.hpp"
#include "divkit/behavior.hpp"
#include "divkit/entropy.hpp"
#include "divkit/error.hpp"
#include "divkit/match_log.hpp"
#include "divkit/society.hpp"
#include "divkit/taxonomy.hpp"

namespace divkit {

// ---------------------------------------------------------------------------
// Random stream

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// xorshift64* (shifts 12, 25, 27; multiplier 0x2545F4914F6CDD1D), state
/// seeded through splitmix64. Portable and bit-reproducible.
class XorShift64Star {
 public:
  explicit XorShift64Star(std::uint64_t seed) : state_(splitmix64(seed)) {
    if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
  }

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Roles and teams

struct FieldPoint {
  double x = 0.0;  // 0 = own goal line, 1 = opponent goal line
  double y = 0.0;

  auto operator<=>(const FieldPoint&) const = default;
};

struct Role {
  std::string name;
  FieldPoint home;
};

/// The twelve position labels with fixed home positions on the unit field.
inline const std::vector<Role>& canonical_roles() {
  static const std::vector<Role> roles = {
      {"Goalie", {0.05, 0.50}},       {"L Defender", {0.22, 0.20}},  {"C Defender", {0.20, 0.50}},
      {"R Defender", {0.22, 0.80}},   {"L Midfield", {0.45, 0.12}},  {"CL Midfield", {0.42, 0.38}},
      {"C Midfield", {0.42, 0.50}},   {"CR Midfield", {0.42, 0.62}}, {"R Midfield", {0.45, 0.88}},
      {"L Forward", {0.70, 0.25}},    {"C Forward", {0.72, 0.50}},   {"R Forward", {0.70, 0.75}},
  };
  return roles;
}

inline Role role_by_name(const std::string& name) {
  for (const auto& r : canonical_roles())
    if (r.name == name) return r;
  fail(ErrorKind::not_found, "unknown role '" + name + "'");
}

struct TraitProfile {
  double offensiveness = 0.0;  // in [0, 1]
};

struct PlayerConfig {
  AgentId id;
  Role role;
  TraitProfile traits;
};

struct TeamConfig {
  std::string name;
  std::vector<PlayerConfig> players;

  void validate() const {
    require(!name.empty(), ErrorKind::validation, "team: empty name");
    require(!players.empty(), ErrorKind::validation, "team '" + name + "': no players");
    int goalies = 0;
    std::map<std::string, int> ids;
    for (const auto& p : players) {
      require(!p.id.value.empty(), ErrorKind::validation, "team '" + name + "': player with empty id");
      require(++ids[p.id.value] == 1, ErrorKind::validation, "team '" + name + "': duplicate player id '" + p.id.value + "'");
      require(std::isfinite(p.traits.offensiveness) && p.traits.offensiveness >= 0.0 && p.traits.offensiveness <= 1.0,
              ErrorKind::validation, "team '" + name + "', player '" + p.id.value + "': offensiveness must lie in [0, 1]");
      require(std::isfinite(p.role.home.x) && std::isfinite(p.role.home.y) && p.role.home.x >= 0.0 && p.role.home.x <= 1.0 &&
                  p.role.home.y >= 0.0 && p.role.home.y <= 1.0,
              ErrorKind::validation, "team '" + name + "', player '" + p.id.value + "': home position outside the field");
      if (p.role.name == "Goalie") ++goalies;
    }
    require(goalies == 1, ErrorKind::validation, "team '" + name + "': exactly one Goalie required, found " + std::to_string(goalies));
  }
};

namespace detail {

inline TeamConfig make_team(std::string name, const std::vector<std::pair<std::string, double>>& roster) {
  TeamConfig t;
  t.name = std::move(name);
  int n = 0;
  for (const auto& [role, off] : roster) t.players.push_back({AgentId("p" + std::to_string(++n)), role_by_name(role), {off}});
  t.validate();
  return t;
}

inline std::vector<std::pair<std::string, double>> repeat(const std::string& role, int count, double off) {
  return std::vector<std::pair<std::string, double>>(static_cast<std::size_t>(count), {role, off});
}

inline std::vector<std::pair<std::string, double>> concat(std::initializer_list<std::vector<std::pair<std::string, double>>> parts) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline std::vector<std::pair<std::string, double>> eleven(double goalie, double defenders, double midfielders, double forwards) {
  return concat({repeat("Goalie", 1, goalie),
                 {{"L Defender", defenders}, {"C Defender", defenders}, {"R Defender", defenders}},
                 {{"L Midfield", midfielders}, {"CL Midfield", midfielders}, {"CR Midfield", midfielders}, {"R Midfield", midfielders}},
                 {{"L Forward", forwards}, {"C Forward", forwards}, {"R Forward", forwards}}});
}

}  // namespace detail

/// Kids0, Agr, Kids2, Kids1, Kids3 and Control.
///
/// Agr keeps the printed 1 + 3 + 8 = 12 player roster. Goalie offensiveness
/// equals the field setting for the single-cluster teams; Kids2 and Control
/// goalies use 0.0, which puts them in a cluster of their own.
inline std::vector<TeamConfig> builtin_teams() {
  using detail::concat;
  using detail::repeat;
  return {
      detail::make_team("Kids0", concat({repeat("Goalie", 1, 0.80), repeat("C Midfield", 10, 0.80)})),
      detail::make_team("Agr", concat({repeat("Goalie", 1, 0.99), repeat("C Defender", 3, 0.99), repeat("C Forward", 8, 0.99)})),
      detail::make_team("Kids2", concat({repeat("Goalie", 1, 0.00), repeat("C Defender", 5, 0.50), repeat("C Forward", 5, 0.90)})),
      detail::make_team("Kids1", detail::eleven(0.50, 0.50, 0.50, 0.50)),
      detail::make_team("Kids3", detail::eleven(0.80, 0.80, 0.80, 0.80)),
      detail::make_team("Control", detail::eleven(0.00, 0.30, 0.60, 0.90)),
  };
}

inline TeamConfig builtin_team(const std::string& name) {
  for (auto& t : builtin_teams())
    if (t.name == name) return t;
  fail(ErrorKind::not_found, "unknown team '" + name + "'");
}

namespace detail {

inline std::string position_key(FieldPoint p) {
  return std::to_string(std::llround(p.x * 1e9)) + "," + std::to_string(std::llround(p.y * 1e9));
}

inline std::string trait_key(double o) { return std::to_string(std::llround(o * 1e9)); }

inline EntropyValue entropy_of_keys(const std::vector<std::string>& keys) {
  std::map<std::string, std::size_t> counts;
  for (const auto& k : keys) ++counts[k];
  std::vector<std::size_t> c;
  for (const auto& [_, n] : counts) c.push_back(n);
  return shannon_entropy(Distribution::from_counts(c));
}

}  // namespace detail

/// Simple social entropy over distinct home positions.
inline EntropyValue positional_entropy(const TeamConfig& team) {
  team.validate();
  std::vector<std::string> keys;
  for (const auto& p : team.players) keys.push_back(detail::position_key(p.role.home));
  return detail::entropy_of_keys(keys);
}

/// Simple social entropy over offensiveness clusters (players with equal settings).
inline EntropyValue trait_entropy(const TeamConfig& team) {
  team.validate();
  std::vector<std::string> keys;
  for (const auto& p : team.players) keys.push_back(detail::trait_key(p.traits.offensiveness));
  return detail::entropy_of_keys(keys);
}

inline std::size_t position_count(const TeamConfig& team) {
  std::map<std::string, int> k;
  for (const auto& p : team.players) ++k[detail::position_key(p.role.home)];
  return k.size();
}

inline double average_offensiveness(const TeamConfig& team) {
  double s = 0.0;
  for (const auto& p : team.players) s += p.traits.offensiveness;
  return s / static_cast<double>(team.players.size());
}

/// Team as a society: attributes `role`, `position`, `offensiveness`; features
/// (home x, home y, offensiveness).
inline Society team_society(const TeamConfig& team) {
  std::vector<Agent> agents;
  for (const auto& p : team.players) {
    Agent a;
    a.id = p.id;
    a.attributes["role"] = p.role.name;
    a.attributes["position"] = detail::position_key(p.role.home);
    a.attributes["offensiveness"] = detail::trait_key(p.traits.offensiveness);
    a.features = {p.role.home.x, p.role.home.y, p.traits.offensiveness};
    agents.push_back(std::move(a));
  }
  return Society({"home_x", "home_y", "offensiveness"}, std::move(agents));
}

// ---------------------------------------------------------------------------
// Player automaton

namespace soccer {

inline constexpr const char* kKickoffEvent = "kickoff";

inline const std::vector<std::string>& playing_states() {
  static const std::vector<std::string> s = {"hold", "attack", "support", "defend", "guard"};
  return s;
}

/// States: kickoff_wait, hold, attack, support, defend, guard, plus the
/// virtual states kick and catch for the special actions.
inline AutomatonSpec automaton() {
  std::vector<AutomatonState> states = {
      {"kickoff_wait", "take_kickoff_position", false}, {"hold", "hold_home_position", false},
      {"attack", "attack_ball", false},                 {"support", "support_attack", false},
      {"defend", "mark_opponents", false},              {"guard", "guard_goal", false},
      {"kick", "kick_ball", true},                      {"catch", "catch_ball", true},
  };
  std::map<std::pair<std::string, std::string>, std::string> reactive;
  std::map<std::string, std::vector<DeliberativeCandidate>> deliberative;
  std::vector<DeliberativeCandidate> play;
  for (const auto& s : playing_states())
    for (const auto& st : states)
      if (st.id == s) play.push_back({st.activity, s});
  for (const auto& st : states) {
    reactive[{st.id, kKickoffEvent}] = "kickoff_wait";
    deliberative[st.id] = play;
  }
  return AutomatonSpec(std::move(states), std::move(reactive), std::move(deliberative));
}

inline std::vector<std::string> state_ids() {
  const AutomatonSpec spec = automaton();
  std::vector<std::string> out;
  for (const auto& s : spec.states()) out.push_back(s.id);
  return out;
}

}  // namespace soccer

// ---------------------------------------------------------------------------
// Match model

struct MatchSettings {
  int zones = 9;                  // ball zones along the field, odd so the kickoff zone is central
  double kernel_width = 0.18;     // influence kernel sigma
  double offensive_shift = 0.30;  // fraction of the distance to the opponent goal line
  double shot_quality = 0.35;     // scoring probability scale
  double compensation = 0.5;      // substitute moves this fraction toward a dead teammate's home
};

struct Malfunction {
  std::int64_t tick = 0;
  AgentId agent;                        // log id, e.g. "A.p1"
  std::optional<AgentId> substitute;    // shifts its home toward the dead agent's home
  std::int64_t compensation_delay = 0;  // ticks between the failure and the substitute's shift
};

inline std::string log_id(int side, const AgentId& player) { return std::string(side == 0 ? "A." : "B.") + player.value; }

/// One match as a stepwise, single-threaded simulation.
///
/// Side 0 attacks toward x = 1, side 1 toward x = 0; each side's state is
/// computed in its own frame so that swapping teams together with `mirrored`
/// replays exactly the same contests with the sides exchanged.
class Match {
 public:
  Match(const TeamConfig& a, const TeamConfig& b, std::uint64_t seed, bool mirrored = false, MatchSettings settings = {})
      : rng_(seed), mirrored_(mirrored), settings_(settings), automaton_(soccer::automaton()) {
    a.validate();
    b.validate();
    require(settings_.zones >= 3 && settings_.zones % 2 == 1, ErrorKind::validation, "match: zone count must be odd and >= 3");
    log_.seed = seed;
    log_.teams = {a.name, b.name};
    log_.states = soccer::state_ids();
    const std::array<const TeamConfig*, 2> teams{&a, &b};
    for (int side = 0; side < 2; ++side) {
      for (const auto& p : teams[side]->players) {
        Player pl;
        pl.id = AgentId(log_id(side, p.id));
        pl.side = side;
        pl.role = p.role.name;
        pl.home = p.role.home;
        pl.offensiveness = p.traits.offensiveness;
        pl.state = "kickoff_wait";
        players_.push_back(pl);
        log_.roster.push_back({pl.id, side, pl.role, world_x(side, pl.home.x), pl.home.y, pl.offensiveness});
      }
    }
    const int ref = reference_side();
    kickoff_side_ = rng_.uniform() < 0.5 ? ref : 1 - ref;
    restart_pending_ = true;
  }

  std::int64_t tick() const noexcept { return tick_; }
  const MatchLog& log() const noexcept { return log_; }
  MatchLog take_log() && { return std::move(log_); }

  /// Kills `agent` from the current tick on. With a substitute, the
  /// substitute's home moves toward the dead agent's home after `delay` ticks.
  void inject_malfunction(const AgentId& agent, const std::optional<AgentId>& substitute = std::nullopt,
                          std::int64_t delay = 0) {
    Player& dead = player(agent);
    require(dead.alive, ErrorKind::validation, "malfunction: agent '" + agent.value + "' is already dead");
    require(delay >= 0, ErrorKind::validation, "malfunction: negative compensation delay");
    dead.alive = false;
    log_.events.push_back({tick_, "malfunction", agent.value, std::nullopt});
    if (substitute) {
      Player& sub = player(*substitute);
      require(sub.alive, ErrorKind::validation, "malfunction: substitute '" + substitute->value + "' is dead");
      require(sub.side == dead.side, ErrorKind::validation, "malfunction: substitute must play for the same side");
      pending_shifts_.push_back({tick_ + delay, index_of(*substitute), dead.home});
    }
    apply_due_shifts();
  }

  void step() {
    apply_due_shifts();
    std::vector<std::string> events;
    Special special;
    if (restart_pending_) {
      events.push_back(soccer::kKickoffEvent);
      log_.events.push_back({tick_, soccer::kKickoffEvent, "", std::nullopt});
      ball_zone_ = settings_.zones / 2;
      possession_ = kickoff_side_;
      restart_pending_ = false;
    } else {
      special = play_tick();
    }
    for (std::size_t i = 0; i < players_.size(); ++i) {
      Player& p = players_[i];
      if (!p.alive) continue;
      std::string state, activity;
      if (special.agent == i) {
        state = special.state;
        activity = automaton_.state(state).activity;
      } else {
        const auto utilities = utilities_for(p);
        AutomatonOutcome o = automaton_step(automaton_, p.state, events, utilities);
        state = o.next_state;
        activity = o.activity;
      }
      p.state = state;
      const FieldPoint at = displayed_position(p);
      log_.rows.push_back({tick_, p.id, state, activity, world_x(p.side, at.x), at.y});
    }
    ++tick_;
    log_.ticks = tick_;
  }

  void run_until(std::int64_t end_tick) {
    while (tick_ < end_tick) step();
  }

 private:
  struct Player {
    AgentId id;
    int side = 0;
    std::string role;
    FieldPoint home;  // own frame
    double offensiveness = 0.0;
    bool alive = true;
    std::string state;
  };

  struct Shift {
    std::int64_t tick;
    std::size_t player;
    FieldPoint toward;
  };

  struct Special {
    std::size_t agent = static_cast<std::size_t>(-1);
    std::string state;
  };

  static double world_x(int side, double own_x) { return side == 0 ? own_x : 1.0 - own_x; }

  int reference_side() const { return mirrored_ ? 1 : 0; }

  int own_zone(int side) const { return side == 0 ? ball_zone_ : settings_.zones - 1 - ball_zone_; }

  void set_own_zone(int side, int z) { ball_zone_ = side == 0 ? z : settings_.zones - 1 - z; }

  double zone_center(int own_z) const { return (own_z + 0.5) / settings_.zones; }

  FieldPoint effective(const Player& p) const {
    return {p.home.x + settings_.offensive_shift * p.offensiveness * (1.0 - p.home.x), p.home.y};
  }

  // Sum of Gaussian kernels over live players, evaluated in `side`'s own frame.
  double influence(int side, int own_z) const {
    const double cx = zone_center(own_z), s2 = 2.0 * settings_.kernel_width * settings_.kernel_width;
    double total = 0.0;
    for (const auto& p : players_) {
      if (!p.alive || p.side != side) continue;
      const FieldPoint e = effective(p);
      total += std::exp(-((e.x - cx) * (e.x - cx) + (e.y - 0.5) * (e.y - 0.5)) / s2);
    }
    return total;
  }

  // Probability that `side` wins a contest against the other side at its own zone `own_z`.
  double win_probability(int side, int own_z) const {
    const double mine = influence(side, own_z);
    const double theirs = influence(1 - side, settings_.zones - 1 - own_z);
    const double sum = mine + theirs;
    return sum > 0.0 ? mine / sum : 0.5;
  }

  Special play_tick() {
    Special special;
    const double u1 = rng_.uniform(), u2 = rng_.uniform();
    const int ref = reference_side();
    possession_ = u1 < win_probability(ref, own_zone(ref)) ? ref : 1 - ref;
    const int att = possession_, def = 1 - possession_;
    const int z = own_zone(att);
    if (z == settings_.zones - 1) {
      const double mine = influence(att, z), theirs = influence(def, 0);
      const double p_goal = mine + theirs > 0.0 ? settings_.shot_quality * mine / (mine + theirs) : 0.0;
      special = {nearest_to_ball(att), "kick"};
      if (u2 < p_goal) {
        ++log_.score[static_cast<std::size_t>(att)];
        log_.events.push_back({tick_, "goal", side_name(att), std::nullopt});
        restart_pending_ = true;
        kickoff_side_ = def;
      } else {
        std::size_t keeper = goalie_of(def);
        if (keeper != static_cast<std::size_t>(-1)) special = {keeper, "catch"};
        possession_ = def;
        set_own_zone(def, 1);
      }
    } else if (u2 < win_probability(att, z + 1)) {
      set_own_zone(att, z + 1);
    }
    return special;
  }

  std::string side_name(int side) const { return side == 0 ? "A" : "B"; }

  std::size_t nearest_to_ball(int side) const {
    const double cx = zone_center(own_zone(side));
    std::size_t best = static_cast<std::size_t>(-1);
    double best_d = 0.0;
    for (std::size_t i = 0; i < players_.size(); ++i) {
      const Player& p = players_[i];
      if (!p.alive || p.side != side) continue;
      const FieldPoint e = effective(p);
      const double d = std::hypot(e.x - cx, e.y - 0.5);
      if (best == static_cast<std::size_t>(-1) || d < best_d) {
        best = i;
        best_d = d;
      }
    }
    return best;
  }

  std::size_t goalie_of(int side) const {
    for (std::size_t i = 0; i < players_.size(); ++i)
      if (players_[i].alive && players_[i].side == side && players_[i].role == "Goalie") return i;
    return static_cast<std::size_t>(-1);
  }

  // Candidate order: hold, attack, support, defend, guard.
  std::vector<double> utilities_for(const Player& p) const {
    const FieldPoint e = effective(p);
    const double dist = std::min(1.0, std::hypot(e.x - zone_center(own_zone(p.side)), e.y - 0.5));
    const bool ours = possession_ == p.side;
    const double o = p.offensiveness;
    const double attack = ours ? o * (1.0 - dist) + 0.1 : 0.0;
    const double support = ours ? 0.5 * o : 0.0;
    const double defend = ours ? 0.0 : (1.0 - o) * (1.0 - dist) + 0.1;
    const double guard = p.role == "Goalie" ? 0.6 : -1.0;
    return {0.2, attack, support, defend, guard};
  }

  FieldPoint displayed_position(const Player& p) const {
    const FieldPoint e = effective(p);
    const FieldPoint ball{zone_center(own_zone(p.side)), 0.5};
    double pull = 0.0;
    if (p.state == "attack") pull = 0.6;
    else if (p.state == "support") pull = 0.25;
    else if (p.state == "defend") pull = 0.4;
    else if (p.state == "kick" || p.state == "catch") pull = 1.0;
    return {e.x + pull * (ball.x - e.x), e.y + pull * (ball.y - e.y)};
  }

  std::size_t index_of(const AgentId& id) const {
    for (std::size_t i = 0; i < players_.size(); ++i)
      if (players_[i].id == id) return i;
    fail(ErrorKind::not_found, "unknown agent '" + id.value + "'");
  }

  Player& player(const AgentId& id) { return players_[index_of(id)]; }

  void apply_due_shifts() {
    for (auto it = pending_shifts_.begin(); it != pending_shifts_.end();) {
      if (it->tick > tick_) {
        ++it;
        continue;
      }
      Player& sub = players_[it->player];
      if (sub.alive) {
        const double c = settings_.compensation;
        sub.home = {sub.home.x + c * (it->toward.x - sub.home.x), sub.home.y + c * (it->toward.y - sub.home.y)};
        log_.events.push_back({tick_, "substitution", sub.id.value,
                               std::array<double, 2>{world_x(sub.side, sub.home.x), sub.home.y}});
      }
      it = pending_shifts_.erase(it);
    }
  }

  XorShift64Star rng_;
  bool mirrored_;
  MatchSettings settings_;
  AutomatonSpec automaton_;
  std::vector<Player> players_;
  std::vector<Shift> pending_shifts_;
  MatchLog log_;
  std::int64_t tick_ = 0;
  int ball_zone_ = 0;  // side-0 frame
  int possession_ = 0;
  int kickoff_side_ = 0;
  bool restart_pending_ = true;
};

struct MatchOptions {
  bool mirrored = false;
  std::vector<Malfunction> malfunctions;
  MatchSettings settings;
};

inline MatchLog run_match(const TeamConfig& a, const TeamConfig& b, std::uint64_t seed, std::int64_t ticks,
                          const MatchOptions& options = {}) {
  require(ticks >= 1, ErrorKind::validation, "run_match: ticks must be >= 1");
  Match m(a, b, seed, options.mirrored, options.settings);
  auto faults = options.malfunctions;
  std::stable_sort(faults.begin(), faults.end(), [](const Malfunction& x, const Malfunction& y) { return x.tick < y.tick; });
  for (const auto& f : faults) {
    require(f.tick >= 0 && f.tick < ticks, ErrorKind::validation, "malfunction tick outside the run");
    m.run_until(f.tick);
    m.inject_malfunction(f.agent, f.substitute, f.compensation_delay);
  }
  m.run_until(ticks);
  return std::move(m).take_log();
}

/// Goals of side 0 minus goals of side 1.
inline int score_difference(const MatchLog& log) { return log.score[0] - log.score[1]; }

// ---------------------------------------------------------------------------
// Diversity time series

enum class DiversityMetric {
  positional,             // simple entropy over distinct home positions of live agents
  positional_hierarchic,  // hierarchic entropy over live agents' home positions
  behavioral_hierarchic,  // hierarchic entropy over state-visit frequencies in the window
};

struct TimePoint {
  std::int64_t tick = 0;  // window start
  double value = 0.0;
};

struct LiveAgent {
  AgentId id;
  FieldPoint home;  // world frame
};

/// Live agents of one side and their home positions at the start of `tick`.
inline std::vector<LiveAgent> live_agents_at(const MatchLog& log, int side, std::int64_t tick) {
  std::vector<LiveAgent> out;
  for (const auto& r : log.roster) {
    if (r.side != side) continue;
    bool alive = true;
    FieldPoint home{r.home_x, r.home_y};
    for (const auto& e : log.events) {
      if (e.tick > tick || e.agent != r.id.value) continue;
      if (e.kind == "malfunction") alive = false;
      if (e.kind == "substitution" && e.position) home = {(*e.position)[0], (*e.position)[1]};
    }
    if (alive) out.push_back({r.id, home});
  }
  return out;
}

inline std::vector<TimePoint> diversity_timeseries(const MatchLog& log, std::int64_t window, DiversityMetric metric, int side = 0) {
  require(window >= 1, ErrorKind::validation, "diversity_timeseries: window must be >= 1");
  require(log.ticks % window == 0, ErrorKind::validation, "diversity_timeseries: window must divide the run length");
  require(side == 0 || side == 1, ErrorKind::validation, "diversity_timeseries: side must be 0 or 1");
  std::vector<TimePoint> out;
  for (std::int64_t start = 0; start < log.ticks; start += window) {
    const auto live = live_agents_at(log, side, start);
    double value = 0.0;
    if (!live.empty()) {
      switch (metric) {
        case DiversityMetric::positional: {
          std::vector<std::string> keys;
          for (const auto& a : live) keys.push_back(detail::position_key(a.home));
          value = detail::entropy_of_keys(keys).bits;
          break;
        }
        case DiversityMetric::positional_hierarchic: {
          std::vector<Agent> agents;
          for (const auto& a : live) agents.push_back({a.id, {}, {a.home.x, a.home.y}});
          value = hierarchic_entropy(Society({"home_x", "home_y"}, std::move(agents))).value;
          break;
        }
        case DiversityMetric::behavioral_hierarchic: {
          std::vector<AgentId> ids;
          for (const auto& a : live) ids.push_back(a.id);
          value = hierarchic_entropy(behavioral_features(log, ids, {start, start + window})).value;
          break;
        }
      }
    }
    out.push_back({start, value});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Experiment

struct ExperimentRow {
  std::string team;
  std::size_t positions = 0;
  double positional_entropy = 0.0;
  double trait_entropy = 0.0;
  double average_offensiveness = 0.0;
  int goals_for = 0;
  int goals_against = 0;
  int score_difference = 0;
};

/// Seed of game `game` of challenger `challenger` derived from the suite seed.
inline std::uint64_t game_seed(std::uint64_t seed, std::size_t challenger, std::size_t game) {
  return splitmix64(splitmix64(seed ^ (0x51ED27u + challenger)) + game);
}

/// Every challenger plays `games_per_pair` games against the control team
/// (challenger on side 0). Rows come back in challenger order regardless of `jobs`.
inline std::vector<ExperimentRow> experiment_suite(const TeamConfig& control, const std::vector<TeamConfig>& challengers,
                                                   int games_per_pair, std::uint64_t seed, std::int64_t ticks, int jobs = 1) {
  require(games_per_pair >= 1, ErrorKind::validation, "experiment: games per pair must be >= 1");
  require(!challengers.empty(), ErrorKind::validation, "experiment: no challengers");
  control.validate();
  auto play = [&](std::size_t i) {
    const TeamConfig& team = challengers[i];
    ExperimentRow row;
    row.team = team.name;
    row.positions = position_count(team);
    row.positional_entropy = positional_entropy(team).bits;
    row.trait_entropy = trait_entropy(team).bits;
    row.average_offensiveness = average_offensiveness(team);
    for (int g = 0; g < games_per_pair; ++g) {
      MatchLog log = run_match(team, control, game_seed(seed, i, static_cast<std::size_t>(g)), ticks);
      row.goals_for += log.score[0];
      row.goals_against += log.score[1];
    }
    row.score_difference = row.goals_for - row.goals_against;
    return row;
  };
  std::vector<ExperimentRow> rows(challengers.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < challengers.size(); ++i) rows[i] = play(i);
  } else {
    std::vector<std::future<ExperimentRow>> futures;
    for (std::size_t i = 0; i < challengers.size(); ++i) futures.push_back(std::async(std::launch::async, play, i));
    for (std::size_t i = 0; i < futures.size(); ++i) rows[i] = futures[i].get();
  }
  return rows;
}

}  // namespace divkit
