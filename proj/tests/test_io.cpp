#include <gtest/gtest.h>

#include <sstream>

#include "divkit/io.hpp"

using namespace divkit;
using io::json;

namespace {

std::string data(const std::string& rel) { return std::string(DIVKIT_DATA_DIR) + "/" + rel; }

// message of the validation error raised by f, or "" when none
template <class F>
std::string error_of(F f) {
  try {
    f();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST(Io, FormatPrecision) {
  EXPECT_EQ(io::fmt(0.1), "0.1");
  EXPECT_EQ(io::fmt(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(io::fmt(2.0), "2");
}

TEST(SocietyJson, LoadsFixtures) {
  Society s = io::load_society(data("societies/block_star.json"));
  EXPECT_EQ(s.size(), 4u);
  EXPECT_NEAR(simple_social_entropy(s, "shape").bits, 0.811278, 1e-6);
  Society back = io::society_from_json(io::society_to_json(s));
  EXPECT_EQ(io::society_to_json(back), io::society_to_json(s));
}

TEST(SocietyJson, PathDiagnostics) {
  auto parse = [](const std::string& text) { return io::society_from_json(json::parse(text), "s.json"); };
  EXPECT_TRUE(contains(error_of([&] { parse(R"({"dimension_names":["x"],"agents":[{"id":"a","attributes":{},"features":[1,2]}]})"); }),
                       "s.json.agents[0].features"));
  EXPECT_TRUE(contains(error_of([&] { parse(R"({"dimension_names":[],"agents":[{"id":"a","attributes":{"k":3},"features":[]}]})"); }),
                       "s.json.agents[0].attributes.k"));
  EXPECT_TRUE(contains(error_of([&] { parse(R"({"dimension_names":[],"agents":[],"extra":1})"); }), "unknown field 'extra'"));
  EXPECT_TRUE(contains(error_of([&] {
                         parse(R"({"dimension_names":[],"agents":[{"id":"a","attributes":{},"features":[]},{"id":"a","attributes":{},"features":[]}]})");
                       }),
                       "duplicate id"));
  EXPECT_TRUE(contains(error_of([&] { parse(R"({"agents":[]})"); }), "missing field 'dimension_names'"));
  EXPECT_FALSE(error_of([] { io::parse_json("{not json", "bad.json"); }).empty());
  EXPECT_FALSE(error_of([] { io::read_file("/nonexistent/file.json"); }).empty());
}

TEST(TeamJson, FixturesMatchBuiltins) {
  for (const auto& t : builtin_teams()) {
    TeamConfig loaded = io::load_team(data("teams/" + t.name + ".json"));
    EXPECT_EQ(io::team_to_json(loaded), io::team_to_json(t)) << t.name;
    EXPECT_EQ(positional_entropy(loaded).bits, positional_entropy(t).bits);
  }
}

TEST(TeamJson, Diagnostics) {
  auto parse = [](const std::string& text) { return io::team_from_json(json::parse(text), "t.json"); };
  EXPECT_TRUE(contains(error_of([&] { parse(R"({"name":"x","players":[{"id":"p1","role":"Libero","offensiveness":0}]})"); }),
                       "t.json.players[0].role"));
  EXPECT_TRUE(contains(error_of([&] { parse(R"({"name":"x","players":[{"id":"p1","role":"C Forward","offensiveness":0}]})"); }),
                       "exactly one Goalie"));
  EXPECT_TRUE(contains(error_of([&] { parse(R"({"name":"x","players":[{"id":"p1","role":"Goalie","offensiveness":"high"}]})"); }),
                       "t.json.players[0].offensiveness"));
  TeamConfig custom = parse(R"({"name":"x","players":[{"id":"p1","role":"Goalie","offensiveness":0.2,"home":[0.1,0.4]}]})");
  EXPECT_EQ(custom.players[0].role.home, (FieldPoint{0.1, 0.4}));
  EXPECT_EQ(io::team_to_json(custom)["players"][0]["home"], json::parse("[0.1,0.4]"));
}

TEST(ScenarioJson, LoadsAndValidates) {
  io::Scenario s = io::load_scenario(data("scenarios/forced_damped.json"));
  EXPECT_EQ(s.params.mass(), 1.0);
  EXPECT_EQ(s.params.resistance(), 0.5);
  ASSERT_EQ(s.forcing.sinusoids.size(), 1u);
  EXPECT_EQ(s.forcing.sinusoids[0].omega, 0.8);
  EXPECT_EQ(s.dt, 0.001);

  auto parse = [](const std::string& text) { return io::scenario_from_json(json::parse(text), "sc.json"); };
  EXPECT_TRUE(contains(error_of([&] { parse(R"({"params":{"M":0,"R":0,"E":1},"grid":{"dt":0.1,"t_end":1}})"); }), "sc.json.params.M"));
  EXPECT_TRUE(contains(error_of([&] { parse(R"({"params":{"M":1,"R":-1,"E":1},"grid":{"dt":0.1,"t_end":1}})"); }), "sc.json.params.R"));
  EXPECT_TRUE(contains(error_of([&] { parse(R"({"params":{"M":1,"R":0,"E":1},"grid":{"dt":0,"t_end":1}})"); }), "sc.json.grid.dt"));
  EXPECT_TRUE(contains(error_of([&] {
                         parse(R"({"params":{"M":1,"R":0,"E":1},"forcing":[{"type":"laser"}],"grid":{"dt":0.1,"t_end":1}})");
                       }),
                       "sc.json.forcing[0].type"));
  io::Scenario all = parse(
      R"({"params":{"M":1,"R":0,"E":1},"forcing":[{"type":"constant","amplitude":2},{"type":"step","amplitude":1,"onset":3},)"
      R"({"type":"impulse","magnitude":0.5,"time":1}],"grid":{"dt":0.1,"t_end":1}})");
  EXPECT_EQ(all.forcing.steps.size(), 2u);
  EXPECT_EQ(all.forcing.impulses.size(), 1u);
  EXPECT_EQ(all.forcing.steps[1].onset, 3.0);
}

TEST(MatchLogIo, RoundTrip) {
  MatchOptions o;
  o.malfunctions.push_back({40, AgentId("A.p2"), AgentId("A.p3"), 5});
  MatchLog log = run_match(builtin_team("Kids2"), builtin_team("Agr"), 6, 120, o);
  const std::string csv = io::match_log_csv(log);
  const std::string summary = io::match_summary_json(log).dump();
  MatchLog back = io::match_log_from(csv, summary, "log.csv");
  EXPECT_EQ(back.rows.size(), log.rows.size());
  EXPECT_EQ(back.score, log.score);
  EXPECT_EQ(back.events.size(), log.events.size());
  EXPECT_EQ(io::match_log_csv(back), csv);
  EXPECT_EQ(io::match_summary_json(back).dump(), summary);
  // time series recomputed from the reloaded log agree
  auto a = diversity_timeseries(log, 20, DiversityMetric::positional_hierarchic);
  auto b = diversity_timeseries(back, 20, DiversityMetric::positional_hierarchic);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].value, b[i].value);
}

TEST(MatchLogIo, CsvDiagnostics) {
  MatchLog log = run_match(builtin_team("Kids1"), builtin_team("Kids1"), 1, 3);
  const std::string summary = io::match_summary_json(log).dump();
  const std::string header = "tick,agent_id,state_id,activity_id,x,y\n";
  EXPECT_TRUE(contains(error_of([&] { io::match_log_from("t,a\n", summary, "l.csv"); }), "l.csv:1"));
  EXPECT_TRUE(contains(error_of([&] { io::match_log_from(header + "0,A.p1,hold,hold\n", summary, "l.csv"); }), "l.csv:2"));
  EXPECT_TRUE(contains(error_of([&] { io::match_log_from(header + "0,Z.p1,hold,hold,0,0\n", summary, "l.csv"); }), "not in the roster"));
  EXPECT_TRUE(contains(error_of([&] { io::match_log_from(header + "0,A.p1,fly,fly,0,0\n", summary, "l.csv"); }), "state 'fly'"));
  EXPECT_TRUE(contains(error_of([&] { io::match_log_from(header + "x,A.p1,hold,hold,0,0\n", summary, "l.csv"); }), "l.csv:2"));
  EXPECT_TRUE(contains(error_of([&] { io::match_log_from(header + "9,A.p1,hold,hold,0,0\n", summary, "l.csv"); }), "out of range"));
}

TEST(PoliciesFromLog, PreviousStateToActivity) {
  MatchLog log;
  log.ticks = 4;
  log.states = {"s", "t"};
  log.roster = {{AgentId("a"), 0, "Goalie", 0, 0, 0}, {AgentId("b"), 0, "Goalie", 0, 0, 0}};
  auto row = [](std::int64_t t, const char* agent, const char* state, const char* act) {
    return LogRow{t, AgentId(agent), state, act, 0, 0};
  };
  log.rows = {row(0, "a", "s", "go"), row(1, "a", "t", "run"), row(2, "a", "s", "go"), row(3, "a", "t", "run"),
              row(0, "b", "s", "go")};
  auto tables = io::policies_from_log(log, {0, 4});
  ASSERT_EQ(tables.size(), 1u);  // b has no consecutive pair
  EXPECT_EQ(tables[0].find("s")->action, "run");
  EXPECT_EQ(tables[0].find("s")->visits, 2);
  EXPECT_EQ(tables[0].find("t")->action, "go");
  EXPECT_EQ(tables[0].find("t")->visits, 1);
  auto late = io::policies_from_log(log, {2, 4});
  ASSERT_EQ(late.size(), 1u);
  EXPECT_EQ(late[0].total_visits(), 1);
}
