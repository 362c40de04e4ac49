// divkit command-line front end.
//
// Exit codes: 0 success, 2 input or usage error, 1 internal error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "divkit/behavior.hpp"
#include "divkit/dynamics.hpp"
#include "divkit/entropy.hpp"
#include "divkit/io.hpp"
#include "divkit/taxonomy.hpp"
#include "divkit/team_sim.hpp"

namespace fs = std::filesystem;
using divkit::io::fmt;
using json = divkit::io::json;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kFormatVersion = 1;  // CSV columns and JSON field names

struct RunContext {
  std::string command;
  std::vector<std::string> args;  // as given, minus --out
  std::vector<std::string> inputs;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
};

std::string default_out_dir() {
  const char* env = std::getenv("DIVKIT_OUT");
  return env != nullptr && *env != '\0' ? env : "divkit-out";
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string absolute(const std::string& p) { return fs::absolute(p).lexically_normal().string(); }

void prepare(const RunContext& ctx) {
  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  divkit::require(!ec, divkit::ErrorKind::validation, "cannot create output directory '" + ctx.out_dir + "': " + ec.message());
}

void write_out(const RunContext& ctx, const std::string& name, const std::string& content) {
  divkit::io::write_file((fs::path(ctx.out_dir) / name).string(), content);
}

void write_manifest(const RunContext& ctx) {
  json inputs = json::array();
  for (const auto& p : ctx.inputs) inputs.push_back(absolute(p));
  json m = {{"tool", "divkit"},
            {"version", kVersion},
            {"format_version", kFormatVersion},
            {"command", ctx.command},
            {"args", ctx.args},
            {"inputs", inputs},
            {"seed", ctx.seed ? json(*ctx.seed) : json(nullptr)},
            {"output_dir", absolute(ctx.out_dir)},
            {"timestamp", utc_timestamp()}};
  write_out(ctx, "manifest.json", m.dump(2) + "\n");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

divkit::TeamConfig resolve_team(const std::string& name, RunContext& ctx) {
  for (const auto& t : divkit::builtin_teams())
    if (t.name == name) return t;
  if (fs::exists(name)) {
    ctx.inputs.push_back(name);
    return divkit::io::load_team(name);
  }
  divkit::fail(divkit::ErrorKind::not_found, "unknown team '" + name + "' (not a built-in name or a readable file)");
}

divkit::TickWindow parse_window(const std::string& s, std::int64_t ticks) {
  if (s.empty()) return {0, ticks};
  auto colon = s.find(':');
  divkit::require(colon != std::string::npos, divkit::ErrorKind::validation, "--window expects BEGIN:END");
  try {
    return {std::stoll(s.substr(0, colon)), std::stoll(s.substr(colon + 1))};
  } catch (const std::exception&) {
    divkit::fail(divkit::ErrorKind::validation, "--window expects integer BEGIN:END");
  }
}

// ---------------------------------------------------------------------------

struct EntropyOpts {
  std::string file, attribute, dimensions, mode = "simple";
  bool normalize = false;
};

void cmd_entropy(const EntropyOpts& o, RunContext& ctx) {
  ctx.inputs.push_back(o.file);
  const divkit::Society society = divkit::io::load_society(o.file);
  json report = {{"mode", o.mode}, {"agents", society.size()}};
  double value = 0.0;
  std::optional<divkit::EntropyCurve> curve;
  std::optional<divkit::Dendrogram> dendrogram;
  if (o.mode == "simple") {
    divkit::require(!o.attribute.empty(), divkit::ErrorKind::validation, "--mode simple needs --attribute");
    value = divkit::simple_social_entropy(society, o.attribute).bits;
    report["attribute"] = o.attribute;
  } else if (o.mode == "usatoday") {
    const auto dims = !o.dimensions.empty() ? split_list(o.dimensions)
                      : o.attribute.empty() ? std::vector<std::string>{}
                                            : std::vector<std::string>{o.attribute};
    divkit::require(!dims.empty(), divkit::ErrorKind::validation, "--mode usatoday needs --dimensions");
    value = divkit::usa_today_index(society, dims).probability;
    report["dimensions"] = dims;
  } else {
    divkit::DistanceMatrix dm = divkit::distance_matrix(society);
    if (o.normalize) dm = divkit::normalized(dm);
    dendrogram = divkit::complete_linkage(dm);
    curve = divkit::entropy_curve(dm, *dendrogram);
    value = divkit::integrate(*curve).value;
    report["normalized"] = o.normalize;
    report["breakpoints"] = curve->breakpoints;
    report["levels"] = curve->values;
  }
  report["value"] = value;
  prepare(ctx);
  write_out(ctx, "report.json", report.dump(2) + "\n");
  if (curve) {
    write_out(ctx, "entropy_curve.csv", divkit::entropy_curve_csv(*curve));
    write_out(ctx, "dendrogram.csv", divkit::dendrogram_csv(*dendrogram));
  }
  write_manifest(ctx);
  std::cout << "mode: " << o.mode << "\nvalue: " << fmt(value) << "\n";
}

// ---------------------------------------------------------------------------

struct BehaviorOpts {
  std::vector<std::string> policies;
  std::string log, summary, window;
  double epsilon = 0.1;
};

void cmd_behavior(const BehaviorOpts& o, RunContext& ctx) {
  std::vector<divkit::PolicyTable> tables;
  if (!o.log.empty()) {
    divkit::require(!o.summary.empty(), divkit::ErrorKind::validation, "--log needs --summary");
    ctx.inputs.push_back(o.log);
    ctx.inputs.push_back(o.summary);
    const divkit::MatchLog log = divkit::io::load_match_log(o.log, o.summary);
    tables = divkit::io::policies_from_log(log, parse_window(o.window, log.ticks));
  }
  std::set<std::string> seen;
  for (std::size_t k = 0; k < o.policies.size(); ++k) {
    ctx.inputs.push_back(o.policies[k]);
    std::istringstream in(divkit::io::read_file(o.policies[k]));
    for (auto& t : divkit::read_policy_csv(in, o.policies[k])) {
      // the same agent id from two files stays two agents
      if (!seen.insert(t.agent.value).second) {
        t.agent = divkit::AgentId(t.agent.value + "#" + std::to_string(k + 1));
        seen.insert(t.agent.value);
      }
      tables.push_back(std::move(t));
    }
  }
  divkit::require(tables.size() >= 2, divkit::ErrorKind::validation,
                  "behavior: need at least two agents, got " + std::to_string(tables.size()));

  std::string csv = "agent_a,agent_b,phi1,phi2,equivalent\n";
  double max_phi2 = 0.0;
  for (const auto& a : tables) {
    for (const auto& b : tables) {
      const auto d = divkit::behavioral_difference(a, b);
      max_phi2 = std::max(max_phi2, d.phi2);
      csv += a.agent.value + ',' + b.agent.value + ',' + fmt(d.phi1) + ',' + fmt(d.phi2) + ',' +
             (divkit::is_equivalent(a, b) ? "true" : "false") + '\n';
    }
  }
  const bool homogeneous = divkit::is_epsilon_homogeneous(tables, o.epsilon);
  json agents = json::array();
  for (const auto& t : tables) agents.push_back(t.agent.value);
  json report = {{"agents", agents}, {"epsilon", o.epsilon}, {"max_phi2", max_phi2}, {"homogeneous", homogeneous}};
  prepare(ctx);
  write_out(ctx, "phi_matrix.csv", csv);
  write_out(ctx, "report.json", report.dump(2) + "\n");
  write_manifest(ctx);
  std::cout << "agents: " << tables.size() << "\nmax_phi2: " << fmt(max_phi2)
            << "\nhomogeneous: " << (homogeneous ? "true" : "false") << "\n";
}

// ---------------------------------------------------------------------------

struct DynamicsOpts {
  std::string scenario;
  bool oracle = false;
};

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void cmd_dynamics(const DynamicsOpts& o, RunContext& ctx) {
  ctx.inputs.push_back(o.scenario);
  const divkit::io::Scenario s = divkit::io::load_scenario(o.scenario);
  const divkit::ClosedForm cf = divkit::solve(s.params, s.forcing, s.init);
  const divkit::Trajectory tr = divkit::sample(cf, s.forcing, s.dt, s.t_end);
  const auto& r = cf.report;
  json report = {{"regime", divkit::to_string(r.regime)},
                 {"damping", divkit::to_string(r.damping)},
                 {"natural_frequency", r.natural_frequency},
                 {"natural_period", divkit::natural_period(s.params)},
                 {"damping_ratio", r.damping_ratio},
                 {"discriminant", r.discriminant},
                 {"quasi_frequency", optional_number(r.quasi_frequency)},
                 {"quasiperiod", optional_number(r.quasiperiod)},
                 {"roots", r.roots ? json({r.roots->first, r.roots->second}) : json(nullptr)},
                 {"growth", cf.unbounded},
                 {"max_abs_displacement", tr.max_abs_displacement(s.t_end)}};
  json drives = json::array();
  for (const auto& term : s.forcing.sinusoids) {
    json d = {{"label", term.label}, {"omega", term.omega}, {"resonant", divkit::at_resonance(s.params, term.omega)}};
    if (!divkit::at_resonance(s.params, term.omega)) {
      d["steady_amplitude"] = divkit::steady_amplitude(s.params, term.amplitude, term.omega);
      d["phase_lag"] = divkit::steady_phase_lag(s.params, term.omega);
    }
    drives.push_back(d);
  }
  report["sinusoids"] = drives;
  std::optional<divkit::Trajectory> oracle;
  if (o.oracle) {
    oracle = divkit::rk4_integrate(s.params, s.forcing, s.init, s.dt, s.t_end);
    report["oracle_max_deviation"] = divkit::max_deviation(tr, *oracle);
  }
  prepare(ctx);
  write_out(ctx, "trajectory.csv", divkit::io::trajectory_csv(tr));
  if (oracle) write_out(ctx, "oracle.csv", divkit::io::trajectory_csv(*oracle));
  write_out(ctx, "report.json", report.dump(2) + "\n");
  write_manifest(ctx);
  std::cout << "regime: " << divkit::to_string(r.regime) << "\nnatural_frequency: " << fmt(r.natural_frequency)
            << "\ngrowth: " << (cf.unbounded ? "true" : "false") << "\n";
  if (oracle) std::cout << "oracle_max_deviation: " << fmt(report["oracle_max_deviation"].get<double>()) << "\n";
}

// ---------------------------------------------------------------------------

struct ExperimentOpts {
  std::string control = "Control";
  std::vector<std::string> challengers;
  int games = 3;
  std::uint64_t seed = 1;
  std::int64_t ticks = 3000;
  int jobs = 1;
};

std::string experiment_csv(const std::vector<divkit::ExperimentRow>& rows) {
  std::string out = "team,positions,positional_entropy,trait_entropy,average_offensiveness,goals_for,goals_against,score_difference\n";
  for (const auto& r : rows)
    out += r.team + ',' + std::to_string(r.positions) + ',' + fmt(r.positional_entropy) + ',' + fmt(r.trait_entropy) + ',' +
           fmt(r.average_offensiveness) + ',' + std::to_string(r.goals_for) + ',' + std::to_string(r.goals_against) + ',' +
           std::to_string(r.score_difference) + '\n';
  return out;
}

void cmd_experiment(const ExperimentOpts& o, RunContext& ctx) {
  ctx.seed = o.seed;
  const divkit::TeamConfig control = resolve_team(o.control, ctx);
  std::vector<divkit::TeamConfig> challengers;
  if (o.challengers.empty()) {
    challengers = divkit::builtin_teams();
  } else {
    for (const auto& name : o.challengers) challengers.push_back(resolve_team(name, ctx));
  }
  const auto rows = divkit::experiment_suite(control, challengers, o.games, o.seed, o.ticks, o.jobs);
  const std::string csv = experiment_csv(rows);
  prepare(ctx);
  write_out(ctx, "experiment.csv", csv);
  write_manifest(ctx);
  std::cout << csv;
}

// ---------------------------------------------------------------------------

struct SimulateOpts {
  std::string team_a = "Kids1", team_b = "Control";
  std::uint64_t seed = 1;
  std::int64_t ticks = 3000;
  bool mirrored = false;
  std::vector<std::string> malfunctions;
  std::int64_t window = 0;
  std::string metric = "positional_hierarchic";
  int side = 0;
};

divkit::Malfunction parse_malfunction(const std::string& s) {
  const auto parts = [&] {
    std::vector<std::string> v;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) v.push_back(p);
    return v;
  }();
  divkit::require(parts.size() >= 2 && parts.size() <= 4, divkit::ErrorKind::validation,
                  "--malfunction expects TICK:AGENT[:SUBSTITUTE[:DELAY]], got '" + s + "'");
  divkit::Malfunction m;
  try {
    m.tick = std::stoll(parts[0]);
    if (parts.size() == 4) m.compensation_delay = std::stoll(parts[3]);
  } catch (const std::exception&) {
    divkit::fail(divkit::ErrorKind::validation, "--malfunction: bad integer in '" + s + "'");
  }
  m.agent = divkit::AgentId(parts[1]);
  if (parts.size() >= 3 && !parts[2].empty()) m.substitute = divkit::AgentId(parts[2]);
  return m;
}

void cmd_simulate(const SimulateOpts& o, RunContext& ctx) {
  ctx.seed = o.seed;
  const divkit::TeamConfig a = resolve_team(o.team_a, ctx);
  const divkit::TeamConfig b = resolve_team(o.team_b, ctx);
  divkit::MatchOptions opts;
  opts.mirrored = o.mirrored;
  for (const auto& m : o.malfunctions) opts.malfunctions.push_back(parse_malfunction(m));
  const divkit::MatchLog log = divkit::run_match(a, b, o.seed, o.ticks, opts);
  std::string series;
  if (o.window > 0) {
    divkit::DiversityMetric metric = o.metric == "positional"   ? divkit::DiversityMetric::positional
                                     : o.metric == "behavioral" ? divkit::DiversityMetric::behavioral_hierarchic
                                                                : divkit::DiversityMetric::positional_hierarchic;
    series = "tick,value\n";
    for (const auto& p : divkit::diversity_timeseries(log, o.window, metric, o.side))
      series += std::to_string(p.tick) + ',' + fmt(p.value) + '\n';
  }
  prepare(ctx);
  write_out(ctx, "match_log.csv", divkit::io::match_log_csv(log));
  write_out(ctx, "match_summary.json", divkit::io::match_summary_json(log).dump(2) + "\n");
  if (!series.empty()) write_out(ctx, "timeseries.csv", series);
  write_manifest(ctx);
  std::cout << "score: " << log.score[0] << "-" << log.score[1] << "\nscore_difference: " << divkit::score_difference(log)
            << "\nrows: " << log.rows.size() << "\n";
}

// ---------------------------------------------------------------------------

void cmd_teams(RunContext& ctx) {
  prepare(ctx);
  for (const auto& t : divkit::builtin_teams()) write_out(ctx, t.name + ".json", divkit::io::team_to_json(t).dump(2) + "\n");
  write_manifest(ctx);
  std::cout << "wrote " << divkit::builtin_teams().size() << " team files to " << ctx.out_dir << "\n";
}

// ---------------------------------------------------------------------------

int run(std::vector<std::string> args);

int cmd_replay(const std::string& manifest_path, const std::string& out) {
  const json m = divkit::io::parse_json(divkit::io::read_file(manifest_path), manifest_path);
  divkit::require(m.is_object() && m.contains("command") && m.contains("args") && m["args"].is_array(),
                  divkit::ErrorKind::validation, manifest_path + ": not a divkit manifest");
  divkit::require(m["command"] != "replay", divkit::ErrorKind::validation, manifest_path + ": cannot replay a replay");
  std::vector<std::string> args;
  for (const auto& a : m["args"]) args.push_back(a.get<std::string>());
  if (!out.empty()) {
    args.push_back("--out");
    args.push_back(out);
  } else if (m.contains("output_dir") && m["output_dir"].is_string()) {
    args.push_back("--out");
    args.push_back(m["output_dir"].get<std::string>());
  }
  return run(args);
}

// args without the program name
std::vector<std::string> strip_out(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out" || args[i] == "-o") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0) continue;
    kept.push_back(args[i]);
  }
  return kept;
}

int run(std::vector<std::string> args) {
  CLI::App app{"divkit: diversity metrics, vibration model and team simulation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunContext ctx;
  ctx.args = strip_out(args);
  ctx.out_dir = default_out_dir();
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("-o,--out", ctx.out_dir, "output directory (default: $DIVKIT_OUT or ./divkit-out)");
  };

  EntropyOpts eo;
  auto* ent = app.add_subcommand("entropy", "social entropy of a society file");
  ent->add_option("society", eo.file, "society JSON")->required();
  ent->add_option("-a,--attribute", eo.attribute, "attribute for simple entropy");
  ent->add_option("-d,--dimensions", eo.dimensions, "comma-separated attributes for the USA Today index");
  ent->add_option("-m,--mode", eo.mode)->check(CLI::IsMember({"simple", "usatoday", "hierarchic"}));
  ent->add_flag("--normalize", eo.normalize, "hierarchic: divide distances by the largest one");
  add_out(ent);

  BehaviorOpts bo;
  auto* beh = app.add_subcommand("behavior", "pairwise behavioral difference");
  beh->add_option("-p,--policies", bo.policies, "policy CSV files");
  beh->add_option("--log", bo.log, "match log CSV");
  beh->add_option("--summary", bo.summary, "match summary JSON");
  beh->add_option("--window", bo.window, "tick window BEGIN:END for --log");
  beh->add_option("-e,--epsilon", bo.epsilon)->check(CLI::PositiveNumber);
  add_out(beh);

  DynamicsOpts dyo;
  auto* dyn = app.add_subcommand("dynamics", "closed-form vibration trajectory");
  dyn->add_option("scenario", dyo.scenario, "scenario JSON")->required();
  dyn->add_flag("--oracle", dyo.oracle, "also integrate with rk4 and report the deviation");
  add_out(dyn);

  ExperimentOpts xo;
  auto* exp = app.add_subcommand("experiment", "challengers vs a control team");
  exp->add_option("--control", xo.control);
  exp->add_option("--challengers", xo.challengers)->delimiter(',');
  exp->add_option("--games", xo.games)->check(CLI::PositiveNumber);
  exp->add_option("--seed", xo.seed);
  exp->add_option("--ticks", xo.ticks)->check(CLI::PositiveNumber);
  exp->add_option("--jobs", xo.jobs)->check(CLI::PositiveNumber);
  add_out(exp);

  SimulateOpts so;
  auto* sim = app.add_subcommand("simulate", "one match with optional malfunctions");
  sim->add_option("--team-a", so.team_a);
  sim->add_option("--team-b", so.team_b);
  sim->add_option("--seed", so.seed);
  sim->add_option("--ticks", so.ticks)->check(CLI::PositiveNumber);
  sim->add_flag("--mirrored", so.mirrored);
  sim->add_option("--malfunction", so.malfunctions, "TICK:AGENT[:SUBSTITUTE[:DELAY]], agent ids like A.p1");
  sim->add_option("--window", so.window, "diversity time-series window in ticks");
  sim->add_option("--metric", so.metric)->check(CLI::IsMember({"positional", "positional_hierarchic", "behavioral"}));
  sim->add_option("--side", so.side)->check(CLI::Range(0, 1));
  add_out(sim);

  auto* teams = app.add_subcommand("teams", "write the built-in team files");
  add_out(teams);

  std::string manifest, replay_out;
  auto* rep = app.add_subcommand("replay", "rerun a command from its manifest");
  rep->add_option("manifest", manifest)->required();
  rep->add_option("-o,--out", replay_out, "output directory (default: the recorded one)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  ctx.command = app.get_subcommands().front()->get_name();
  if (ctx.command == "entropy") cmd_entropy(eo, ctx);
  else if (ctx.command == "behavior") cmd_behavior(bo, ctx);
  else if (ctx.command == "dynamics") cmd_dynamics(dyo, ctx);
  else if (ctx.command == "experiment") cmd_experiment(xo, ctx);
  else if (ctx.command == "simulate") cmd_simulate(so, ctx);
  else if (ctx.command == "teams") cmd_teams(ctx);
  else if (ctx.command == "replay") return cmd_replay(manifest, replay_out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const divkit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == divkit::ErrorKind::numerical ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
