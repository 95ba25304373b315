#include "commands.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <csignal>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "aversion/control_server.hpp"
#include "aversion/error.hpp"
#include "aversion/event_log.hpp"
#include "aversion/live_session.hpp"
#include "aversion/scenario.hpp"

namespace aversion::cli {

namespace {

constexpr std::uint64_t kDefaultSyntheticFrames = 200;

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

/// Flags shared by run, check and serve.
struct ScenarioFlags {
  std::string config;
  std::string relationship;
  std::string dominance;
  std::string source;
  std::optional<std::uint64_t> frames;
  std::optional<std::uint32_t> period_ms;
  std::optional<std::uint32_t> refractory;
  std::optional<double> idle_epsilon;
  std::string profiles;
  std::string patterns;
  std::vector<std::string> overrides;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f, bool with_source) {
  cmd->add_option("--config", f.config,
                  "Scenario config file (JSON); defaults to $" + std::string(engine::kConfigEnvVar));
  cmd->add_option("--relationship,-r", f.relationship, "stranger | acquaintance | friend | partner");
  cmd->add_option("--dominance,-d", f.dominance, "low | medium | high (overrides the profile)");
  if (with_source) {
    cmd->add_option("--source,-s", f.source,
                    "const:CM | ramp:FROM:TO | sin:CENTER:AMPL:PERIOD_FRAMES | trace:FILE | serial:DEV");
    cmd->add_option("--frames,-n", f.frames, "Number of frames to simulate");
  }
  cmd->add_option("--period-ms", f.period_ms, "Frame period in milliseconds");
  cmd->add_option("--refractory", f.refractory, "Frames of suspended accumulation after avoidance");
  cmd->add_option("--idle-epsilon", f.idle_epsilon, "Level below which decay snaps to idle");
  cmd->add_option("--profiles", f.profiles, "Relationship profile file (JSON)");
  cmd->add_option("--patterns", f.patterns, "Motion pattern definition file (JSON)");
  cmd->add_option("--set", f.overrides, "Profile override, e.g. friend.e_th=0.8 (repeatable)");
}

engine::ScenarioConfig build_config(const ScenarioFlags& f) {
  engine::ScenarioConfig cfg;
  if (!f.config.empty()) {
    cfg = engine::load_scenario_config(f.config);
  } else if (const auto env = engine::config_path_from_env()) {
    cfg = engine::load_scenario_config(*env);
  }

  if (!f.profiles.empty()) cfg.profiles = proxemics::load_profiles(f.profiles);
  if (!f.patterns.empty()) {
    cfg.patterns = std::make_shared<const behavior::PatternLibrary>(behavior::PatternLibrary::load(f.patterns));
  }
  if (!f.relationship.empty()) {
    const auto r = parse_relationship(f.relationship);
    if (!r) throw ConfigError("unknown relationship '" + f.relationship + "'");
    cfg.relationship = *r;
  }
  if (!f.dominance.empty()) {
    const auto d = parse_dominance(f.dominance);
    if (!d) throw ConfigError("unknown dominance '" + f.dominance + "'");
    cfg.dominance = *d;
  }
  if (!f.source.empty()) cfg.source = sensor::parse_source_spec(f.source);
  if (f.frames) cfg.max_frames = *f.frames;
  if (f.period_ms) cfg.frame_period_ms = *f.period_ms;
  if (f.refractory) cfg.policy.refractory_frames = *f.refractory;
  if (f.idle_epsilon) cfg.policy.idle_epsilon = *f.idle_epsilon;
  for (const std::string& o : f.overrides) engine::apply_override(cfg, engine::parse_profile_override(o));

  if (std::holds_alternative<sensor::SyntheticParams>(cfg.source) && !cfg.max_frames) {
    cfg.max_frames = kDefaultSyntheticFrames;
  }
  return cfg;
}

std::string frame_or_none(const std::optional<std::uint64_t>& frame) {
  return frame ? std::to_string(*frame) : std::string("none");
}

// ---------------------------------------------------------------------------

int cmd_run(const ScenarioFlags& flags, const std::string& out_dir, std::ostream& out) {
  const engine::ScenarioConfig cfg = build_config(flags);
  const engine::RunResult result = engine::run(cfg);
  engine::write_run_outputs(out_dir, result.events, cfg);

  const engine::RunSummary summary = engine::summarize(result.events);
  const auto profile = cfg.resolved_profile();
  out << "relationship=" << to_string(profile.label) << " dominance=" << to_string(profile.dominance)
      << " source=" << sensor::to_string(cfg.source) << '\n'
      << "frames=" << summary.frames << '\n'
      << "first_crossing=" << frame_or_none(summary.first_crossing) << '\n'
      << "max_s=" << std::setprecision(6) << summary.max_level << '\n'
      << "avoidance_count=" << summary.avoidance_count << '\n'
      << "output=" << out_dir << '\n';
  return 0;
}

int cmd_check(const ScenarioFlags& flags, std::uint64_t frames, std::ostream& out) {
  const engine::ScenarioConfig cfg = build_config(flags);
  const auto results = run_golden_checks(cfg, frames);

  std::size_t passed = 0;
  out << std::left << std::setw(22) << "scenario" << std::setw(10) << "n_t" << std::setw(10)
      << "expected" << std::setw(10) << "observed" << std::setw(10) << "max_s" << "result\n";
  for (const GoldenResult& r : results) {
    passed += r.pass ? 1 : 0;
    std::ostringstream n;
    std::ostringstream s;
    n << std::fixed << std::setprecision(4) << r.momentary;
    s << std::fixed << std::setprecision(4) << r.max_level;
    out << std::left << std::setw(22) << r.scenario.name << std::setw(10) << n.str()
        << std::setw(10) << frame_or_none(r.scenario.expected_crossing) << std::setw(10)
        << frame_or_none(r.observed_crossing) << std::setw(10) << s.str()
        << (r.pass ? "PASS" : "FAIL") << '\n';
  }
  out << passed << '/' << results.size() << " passed\n";
  return passed == results.size() ? 0 : 1;
}

// "30:0.25" -> Anchor; "20:0.7:2.0:11" -> CrossingConstraint
std::vector<double> split_numbers(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> values;
  std::string_view rest = text;
  while (true) {
    const auto sep = rest.find(':');
    const std::string_view part = rest.substr(0, sep);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
      throw ConfigError(std::string(what) + " '" + text + "': not a number list");
    }
    values.push_back(v);
    if (sep == std::string_view::npos) break;
    rest.remove_prefix(sep + 1);
  }
  if (values.size() != expected) {
    throw ConfigError(std::string(what) + " '" + text + "': expected " + std::to_string(expected) +
                      " colon-separated numbers");
  }
  return values;
}

int cmd_fit(const std::vector<std::string>& anchor_text, const std::vector<std::string>& constraint_text,
            std::ostream& out) {
  std::vector<proxemics::Anchor> anchors;
  for (const auto& a : anchor_text) {
    const auto v = split_numbers(a, 2, "anchor");
    anchors.push_back({v[0], v[1]});
  }
  std::vector<proxemics::CrossingConstraint> constraints;
  for (const auto& c : constraint_text) {
    const auto v = split_numbers(c, 4, "constraint");
    if (v[3] != static_cast<double>(static_cast<int>(v[3]))) {
      throw ConfigError("constraint '" + c + "': frame must be an integer");
    }
    constraints.push_back({v[0], v[1], v[2], static_cast<int>(v[3])});
  }

  const proxemics::DislikeCurve curve = proxemics::fit_curve(anchors, constraints);
  out << std::setprecision(12) << "a = " << curve.amplitude() << '\n'
      << "b = " << curve.rate_per_cm() << " /cm\n";
  out << std::setprecision(6);
  for (const auto& a : anchors) {
    out << "anchor d=" << a.distance_cm << " cm  target n=" << a.dislike
        << "  fitted n=" << curve(a.distance_cm) << '\n';
  }
  for (const auto& c : constraints) {
    const double n = curve(c.distance_cm);
    out << "constraint d=" << c.distance_cm << " cm c=" << c.decay << " e_th=" << c.threshold
        << "  n=" << n << "  first crossing t="
        << frame_or_none(affect::first_crossing_frame(n, c.decay, c.threshold))
        << " (required " << c.frame << ")\n";
  }
  return 0;
}

int cmd_serve(const ScenarioFlags& flags, const std::string& bind, std::uint16_t port,
              std::optional<std::uint64_t> ticks, const std::string& serial_path, std::ostream& out) {
  engine::ScenarioConfig cfg = build_config(flags);
  cfg.validate();
  engine::LiveSession::Options options;
  options.max_ticks = ticks;
  engine::LiveSession session(cfg, options);
  if (!serial_path.empty()) session.attach_serial(std::make_shared<sensor::SerialPump>(serial_path));

  engine::ControlServer server(session, bind, port);
  const auto profile = session.active_profile();
  out << "listening on " << server.address() << ':' << server.port() << '\n'
      << "profile " << to_string(profile.label) << " dominance " << to_string(profile.dominance)
      << " e_th " << profile.tolerance << " e_max " << profile.max_admissible << '\n'
      << std::flush;

  g_interrupted = false;
  auto previous_int = std::signal(SIGINT, on_signal);
  auto previous_term = std::signal(SIGTERM, on_signal);
  server.start();
  session.start();
  while (!g_interrupted && session.running()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  session.stop();
  server.stop();
  std::signal(SIGINT, previous_int);
  std::signal(SIGTERM, previous_term);
  out << "stopped after " << session.frames() << " frames\n";
  return 0;
}

}  // namespace

const std::array<GoldenCase, 5>& golden_cases() {
  static const std::array<GoldenCase, 5> cases = {{
      {"friend @ 30 cm", Relationship::Friend, 30.0, 7},
      {"friend @ 10 cm", Relationship::Friend, 10.0, 3},
      {"acquaintance @ 30 cm", Relationship::Acquaintance, 30.0, std::nullopt},
      {"acquaintance @ 20 cm", Relationship::Acquaintance, 20.0, 11},
      {"acquaintance @ 10 cm", Relationship::Acquaintance, 10.0, 7},
  }};
  return cases;
}

std::vector<GoldenResult> run_golden_checks(const engine::ScenarioConfig& base, std::uint64_t frames) {
  std::vector<GoldenResult> results;
  for (const GoldenCase& c : golden_cases()) {
    engine::ScenarioConfig cfg = base;
    cfg.relationship = c.relationship;
    cfg.source = sensor::SyntheticParams{sensor::Constant{c.distance_cm}};
    cfg.max_frames = frames;
    const auto run = engine::run(cfg);
    const auto summary = engine::summarize(run.events);

    GoldenResult r;
    r.scenario = c;
    r.momentary = run.events.empty() ? 0.0 : run.events.front().momentary;
    r.observed_crossing = summary.first_crossing;
    r.max_level = summary.max_level;
    r.pass = r.observed_crossing == c.expected_crossing;
    results.push_back(r);
  }
  return results;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate a robot's accumulated dislike under human approach"};
  app.name(args.empty() ? "aversion" : args.front());
  app.require_subcommand(1);

  ScenarioFlags run_flags;
  std::string out_dir = "out";
  auto* run = app.add_subcommand("run", "Run a scenario and write events.ndjson, timeline.csv, summary.json");
  add_scenario_flags(run, run_flags, true);
  run->add_option("--out,-o", out_dir, "Output directory")->capture_default_str();

  ScenarioFlags check_flags;
  std::uint64_t check_frames = 200;
  auto* check = app.add_subcommand("check", "Verify the five golden worked examples (exit 0 iff all pass)");
  add_scenario_flags(check, check_flags, false);
  check->add_option("--frames,-n", check_frames, "Frames per scenario")->capture_default_str();

  std::vector<std::string> anchors;
  std::vector<std::string> constraints;
  auto* fit = app.add_subcommand("fit", "Fit n(d) = a*exp(b*d) to anchors and crossing constraints");
  fit->add_option("--anchor,-a", anchors, "DISTANCE_CM:DISLIKE (repeatable)");
  fit->add_option("--constraint,-c", constraints, "DISTANCE_CM:DECAY:E_TH:FRAME (repeatable)");

  ScenarioFlags serve_flags;
  std::string bind = "127.0.0.1";
  std::uint16_t port = engine::kDefaultControlPort;
  std::optional<std::uint64_t> ticks;
  std::string serial_path;
  auto* serve = app.add_subcommand("serve", "Start a live session on the control/streaming socket");
  add_scenario_flags(serve, serve_flags, false);
  serve->add_option("--bind", bind, "IPv4 address to listen on")->capture_default_str();
  serve->add_option("--port,-p", port, "TCP port (0 picks a free port)")->capture_default_str();
  serve->add_option("--ticks", ticks, "Stop after this many ticks");
  serve->add_option("--serial", serial_path, "Read `R <cm>` lines from this device or file");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*run) return cmd_run(run_flags, out_dir, out);
    if (*check) return cmd_check(check_flags, check_frames, out);
    if (*fit) return cmd_fit(anchors, constraints, out);
    if (*serve) return cmd_serve(serve_flags, bind, port, ticks, serial_path, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace aversion::cli
