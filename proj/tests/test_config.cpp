#include <doctest.h>

#include <json.hpp>

#include "netepi/config.hpp"
#include "fixtures.hpp"

using namespace netepi;
using namespace netepi::testing;
using nlohmann::json;

namespace {

json static_config() {
  return json::parse(R"({
    "topology": "complete",
    "topology_args": {"n": 10},
    "payoffs": [0.55],
    "replications": 4,
    "base_seed": 7,
    "epistemic": {"trials_n": 10, "upper_threshold": 0.99,
                  "lower_threshold": 0.5, "max_iterations": 200}
  })");
}

json temporal_config() {
  return json::parse(R"({
    "topology": "temporal",
    "payoffs": [0.55],
    "replications": 2,
    "base_seed": 3,
    "epistemic": {"trials_n": 10, "upper_threshold": 0.99,
                  "lower_threshold": 0.5, "max_iterations": 6},
    "cogsnet": {"mu": 0.3, "theta": 0.2, "lifetime_days": 3,
                "forgetting": "exponential", "unit_hours": 1},
    "schedule": {"start_day": 1, "end_day": 7, "stride_days": 1,
                 "iterations_per_state": 1},
    "synth": {"n_nodes": 20, "horizon_days": 8, "mean_daily_contacts": 2,
              "burstiness": 1, "seed": 11}
  })");
}

std::vector<std::string> issues_of(const json& doc) {
  try {
    load_config(doc);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
  for (const auto& s : issues)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("a valid static config loads") {
  const RunConfig cfg = load_config(static_config());
  CHECK(cfg.topology == Topology::complete);
  CHECK(cfg.topo.n == 10);
  CHECK(cfg.payoffs == std::vector<double>{0.55});
  CHECK(cfg.replications == 4);
  CHECK(cfg.epistemic.max_iterations == 200);
  CHECK_FALSE(cfg.cogsnet.has_value());
  CHECK_FALSE(cfg.out_dir.has_value());
}

TEST_CASE("a valid temporal config loads and resolves the decay rate") {
  const RunConfig cfg = load_config(temporal_config());
  CHECK(cfg.topology == Topology::temporal);
  REQUIRE(cfg.cogsnet.has_value());
  CHECK(std::abs(cfg.cogsnet->lambda - 0.00563145983483561) < 1e-12);
  REQUIRE(cfg.schedule.has_value());
  CHECK(cfg.schedule->end_day == 7);
  REQUIRE(cfg.synth.has_value());
  CHECK(cfg.synth->n_nodes == 20);
}

TEST_CASE("unknown keys are rejected everywhere") {
  json doc = static_config();
  doc["surprise"] = 1;
  CHECK(mentions(issues_of(doc), "unknown key `surprise`"));

  doc = static_config();
  doc["epistemic"]["typo"] = 2;
  CHECK(mentions(issues_of(doc), "epistemic: unknown key `typo`"));

  doc = temporal_config();
  doc["cogsnet"]["mu2"] = 0.1;
  CHECK(mentions(issues_of(doc), "cogsnet: unknown key `mu2`"));
}

TEST_CASE("all violations are reported in one pass") {
  json doc = static_config();
  doc.erase("payoffs");
  doc["epistemic"].erase("trials_n");
  doc["extra"] = true;
  const auto issues = issues_of(doc);
  CHECK(issues.size() >= 3);
  CHECK(mentions(issues, "missing required key `payoffs`"));
  CHECK(mentions(issues, "missing required key `trials_n`"));
  CHECK(mentions(issues, "unknown key `extra`"));
}

TEST_CASE("scientific parameters have no defaults") {
  for (const char* key : {"topology", "payoffs", "replications", "base_seed", "epistemic"}) {
    json doc = static_config();
    doc.erase(key);
    CHECK(mentions(issues_of(doc), std::string("`") + key + "`"));
  }
  for (const char* key : {"trials_n", "upper_threshold", "lower_threshold", "max_iterations"}) {
    json doc = static_config();
    doc["epistemic"].erase(key);
    CHECK(mentions(issues_of(doc), std::string("`") + key + "`"));
  }
}

TEST_CASE("lambda and lifetime_days are mutually exclusive but one is required") {
  json doc = temporal_config();
  doc["cogsnet"]["lambda"] = 0.005;  // both present
  CHECK(mentions(issues_of(doc), "mutually exclusive"));

  doc = temporal_config();
  doc["cogsnet"].erase("lifetime_days");  // neither present
  CHECK(mentions(issues_of(doc), "one of `lambda` or `lifetime_days` is required"));

  doc = temporal_config();
  doc["cogsnet"].erase("lifetime_days");
  doc["cogsnet"]["lambda"] = 0.00563145983483561;
  const RunConfig cfg = load_config(doc);
  CHECK(cfg.cogsnet->lambda == 0.00563145983483561);
}

TEST_CASE("temporal topologies demand their stream inputs") {
  json doc = temporal_config();
  doc.erase("cogsnet");
  CHECK(mentions(issues_of(doc), "requires a `cogsnet` block"));

  doc = temporal_config();
  doc.erase("schedule");
  CHECK(mentions(issues_of(doc), "requires a `schedule` block"));

  doc = temporal_config();
  doc.erase("synth");
  CHECK(mentions(issues_of(doc), "exactly one of `events` or `synth`"));

  doc = temporal_config();
  doc["events"] = "/tmp/some.csv";  // both synth and events
  CHECK(mentions(issues_of(doc), "exactly one of `events` or `synth`"));

  doc = temporal_config();
  doc.erase("synth");
  doc["events"] = "/tmp/some.csv";
  doc["participants"] = "/tmp/participants.csv";
  CHECK(issues_of(doc).empty());
}

TEST_CASE("static topologies reject stream-only blocks") {
  json doc = static_config();
  doc["cogsnet"] = temporal_config()["cogsnet"];
  CHECK(mentions(issues_of(doc), "`cogsnet` applies only to temporal topologies"));

  doc = static_config();
  doc["schedule"] = temporal_config()["schedule"];
  CHECK(mentions(issues_of(doc), "`schedule` applies only to temporal topologies"));

  doc = static_config();
  doc["synth"] = temporal_config()["synth"];
  CHECK(mentions(issues_of(doc), "event-stream inputs apply only to temporal topologies"));
}

TEST_CASE("semantic violations surface through the sweep validator") {
  json doc = static_config();
  doc["payoffs"] = {0.4};
  CHECK(mentions(issues_of(doc), "payoff"));

  doc = temporal_config();
  doc["epistemic"]["max_iterations"] = 5;  // schedule yields 6
  CHECK(mentions(issues_of(doc), "max_iterations"));

  doc = static_config();
  doc["replications"] = 0;
  CHECK(mentions(issues_of(doc), "replications"));
}

TEST_CASE("topology argument schemas") {
  json doc = static_config();
  doc["topology"] = "er";
  doc["topology_args"] = {{"n", 148}, {"p", 0.0144}};
  CHECK(issues_of(doc).empty());
  CHECK(load_config(doc).topo.er_p == 0.0144);

  doc["topology_args"] = {{"n", 148}, {"p", 0.0144}, {"k", 2}};  // k not an er knob
  CHECK(mentions(issues_of(doc), "topology_args: unknown key `k`"));

  doc = static_config();
  doc["topology"] = "ws";
  doc["topology_args"] = {{"n", 148}, {"k", 2}, {"beta", 0.5}};
  CHECK(issues_of(doc).empty());

  doc = static_config();
  doc["topology"] = "ba";
  doc["topology_args"] = {{"n", 148}, {"m", 2}};
  CHECK(issues_of(doc).empty());

  doc = static_config();
  doc["topology"] = "circle";  // alias
  CHECK(load_config(doc).topology == Topology::wheel);

  doc = static_config();
  doc["topology"] = "moebius";
  CHECK(mentions(issues_of(doc), "unknown topology `moebius`"));
}

TEST_CASE("config round-trips through its JSON echo") {
  const RunConfig cfg = load_config(temporal_config());
  const auto echoed = to_json(cfg);
  // the echo resolves lifetime_days to an explicit lambda
  CHECK(echoed["cogsnet"].contains("lambda"));
  CHECK_FALSE(echoed["cogsnet"].contains("lifetime_days"));
  const RunConfig back = load_config(echoed);
  CHECK(back.topology == cfg.topology);
  CHECK(back.payoffs == cfg.payoffs);
  CHECK(back.cogsnet->lambda == cfg.cogsnet->lambda);
  CHECK(back.schedule->end_day == cfg.schedule->end_day);
  CHECK(back.synth->seed == cfg.synth->seed);
  CHECK(to_json(back) == echoed);
}

TEST_CASE("to_sweep_config expands the schedule in time-units") {
  const RunConfig cfg = load_config(temporal_config());
  const SweepConfig sw = to_sweep_config(cfg);
  REQUIRE(sw.schedule.has_value());
  CHECK(sw.schedule->times.size() == 6);
  CHECK(sw.schedule->times.front() == 24.0);  // day 1 in hours
  CHECK(sw.budget() == 6);
  CHECK_NOTHROW(sw.validate());
}

TEST_CASE("load_config_file distinguishes I/O failures from bad content") {
  CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), IoError);

  TempDir dir;
  write_text(dir.path() / "bad.json", "{ not json");
  CHECK_THROWS_AS(load_config_file(dir.str("bad.json")), ConfigError);

  write_text(dir.path() / "good.json", static_config().dump());
  CHECK(load_config_file(dir.str("good.json")).topo.n == 10);
}

TEST_CASE("resolve_inputs synthesizes the stream and builds traces") {
  json doc = temporal_config();
  const RunConfig cfg = load_config(doc);
  const ResolvedInputs in = resolve_inputs(cfg);
  REQUIRE(in.traces.has_value());
  CHECK(in.events_read > 0);
  CHECK(in.events_cleaned == in.events_read);
  CHECK(in.traces->nodes().size() == 20);

  // static topologies resolve to nothing
  const ResolvedInputs none = resolve_inputs(load_config(static_config()));
  CHECK_FALSE(none.traces.has_value());
}

TEST_CASE("resolve_inputs reads and cleans event files") {
  TempDir dir;
  std::ostringstream events;
  write_events(clean_events(walkthrough_events()), events);
  write_text(dir.path() / "events.csv", events.str());
  std::ostringstream parts;
  write_participants(ParticipantSet::range(4), parts);
  write_text(dir.path() / "participants.csv", parts.str());

  json doc = temporal_config();
  doc.erase("synth");
  doc["events"] = dir.str("events.csv");
  doc["participants"] = dir.str("participants.csv");
  doc["schedule"] = {{"start_day", 0}, {"end_day", 6}, {"stride_days", 1},
                     {"iterations_per_state", 1}};
  const RunConfig cfg = load_config(doc);
  const ResolvedInputs in = resolve_inputs(cfg);
  REQUIRE(in.traces.has_value());
  CHECK(in.events_read == 7);
  CHECK(in.events_cleaned == 7);
  CHECK(in.traces->nodes().size() == 4);

  doc["events"] = dir.str("missing.csv");
  CHECK_THROWS_AS(resolve_inputs(load_config(doc)), IoError);
}
