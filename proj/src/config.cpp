#include "netepi/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "netepi/events.hpp"

namespace netepi {

std::string ConfigError::join(const std::vector<std::string>& issues) {
  std::string out = "invalid config:";
  for (const auto& s : issues) {
    out += "\n  - ";
    out += s;
  }
  return out;
}

namespace {

using nlohmann::json;

// Collects schema violations while walking one JSON object.
class Section {
 public:
  Section(const json& obj, std::string name, std::vector<std::string>& issues)
      : obj_(obj), name_(std::move(name)), issues_(issues) {
    if (!obj_.is_object()) {
      issue("must be a JSON object");
      ok_ = false;
    }
  }

  bool ok() const { return ok_; }

  void issue(const std::string& msg) { issues_.push_back(name_ + ": " + msg); }

  const json* require(const char* key) {
    if (!ok_) return nullptr;
    seen_.push_back(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) {
      issue(std::string("missing required key `") + key + "`");
      return nullptr;
    }
    return &*it;
  }

  const json* optional(const char* key) {
    if (!ok_) return nullptr;
    seen_.push_back(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  // Flags keys that no rule above consumed.
  void reject_unknown() {
    if (!ok_) return;
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      bool known = false;
      for (const char* k : seen_)
        if (it.key() == k) {
          known = true;
          break;
        }
      if (!known) issue("unknown key `" + it.key() + "`");
    }
  }

  std::optional<double> number(const char* key, bool required = true) {
    const json* v = required ? require(key) : optional(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      issue(std::string("`") + key + "` must be a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<std::uint64_t> unsigned_int(const char* key, bool required = true) {
    const json* v = required ? require(key) : optional(key);
    if (!v) return std::nullopt;
    // accept any integer representation (in-memory json stores non-negative
    // literals as signed), but reject floats and negatives
    if (!v->is_number_integer() ||
        (!v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
      issue(std::string("`") + key + "` must be a non-negative integer");
      return std::nullopt;
    }
    return v->get<std::uint64_t>();
  }

  std::optional<std::string> string(const char* key, bool required = true) {
    const json* v = required ? require(key) : optional(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      issue(std::string("`") + key + "` must be a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

 private:
  const json& obj_;
  std::string name_;
  std::vector<std::string>& issues_;
  std::vector<const char*> seen_;
  bool ok_ = true;
};

void load_epistemic(const json& j, RunConfig& cfg, std::vector<std::string>& issues) {
  Section s(j, "epistemic", issues);
  if (auto v = s.unsigned_int("trials_n")) cfg.epistemic.trials_n = static_cast<std::int64_t>(*v);
  if (auto v = s.number("upper_threshold")) cfg.epistemic.upper_threshold = *v;
  if (auto v = s.number("lower_threshold")) cfg.epistemic.lower_threshold = *v;
  if (auto v = s.unsigned_int("max_iterations")) cfg.epistemic.max_iterations = *v;
  s.reject_unknown();
  if (!s.ok()) return;
  try {
    cfg.epistemic.validate();
  } catch (const std::invalid_argument& e) {
    s.issue(e.what());
  }
}

void load_cogsnet(const json& j, RunConfig& cfg, std::vector<std::string>& issues) {
  Section s(j, "cogsnet", issues);
  CogsnetParams params;
  bool shape_ok = true;
  if (auto v = s.number("mu"))
    params.mu = *v;
  else
    shape_ok = false;
  if (auto v = s.number("theta"))
    params.theta = *v;
  else
    shape_ok = false;
  if (auto v = s.number("unit_hours"))
    params.unit_hours = *v;
  else
    shape_ok = false;
  if (auto v = s.string("forgetting")) {
    if (*v == "exponential")
      params.forgetting = Forgetting::exponential;
    else if (*v == "power")
      params.forgetting = Forgetting::power;
    else {
      s.issue("`forgetting` must be `exponential` or `power`");
      shape_ok = false;
    }
  } else {
    shape_ok = false;
  }

  const auto lambda = s.number("lambda", false);
  const auto lifetime = s.number("lifetime_days", false);
  if (lambda && lifetime) {
    s.issue("`lambda` and `lifetime_days` are mutually exclusive");
    shape_ok = false;
  } else if (!lambda && !lifetime) {
    s.issue("one of `lambda` or `lifetime_days` is required");
    shape_ok = false;
  }
  s.reject_unknown();
  if (!s.ok() || !shape_ok) return;

  try {
    if (lambda) {
      params.lambda = *lambda;
    } else {
      if (!(*lifetime > 0.0)) throw std::invalid_argument("cogsnet: lifetime_days must be > 0");
      params.lambda =
          lambda_from_lifetime(params.mu, params.theta, *lifetime * 24.0 / params.unit_hours);
    }
    params.validate();
    cfg.cogsnet = params;
  } catch (const std::invalid_argument& e) {
    s.issue(e.what());
  }
}

void load_schedule(const json& j, RunConfig& cfg, std::vector<std::string>& issues) {
  Section s(j, "schedule", issues);
  ScheduleSpec spec;
  bool shape_ok = true;
  if (auto v = s.unsigned_int("start_day"))
    spec.start_day = static_cast<std::int64_t>(*v);
  else
    shape_ok = false;
  if (auto v = s.unsigned_int("end_day"))
    spec.end_day = static_cast<std::int64_t>(*v);
  else
    shape_ok = false;
  if (auto v = s.unsigned_int("stride_days"))
    spec.stride_days = static_cast<std::int64_t>(*v);
  else
    shape_ok = false;
  if (auto v = s.unsigned_int("iterations_per_state"))
    spec.iterations_per_state = *v;
  else
    shape_ok = false;
  s.reject_unknown();
  if (!s.ok() || !shape_ok) return;

  if (spec.end_day <= spec.start_day)
    s.issue("`end_day` must be greater than `start_day` (the end is exclusive)");
  else if (spec.stride_days < 1)
    s.issue("`stride_days` must be >= 1");
  else if (spec.iterations_per_state < 1)
    s.issue("`iterations_per_state` must be >= 1");
  else
    cfg.schedule = spec;
}

void load_synth(const json& j, RunConfig& cfg, std::vector<std::string>& issues) {
  Section s(j, "synth", issues);
  SynthSpec spec;
  bool shape_ok = true;
  if (auto v = s.unsigned_int("n_nodes"))
    spec.n_nodes = *v;
  else
    shape_ok = false;
  if (auto v = s.number("horizon_days"))
    spec.horizon_days = *v;
  else
    shape_ok = false;
  if (auto v = s.number("mean_daily_contacts"))
    spec.mean_daily_contacts = *v;
  else
    shape_ok = false;
  if (auto v = s.number("burstiness"))
    spec.burstiness = *v;
  else
    shape_ok = false;
  if (auto v = s.unsigned_int("seed"))
    spec.seed = *v;
  else
    shape_ok = false;
  s.reject_unknown();
  if (!s.ok() || !shape_ok) return;

  if (spec.n_nodes < 2)
    s.issue("`n_nodes` must be >= 2");
  else if (!(spec.horizon_days >= 1.0))
    s.issue("`horizon_days` must be >= 1");
  else if (!(spec.mean_daily_contacts >= 0.0))
    s.issue("`mean_daily_contacts` must be >= 0");
  else if (!(spec.burstiness > 0.0))
    s.issue("`burstiness` must be > 0");
  else
    cfg.synth = spec;
}

void load_topology_args(const json& j, RunConfig& cfg, std::vector<std::string>& issues) {
  Section s(j, "topology_args", issues);
  switch (cfg.topology) {
    case Topology::complete:
    case Topology::cycle:
    case Topology::wheel:
      if (auto v = s.unsigned_int("n")) cfg.topo.n = *v;
      break;
    case Topology::er:
      if (auto v = s.unsigned_int("n")) cfg.topo.n = *v;
      if (auto v = s.number("p")) cfg.topo.er_p = *v;
      break;
    case Topology::ws:
      if (auto v = s.unsigned_int("n")) cfg.topo.n = *v;
      if (auto v = s.unsigned_int("k")) cfg.topo.ws_k = *v;
      if (auto v = s.number("beta")) cfg.topo.ws_beta = *v;
      break;
    case Topology::ba:
      if (auto v = s.unsigned_int("n")) cfg.topo.n = *v;
      if (auto v = s.unsigned_int("m")) cfg.topo.ba_m = *v;
      break;
    default:
      break;  // temporal / frozen_snapshot take no generator arguments
  }
  s.reject_unknown();
}

}  // namespace

RunConfig load_config(const json& doc) {
  std::vector<std::string> issues;
  RunConfig cfg;

  Section top(doc, "config", issues);
  bool topology_known = false;
  if (auto v = top.string("topology")) {
    if (auto t = topology_from_name(*v)) {
      cfg.topology = *t;
      topology_known = true;
    } else {
      top.issue("unknown topology `" + *v + "`");
    }
  }

  if (const json* v = top.require("payoffs")) {
    if (!v->is_array() || v->empty()) {
      top.issue("`payoffs` must be a non-empty array of numbers");
    } else {
      for (const auto& p : *v) {
        if (!p.is_number()) {
          top.issue("`payoffs` must be a non-empty array of numbers");
          cfg.payoffs.clear();
          break;
        }
        cfg.payoffs.push_back(p.get<double>());
      }
    }
  }
  if (auto v = top.unsigned_int("replications")) cfg.replications = *v;
  if (auto v = top.unsigned_int("base_seed")) cfg.base_seed = *v;

  if (const json* v = top.require("epistemic")) load_epistemic(*v, cfg, issues);
  if (const json* v = top.optional("cogsnet")) load_cogsnet(*v, cfg, issues);
  if (const json* v = top.optional("schedule")) load_schedule(*v, cfg, issues);
  if (const json* v = top.optional("synth")) load_synth(*v, cfg, issues);
  if (const json* v = top.optional("topology_args")) {
    if (topology_known) load_topology_args(*v, cfg, issues);
  }
  if (auto v = top.string("events", false)) cfg.events_path = *v;
  if (auto v = top.string("participants", false)) cfg.participants_path = *v;
  if (auto v = top.string("out_dir", false)) cfg.out_dir = *v;
  top.reject_unknown();

  // Cross-field rules; only meaningful once the shape above held together.
  if (topology_known && issues.empty()) {
    const bool needs_stream =
        cfg.topology == Topology::temporal || cfg.topology == Topology::frozen_snapshot;
    if (needs_stream) {
      if (!cfg.cogsnet) issues.push_back("config: topology `" + std::string(topology_name(cfg.topology)) + "` requires a `cogsnet` block");
      if (!cfg.schedule) issues.push_back("config: topology `" + std::string(topology_name(cfg.topology)) + "` requires a `schedule` block");
      const bool has_events = cfg.events_path.has_value();
      const bool has_synth = cfg.synth.has_value();
      if (has_events == has_synth)
        issues.push_back("config: exactly one of `events` or `synth` is required for temporal topologies");
      if (cfg.participants_path && !has_events)
        issues.push_back("config: `participants` applies only to file-based `events`");
    } else {
      if (cfg.cogsnet) issues.push_back("config: `cogsnet` applies only to temporal topologies");
      if (cfg.schedule) issues.push_back("config: `schedule` applies only to temporal topologies");
      if (cfg.events_path || cfg.participants_path || cfg.synth)
        issues.push_back("config: event-stream inputs apply only to temporal topologies");
    }
    if (issues.empty()) {
      try {
        to_sweep_config(cfg).validate();
      } catch (const std::invalid_argument& e) {
        issues.push_back(std::string("config: ") + e.what());
      }
    }
  }

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
  }
  return load_config(doc);
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["topology"] = std::string(topology_name(cfg.topology));
  switch (cfg.topology) {
    case Topology::complete:
    case Topology::cycle:
    case Topology::wheel:
      j["topology_args"] = {{"n", cfg.topo.n}};
      break;
    case Topology::er:
      j["topology_args"] = {{"n", cfg.topo.n}, {"p", cfg.topo.er_p}};
      break;
    case Topology::ws:
      j["topology_args"] = {{"n", cfg.topo.n}, {"k", cfg.topo.ws_k}, {"beta", cfg.topo.ws_beta}};
      break;
    case Topology::ba:
      j["topology_args"] = {{"n", cfg.topo.n}, {"m", cfg.topo.ba_m}};
      break;
    default:
      break;
  }
  j["payoffs"] = cfg.payoffs;
  j["replications"] = cfg.replications;
  j["base_seed"] = cfg.base_seed;
  j["epistemic"] = {{"trials_n", cfg.epistemic.trials_n},
                    {"upper_threshold", cfg.epistemic.upper_threshold},
                    {"lower_threshold", cfg.epistemic.lower_threshold},
                    {"max_iterations", cfg.epistemic.max_iterations}};
  if (cfg.cogsnet) {
    j["cogsnet"] = {{"mu", cfg.cogsnet->mu},
                    {"theta", cfg.cogsnet->theta},
                    {"lambda", cfg.cogsnet->lambda},
                    {"forgetting", std::string(forgetting_name(cfg.cogsnet->forgetting))},
                    {"unit_hours", cfg.cogsnet->unit_hours}};
  }
  if (cfg.schedule) {
    j["schedule"] = {{"start_day", cfg.schedule->start_day},
                     {"end_day", cfg.schedule->end_day},
                     {"stride_days", cfg.schedule->stride_days},
                     {"iterations_per_state", cfg.schedule->iterations_per_state}};
  }
  if (cfg.events_path) j["events"] = *cfg.events_path;
  if (cfg.participants_path) j["participants"] = *cfg.participants_path;
  if (cfg.synth) {
    j["synth"] = {{"n_nodes", cfg.synth->n_nodes},
                  {"horizon_days", cfg.synth->horizon_days},
                  {"mean_daily_contacts", cfg.synth->mean_daily_contacts},
                  {"burstiness", cfg.synth->burstiness},
                  {"seed", cfg.synth->seed}};
  }
  if (cfg.out_dir) j["out_dir"] = *cfg.out_dir;
  return j;
}

SweepConfig to_sweep_config(const RunConfig& cfg) {
  SweepConfig sw;
  sw.topology = cfg.topology;
  sw.topo = cfg.topo;
  sw.payoffs = cfg.payoffs;
  sw.replications = cfg.replications;
  sw.base_seed = cfg.base_seed;
  sw.epistemic = cfg.epistemic;
  sw.cogsnet = cfg.cogsnet;
  if (cfg.schedule) {
    const double unit = cfg.cogsnet ? cfg.cogsnet->unit_hours : 1.0;
    sw.schedule = SnapshotSchedule::daily(cfg.schedule->start_day, cfg.schedule->end_day,
                                          cfg.schedule->stride_days,
                                          cfg.schedule->iterations_per_state, unit);
  }
  return sw;
}

ResolvedInputs resolve_inputs(const RunConfig& cfg) {
  ResolvedInputs out;
  if (cfg.topology != Topology::temporal && cfg.topology != Topology::frozen_snapshot) return out;

  std::vector<EventRecord> events;
  std::optional<ParticipantSet> participants;
  if (cfg.synth) {
    events = synth_events(cfg.synth->n_nodes, cfg.synth->horizon_days,
                          cfg.synth->mean_daily_contacts, cfg.synth->burstiness, cfg.synth->seed);
    participants = ParticipantSet::range(cfg.synth->n_nodes);
    out.events_read = events.size();
    out.events_cleaned = events.size();  // synthetic streams are clean by construction
  } else {
    std::ifstream in(*cfg.events_path);
    if (!in) throw IoError("cannot open events file: " + *cfg.events_path);
    events = parse_events(in);
    out.events_read = events.size();
    if (cfg.participants_path) {
      std::ifstream pin(*cfg.participants_path);
      if (!pin) throw IoError("cannot open participants file: " + *cfg.participants_path);
      participants = read_participants(pin);
    }
    events = clean_events(std::move(events), participants ? &*participants : nullptr);
    out.events_cleaned = events.size();
  }

  out.traces = build_traces(events, *cfg.cogsnet, participants ? &*participants : nullptr);
  return out;
}

}  // namespace netepi
