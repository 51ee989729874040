// netepi — social-learning simulation on temporal and static networks.
//
// Subcommands: synth, ingest, snapshot, simulate, sweep, bench.
// Exit codes: 0 success, 1 simulation error, 2 I/O error, 3 config error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "netepi/config.hpp"
#include "netepi/cogsnet.hpp"
#include "netepi/events.hpp"
#include "netepi/format.hpp"
#include "netepi/sim.hpp"
#include "netepi/sweep.hpp"

namespace fs = std::filesystem;
using namespace netepi;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSim = 1;
constexpr int kExitIo = 2;
constexpr int kExitConfig = 3;

struct CliError {
  int code;
  std::string message;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{kExitIo, "cannot open " + path};
  return in;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{kExitIo, "cannot write " + path.string()};
  out << contents;
  if (!out) throw CliError{kExitIo, "write failed: " + path.string()};
}

// Refuses to reuse a non-empty output directory unless forced.
void prepare_out_dir(const fs::path& dir, bool force) {
  std::error_code ec;
  if (fs::exists(dir, ec)) {
    if (!fs::is_directory(dir, ec)) throw CliError{kExitIo, dir.string() + " is not a directory"};
    if (!fs::is_empty(dir, ec) && !force)
      throw CliError{kExitIo, "output directory " + dir.string() +
                                  " is not empty; pass --force to write anyway"};
  } else if (!fs::create_directories(dir, ec)) {
    throw CliError{kExitIo, "cannot create output directory " + dir.string()};
  }
}

struct CogsnetFlags {
  double mu = 0.0;
  double theta = 0.0;
  std::optional<double> lambda;
  std::optional<double> lifetime_days;
  std::string forgetting = "exponential";
  double unit_hours = 1.0;

  CogsnetParams resolve() const {
    CogsnetParams p;
    p.mu = mu;
    p.theta = theta;
    p.unit_hours = unit_hours;
    if (forgetting == "exponential")
      p.forgetting = Forgetting::exponential;
    else if (forgetting == "power")
      p.forgetting = Forgetting::power;
    else
      throw CliError{kExitConfig, "--forgetting must be exponential or power"};
    if (lambda.has_value() == lifetime_days.has_value())
      throw CliError{kExitConfig, "exactly one of --lambda / --lifetime-days is required"};
    try {
      p.lambda = lambda ? *lambda
                        : lambda_from_lifetime(mu, theta, *lifetime_days * 24.0 / unit_hours);
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw CliError{kExitConfig, e.what()};
    }
    return p;
  }
};

void add_cogsnet_flags(CLI::App* cmd, CogsnetFlags& flags) {
  cmd->add_option("--mu", flags.mu, "peak trace weight")->required();
  cmd->add_option("--theta", flags.theta, "trace cut-off threshold")->required();
  cmd->add_option("--lambda", flags.lambda, "decay rate per time-unit");
  cmd->add_option("--lifetime-days", flags.lifetime_days, "trace lifetime in days");
  cmd->add_option("--forgetting", flags.forgetting, "exponential or power");
  cmd->add_option("--unit-hours", flags.unit_hours, "hours per time-unit");
}

// Loads the config, applies CLI overrides, and resolves the output directory.
RunConfig load_run_config(const std::string& config_path, const std::string& out_override,
                          std::optional<std::uint64_t> seed_override) {
  RunConfig cfg;
  try {
    cfg = load_config_file(config_path);
  } catch (const ConfigError& e) {
    throw CliError{kExitConfig, e.what()};
  } catch (const IoError& e) {
    throw CliError{kExitIo, e.what()};
  }
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (seed_override) cfg.base_seed = *seed_override;
  if (!cfg.out_dir)
    throw CliError{kExitConfig, "no output directory: set `out_dir` in the config or pass --out"};
  return cfg;
}

ResolvedInputs resolve_or_die(const RunConfig& cfg) {
  try {
    return resolve_inputs(cfg);
  } catch (const IoError& e) {
    throw CliError{kExitIo, e.what()};
  } catch (const ParseError& e) {
    throw CliError{kExitIo, e.what()};
  }
}

void write_manifest(const RunConfig& cfg, const fs::path& dir) {
  nlohmann::ordered_json j;
  j["config"] = to_json(cfg);
  write_file(dir / "manifest.json", j.dump(2) + "\n");
}

int cmd_synth(std::size_t nodes, double days, double rate, double burstiness, std::uint64_t seed,
              const std::string& out, const std::string& participants_out) {
  std::vector<EventRecord> events;
  try {
    events = synth_events(nodes, days, rate, burstiness, seed);
  } catch (const std::invalid_argument& e) {
    throw CliError{kExitConfig, e.what()};
  }
  std::ostringstream buf;
  write_events(events, buf);
  if (out.empty() || out == "-")
    std::cout << buf.str();
  else
    write_file(out, buf.str());
  if (!participants_out.empty()) {
    std::ostringstream pbuf;
    write_participants(ParticipantSet::range(nodes), pbuf);
    write_file(participants_out, pbuf.str());
  }
  return kExitOk;
}

int cmd_ingest(const std::string& events_path, const std::string& participants_path,
               const std::string& out) {
  auto in = open_input(events_path);
  std::vector<EventRecord> events;
  try {
    events = parse_events(in);
  } catch (const ParseError& e) {
    throw CliError{kExitIo, events_path + ": " + e.what()};
  }
  const std::size_t before = events.size();

  std::optional<ParticipantSet> participants;
  if (!participants_path.empty()) {
    auto pin = open_input(participants_path);
    try {
      participants = read_participants(pin);
    } catch (const std::exception& e) {
      throw CliError{kExitIo, participants_path + ": " + e.what()};
    }
  }
  events = clean_events(std::move(events), participants ? &*participants : nullptr);
  std::cout << "events_in=" << before << " events_out=" << events.size() << "\n";

  std::ostringstream buf;
  write_events(events, buf);
  if (out.empty() || out == "-")
    std::cout << buf.str();
  else
    write_file(out, buf.str());
  return kExitOk;
}

int cmd_snapshot(const std::string& events_path, const std::string& participants_path,
                 const CogsnetFlags& flags, std::optional<double> t_units,
                 std::optional<double> day, const std::string& out) {
  const CogsnetParams params = flags.resolve();
  if (t_units.has_value() == day.has_value())
    throw CliError{kExitConfig, "exactly one of --t / --day is required"};
  const double t = t_units ? *t_units : *day * 24.0 / params.unit_hours;
  if (t < 0) throw CliError{kExitConfig, "snapshot time must be >= 0"};

  auto in = open_input(events_path);
  std::vector<EventRecord> events;
  try {
    events = parse_events(in);
  } catch (const ParseError& e) {
    throw CliError{kExitIo, events_path + ": " + e.what()};
  }
  std::optional<ParticipantSet> participants;
  if (!participants_path.empty()) {
    auto pin = open_input(participants_path);
    participants = read_participants(pin);
  }
  events = clean_events(std::move(events), participants ? &*participants : nullptr);
  const TraceSet traces = build_traces(events, params, participants ? &*participants : nullptr);
  const Graph g = snapshot_at(traces, t, params);

  std::ostringstream buf;
  buf << "# mu=" << format_double(params.mu) << " theta=" << format_double(params.theta)
      << " lambda=" << format_double(params.lambda)
      << " forgetting=" << forgetting_name(params.forgetting)
      << " unit_hours=" << format_double(params.unit_hours) << "\n";
  write_snapshot_csv(g, t, buf);
  if (out.empty() || out == "-")
    std::cout << buf.str();
  else
    write_file(out, buf.str());
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out_override,
                 std::optional<std::uint64_t> seed_override, bool force) {
  const RunConfig cfg = load_run_config(config_path, out_override, seed_override);
  if (cfg.payoffs.size() != 1 || cfg.replications != 1)
    throw CliError{kExitConfig,
                   "simulate runs a single configuration: use exactly one payoff and replications=1 "
                   "(use `sweep` for grids)"};
  const ResolvedInputs inputs = resolve_or_die(cfg);
  const SweepConfig sw = to_sweep_config(cfg);

  const fs::path dir(*cfg.out_dir);
  prepare_out_dir(dir, force);

  const std::uint64_t seed =
      seed_for(cfg.base_seed, static_cast<unsigned>(cfg.topology), 0, 0);
  const BanditEnvironment env{cfg.payoffs[0] - 0.5};
  SimResult result;
  try {
    switch (cfg.topology) {
      case Topology::temporal:
        result = run_temporal(*inputs.traces, *sw.schedule, env, sw.epistemic, *sw.cogsnet, seed);
        break;
      case Topology::frozen_snapshot:
        result = frozen_snapshot_baseline(*inputs.traces, sw.schedule->times.front(), env,
                                          sw.epistemic, *sw.cogsnet, seed);
        break;
      case Topology::complete:
        result = run_static(gen_complete(cfg.topo.n), env, sw.epistemic, seed);
        break;
      case Topology::cycle:
        result = run_static(gen_cycle(cfg.topo.n), env, sw.epistemic, seed);
        break;
      case Topology::wheel:
        result = run_static(gen_wheel(cfg.topo.n), env, sw.epistemic, seed);
        break;
      case Topology::er:
        result = run_static(gen_er(cfg.topo.n, cfg.topo.er_p, graph_seed_for(seed)), env,
                            sw.epistemic, seed);
        break;
      case Topology::ws:
        result = run_static(gen_ws(cfg.topo.n, cfg.topo.ws_k, cfg.topo.ws_beta, graph_seed_for(seed)),
                            env, sw.epistemic, seed);
        break;
      case Topology::ba:
        result = run_static(gen_ba(cfg.topo.n, cfg.topo.ba_m, graph_seed_for(seed)), env,
                            sw.epistemic, seed);
        break;
    }
  } catch (const std::exception& e) {
    throw CliError{kExitSim, e.what()};
  }

  std::ostringstream series;
  write_series_csv(result, series);
  write_file(dir / "series.csv", series.str());
  std::ostringstream outcome;
  write_outcome_json(result, outcome);
  write_file(dir / "outcome.json", outcome.str());
  write_manifest(cfg, dir);
  std::cout << "outcome=" << consensus_name(result.outcome) << " iterations="
            << (result.series.size() - 1) << " out=" << dir.string() << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override,
              std::optional<std::uint64_t> seed_override, unsigned threads, bool force) {
  const RunConfig cfg = load_run_config(config_path, out_override, seed_override);
  const ResolvedInputs inputs = resolve_or_die(cfg);
  const SweepConfig sw = to_sweep_config(cfg);

  const fs::path dir(*cfg.out_dir);
  prepare_out_dir(dir, force);

  SweepInputs si;
  if (inputs.traces) si.traces = &*inputs.traces;
  AggregateResult agg;
  try {
    agg = run_sweep(sw, si, threads);
  } catch (const std::invalid_argument& e) {
    throw CliError{kExitConfig, e.what()};
  } catch (const std::exception& e) {
    throw CliError{kExitSim, e.what()};
  }

  std::ostringstream summary;
  write_summary_csv(agg, summary);
  write_file(dir / "summary.csv", summary.str());
  for (const auto& st : agg.per_payoff) {
    std::ostringstream traj;
    write_trajectory_csv(st, traj);
    write_file(dir / ("trajectory_" + std::string(topology_name(agg.topology)) + "_" +
                      payoff_label(st.payoff) + ".csv"),
               traj.str());
  }
  write_manifest(cfg, dir);
  std::cout << "cells=" << (sw.payoffs.size() * sw.replications) << " out=" << dir.string()
            << "\n";
  return kExitOk;
}

// Fixed desk-scale workload: temporal network from the calibrated synthetic
// stream, 110 daily snapshots, one iteration per state.
int cmd_bench(std::size_t replications, unsigned threads) {
  const auto events = synth_events(148, 126.0, 0.6, 1.0, 20260814);
  const auto participants = ParticipantSet::range(148);
  CogsnetParams cps;
  cps.mu = 0.3;
  cps.theta = 0.2;
  cps.lambda = lambda_from_lifetime(0.3, 0.2, 72.0);
  const TraceSet traces = build_traces(events, cps, &participants);

  SweepConfig sw;
  sw.topology = Topology::temporal;
  sw.payoffs = {0.55};
  sw.replications = replications;
  sw.base_seed = 7;
  sw.epistemic = {10, 0.99, 0.5, 110};
  sw.cogsnet = cps;
  sw.schedule = SnapshotSchedule::daily(15, 125, 1, 1);

  SweepInputs si;
  si.traces = &traces;
  const auto t0 = std::chrono::steady_clock::now();
  const AggregateResult agg = run_sweep(sw, si, threads);
  const auto t1 = std::chrono::steady_clock::now();
  const double secs = std::chrono::duration<double>(t1 - t0).count();
  std::cout << "replications=" << replications << " seconds=" << format_double(secs)
            << " per_second=" << format_double(static_cast<double>(replications) / secs)
            << " correct_rate=" << format_double(agg.per_payoff[0].correct_rate) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"social-learning simulation on temporal and static networks"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic event stream");
  std::size_t synth_nodes = 148;
  double synth_days = 126.0, synth_rate = 0.6, synth_burstiness = 1.0;
  std::uint64_t synth_seed = 0;
  std::string synth_out, synth_participants_out;
  synth->add_option("--nodes", synth_nodes, "participant count");
  synth->add_option("--days", synth_days, "stream horizon in days");
  synth->add_option("--rate", synth_rate, "mean events per node per day");
  synth->add_option("--burstiness", synth_burstiness, "renewal shape (1 = Poisson)");
  synth->add_option("--seed", synth_seed, "stream seed")->required();
  synth->add_option("--out", synth_out, "output CSV (default stdout)");
  synth->add_option("--participants-out", synth_participants_out, "also write the participant list");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "parse and clean an event stream");
  std::string ing_events, ing_participants, ing_out;
  ingest->add_option("--events", ing_events, "event CSV")->required();
  ingest->add_option("--participants", ing_participants, "participant list");
  ingest->add_option("--out", ing_out, "cleaned CSV (default stdout)");

  // snapshot
  auto* snapshot = app.add_subcommand("snapshot", "network state at one point in time");
  std::string snap_events, snap_participants, snap_out;
  CogsnetFlags snap_flags;
  std::optional<double> snap_t, snap_day;
  snapshot->add_option("--events", snap_events, "event CSV")->required();
  snapshot->add_option("--participants", snap_participants, "participant list");
  add_cogsnet_flags(snapshot, snap_flags);
  snapshot->add_option("--t", snap_t, "snapshot time in time-units since the first event");
  snapshot->add_option("--day", snap_day, "snapshot day index (day * 24h since the first event)");
  snapshot->add_option("--out", snap_out, "output CSV (default stdout)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run one simulation from a config");
  std::string sim_config, sim_out;
  std::optional<std::uint64_t> sim_seed;
  bool sim_force = false;
  simulate->add_option("--config", sim_config, "run config JSON")->required();
  simulate->add_option("--out", sim_out, "output directory (overrides config out_dir)");
  simulate->add_option("--seed", sim_seed, "override base_seed");
  simulate->add_flag("--force", sim_force, "write into a non-empty output directory");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a replicated parameter sweep from a config");
  std::string swp_config, swp_out;
  std::optional<std::uint64_t> swp_seed;
  unsigned swp_threads = 0;
  bool swp_force = false;
  sweep->add_option("--config", swp_config, "run config JSON")->required();
  sweep->add_option("--out", swp_out, "output directory (overrides config out_dir)");
  sweep->add_option("--seed", swp_seed, "override base_seed");
  sweep->add_option("--threads", swp_threads, "worker threads (0 = all cores)");
  sweep->add_flag("--force", swp_force, "write into a non-empty output directory");

  // bench
  auto* bench = app.add_subcommand("bench", "time the reference temporal workload");
  std::size_t bench_reps = 1000;
  unsigned bench_threads = 0;
  bench->add_option("--replications", bench_reps, "temporal replications to run");
  bench->add_option("--threads", bench_threads, "worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*synth)
      return cmd_synth(synth_nodes, synth_days, synth_rate, synth_burstiness, synth_seed,
                       synth_out, synth_participants_out);
    if (*ingest) return cmd_ingest(ing_events, ing_participants, ing_out);
    if (*snapshot)
      return cmd_snapshot(snap_events, snap_participants, snap_flags, snap_t, snap_day, snap_out);
    if (*simulate) return cmd_simulate(sim_config, sim_out, sim_seed, sim_force);
    if (*sweep) return cmd_sweep(swp_config, swp_out, swp_seed, swp_threads, swp_force);
    if (*bench) return cmd_bench(bench_reps, bench_threads);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSim;
  }
  return kExitOk;
}
