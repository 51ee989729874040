#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "netepi/cogsnet.hpp"
#include "netepi/sweep.hpp"

namespace netepi {

// Every schema or semantic problem found in one validation pass.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues);
  std::vector<std::string> issues_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScheduleSpec {
  std::int64_t start_day = 0;
  std::int64_t end_day = 0;  // exclusive
  std::int64_t stride_days = 1;
  std::size_t iterations_per_state = 1;
};

struct SynthSpec {
  std::size_t n_nodes = 0;
  double horizon_days = 0.0;
  double mean_daily_contacts = 0.0;
  double burstiness = 1.0;
  std::uint64_t seed = 0;
};

// One fully-resolved run/sweep description. Scientific parameters carry no
// defaults: the schema requires them explicitly.
struct RunConfig {
  Topology topology = Topology::complete;
  TopologyArgs topo;
  std::vector<double> payoffs;
  std::size_t replications = 0;
  std::uint64_t base_seed = 0;
  EpistemicParams epistemic;
  std::optional<CogsnetParams> cogsnet;
  std::optional<ScheduleSpec> schedule;
  std::optional<std::string> events_path;
  std::optional<std::string> participants_path;
  std::optional<SynthSpec> synth;
  std::optional<std::string> out_dir;
};

// Strict loader: unknown keys are rejected, all violations are reported
// together in one ConfigError.
RunConfig load_config(const nlohmann::json& doc);
RunConfig load_config_file(const std::string& path);  // IoError on unreadable file

nlohmann::ordered_json to_json(const RunConfig& cfg);

SweepConfig to_sweep_config(const RunConfig& cfg);

struct ResolvedInputs {
  std::optional<TraceSet> traces;
  std::size_t events_read = 0;
  std::size_t events_cleaned = 0;
};

// Loads or synthesizes the event stream and builds the trace set (temporal
// and frozen_snapshot modes; other topologies resolve to nothing).
ResolvedInputs resolve_inputs(const RunConfig& cfg);

}  // namespace netepi
