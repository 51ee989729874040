#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "netepi/cogsnet.hpp"
#include "netepi/epistemic.hpp"
#include "netepi/graph.hpp"

namespace netepi {

struct SnapshotSchedule {
  std::vector<double> times;  // time-units, strictly increasing
  std::size_t iterations_per_state = 1;

  void validate() const;
  std::size_t total_iterations() const { return times.size() * iterations_per_state; }

  // Snapshots at t = day * 24 / unit_hours for day = first_day, first_day +
  // stride_days, ... while day < last_day (exclusive end).
  static SnapshotSchedule daily(std::int64_t first_day, std::int64_t last_day,
                                std::int64_t stride_days, std::size_t iterations_per_state,
                                double unit_hours = 1.0);
};

struct IterationRecord {
  double mean_credence = 0.0;  // over active agents (all agents if none active)
  double beta_fraction = 0.0;  // Beta-voters / actives (same fallback)
  std::int64_t active_count = 0;
  std::int64_t component_count = 0;
  std::int64_t lcc_size = 0;
  ConsensusLabel lcc_consensus = ConsensusLabel::none;
};

// series[i] describes the state after i iterations; series[0] is the initial
// state, so a run that exhausts its budget holds budget + 1 records.
struct SimResult {
  ConsensusLabel outcome = ConsensusLabel::none;
  std::optional<std::size_t> converged_at;
  std::vector<IterationRecord> series;
  std::uint64_t seed = 0;
};

// Scripted replacement for the binomial experiment draw (fixtures).
using TrialSampler = std::function<std::int64_t(std::size_t agent_index, std::int64_t n)>;

// Test/fixture overrides; production runs pass none.
struct RunHooks {
  const std::vector<double>* initial_credences = nullptr;  // instead of uniform draws
  TrialSampler sampler;                                    // instead of binomial draws
};

// One stretch of iterations on a fixed graph.
struct SnapshotPhase {
  const Graph* graph = nullptr;
  const ComponentInfo* info = nullptr;
  std::size_t steps = 0;
};

// Materialized snapshot sequence, shared read-only across replications.
struct SnapshotSeries {
  std::vector<Graph> graphs;
  std::vector<ComponentInfo> infos;
};

SnapshotSeries precompute_snapshots(const TraceSet& traces, std::span<const double> times,
                                    const CogsnetParams& params);

struct IterationState {
  std::vector<AgentState> agents;  // index-aligned with graph node indices
  const Graph* graph = nullptr;
  std::size_t iteration = 0;
};

// active(a) <=> degree(a) >= 1 in the current graph.
void refresh_activity(IterationState& state);

// One learning iteration: every active Beta-voter experiments, then every
// active agent absorbs its own and its neighbors' evidence. Inactive agents
// are untouched.
void step(IterationState& state, const BanditEnvironment& env, const EpistemicParams& params,
          RngEngine& eng);
void step_with_sampler(IterationState& state, const BanditEnvironment& env,
                       const EpistemicParams& params, const TrialSampler& sampler);

// Core loop shared by all run modes: iterate over phases, refresh activity
// at each graph switch, record one IterationRecord per iteration (plus the
// initial one) and stop at the first whole-network consensus.
SimResult run_phases(std::span<const SnapshotPhase> phases, const BanditEnvironment& env,
                     const EpistemicParams& params, std::uint64_t seed,
                     const RunHooks* hooks = nullptr);

SimResult run_static(const Graph& g, const BanditEnvironment& env, const EpistemicParams& params,
                     std::uint64_t seed, const RunHooks* hooks = nullptr);

SimResult run_on_snapshots(const SnapshotSeries& series, std::size_t iterations_per_state,
                           const BanditEnvironment& env, const EpistemicParams& params,
                           std::uint64_t seed, const RunHooks* hooks = nullptr);

SimResult run_temporal(const TraceSet& traces, const SnapshotSchedule& schedule,
                       const BanditEnvironment& env, const EpistemicParams& params,
                       const CogsnetParams& cogsnet, std::uint64_t seed,
                       const RunHooks* hooks = nullptr);

// run_static on the graph frozen at t_freeze.
SimResult frozen_snapshot_baseline(const TraceSet& traces, double t_freeze,
                                   const BanditEnvironment& env, const EpistemicParams& params,
                                   const CogsnetParams& cogsnet, std::uint64_t seed,
                                   const RunHooks* hooks = nullptr);

// `iteration,mean_credence,beta_fraction,active_count,component_count,lcc_size,lcc_consensus`
void write_series_csv(const SimResult& result, std::ostream& out);
// One JSON object summarizing the run.
void write_outcome_json(const SimResult& result, std::ostream& out);

}  // namespace netepi
