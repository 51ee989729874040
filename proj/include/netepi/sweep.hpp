#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netepi/cogsnet.hpp"
#include "netepi/epistemic.hpp"
#include "netepi/sim.hpp"

namespace netepi {

enum class Topology : std::uint8_t {
  temporal = 0,
  frozen_snapshot = 1,
  complete = 2,
  cycle = 3,
  wheel = 4,
  er = 5,
  ws = 6,
  ba = 7,
};

std::string_view topology_name(Topology t);
// Accepts the names above plus `circle` as an alias for wheel.
std::optional<Topology> topology_from_name(std::string_view name);

// Generator arguments; only the fields relevant to the chosen topology are
// consulted.
struct TopologyArgs {
  std::size_t n = 0;      // node count (all static topologies)
  double er_p = 0.0;      // edge probability
  std::size_t ws_k = 0;   // ring-lattice degree, even
  double ws_beta = 0.0;   // rewiring probability
  std::size_t ba_m = 0;   // edges attached per arriving node
};

struct SweepConfig {
  Topology topology = Topology::complete;
  TopologyArgs topo;
  std::vector<double> payoffs;  // Beta payoffs, each in (0.5, 1), no duplicates
  std::size_t replications = 0;
  std::uint64_t base_seed = 0;
  EpistemicParams epistemic;
  std::optional<CogsnetParams> cogsnet;      // temporal / frozen_snapshot only
  std::optional<SnapshotSchedule> schedule;  // temporal / frozen_snapshot only

  // Iteration budget of one run under this config.
  std::size_t budget() const;
  void validate() const;
};

// External inputs the config references; temporal and frozen_snapshot modes
// need the trace set built from the event stream.
struct SweepInputs {
  const TraceSet* traces = nullptr;
};

// Positional, injective within a sweep: the tuple is packed into 64 bits
// (topology << 48 | payoff_index << 32 | replication) and mixed with the
// base seed through SplitMix64.
std::uint64_t seed_for(std::uint64_t base_seed, unsigned topology_index,
                       std::size_t payoff_index, std::size_t replication_index);

// Separate stream for per-replication random topology generation, split off
// the simulation seed so graph sampling never perturbs the learning RNG.
std::uint64_t graph_seed_for(std::uint64_t sim_seed);

struct PayoffStats {
  double payoff = 0.0;
  std::size_t runs = 0;
  double correct_rate = 0.0;
  double incorrect_rate = 0.0;
  double none_rate = 0.0;
  std::optional<double> mean_convergence;    // over converged runs only
  std::optional<double> median_convergence;  // over converged runs only
  double mean_final_credence = 0.0;
  double lcc_correct_rate = 0.0;
  double lcc_incorrect_rate = 0.0;
  double lcc_none_rate = 0.0;
  std::optional<double> lcc_mean_convergence;
  std::optional<double> lcc_median_convergence;
  // Pointwise means over ALL runs, converged runs carried forward at their
  // final value; length = budget + 1 (index = iteration, 0 = initial state).
  std::vector<double> traj_mean_credence;
  std::vector<double> traj_beta_fraction;
};

struct AggregateResult {
  Topology topology = Topology::complete;
  std::size_t budget = 0;
  std::vector<PayoffStats> per_payoff;
};

// Aggregates one (topology, payoff) cell's runs; `budget` is the iteration
// budget used for carry-forward. Errors on empty input.
PayoffStats aggregate_payoff(std::span<const SimResult> results, double payoff,
                             std::size_t budget);

// Runs replications x payoffs independently seeded simulations on a worker
// pool. Results are reduced strictly in (payoff, replication) order, so the
// aggregate is bitwise independent of `threads` (0 = hardware concurrency).
AggregateResult run_sweep(const SweepConfig& cfg, const SweepInputs& inputs, unsigned threads);

// summary.csv: one row per payoff with rates and convergence statistics.
void write_summary_csv(const AggregateResult& agg, std::ostream& out);
// trajectory csv: `iteration,mean_credence,beta_fraction`.
void write_trajectory_csv(const PayoffStats& stats, std::ostream& out);
// Payoff rendered for filenames (shortest round-trip form, e.g. "0.5001").
std::string payoff_label(double payoff);

}  // namespace netepi
