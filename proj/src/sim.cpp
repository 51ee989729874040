#include "netepi/sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "netepi/format.hpp"

namespace netepi {

void SnapshotSchedule::validate() const {
  if (times.empty()) throw std::invalid_argument("schedule: times must be non-empty");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("schedule: times must be strictly increasing");
  if (iterations_per_state < 1)
    throw std::invalid_argument("schedule: iterations_per_state must be >= 1");
}

SnapshotSchedule SnapshotSchedule::daily(std::int64_t first_day, std::int64_t last_day,
                                         std::int64_t stride_days,
                                         std::size_t iterations_per_state, double unit_hours) {
  if (first_day < 0 || last_day <= first_day || stride_days < 1)
    throw std::invalid_argument("schedule: need 0 <= first_day < last_day and stride_days >= 1");
  SnapshotSchedule s;
  s.iterations_per_state = iterations_per_state;
  for (std::int64_t day = first_day; day < last_day; day += stride_days)
    s.times.push_back(static_cast<double>(day) * 24.0 / unit_hours);
  s.validate();
  return s;
}

SnapshotSeries precompute_snapshots(const TraceSet& traces, std::span<const double> times,
                                    const CogsnetParams& params) {
  SnapshotSeries series;
  series.graphs.reserve(times.size());
  series.infos.reserve(times.size());
  for (const double t : times) {
    series.graphs.push_back(snapshot_at(traces, t, params));
    series.infos.push_back(component_info(series.graphs.back()));
  }
  return series;
}

void refresh_activity(IterationState& state) {
  for (std::size_t i = 0; i < state.agents.size(); ++i)
    state.agents[i].active = state.graph->degree(i) > 0;
}

namespace {

// One iteration. `draw(i, n)` yields the success count of agent i's n
// experiments; `credences` must hold every agent's current credence on entry
// and is refreshed before returning.
template <typename Draw>
void step_impl(IterationState& state, const BanditEnvironment& env, const EpistemicParams& params,
               std::vector<double>& credences, std::vector<Evidence>& evidence,
               std::vector<char>& experimented, Draw&& draw) {
  const Graph& g = *state.graph;
  const std::size_t n = state.agents.size();
  const double step_size = env.log_odds_step();

  for (std::size_t i = 0; i < n; ++i) {
    experimented[i] = 0;
    const AgentState& a = state.agents[i];
    if (!a.active || choose_action(credences[i]) != Action::beta) continue;
    evidence[i] = Evidence{params.trials_n, draw(i, params.trials_n)};
    experimented[i] = 1;
  }

  for (std::size_t i = 0; i < n; ++i) {
    AgentState& a = state.agents[i];
    if (!a.active) continue;
    Evidence pooled = experimented[i] ? evidence[i] : Evidence{};
    for (const std::uint32_t j : g.neighbors(i)) {
      if (experimented[j]) {
        pooled.n += evidence[j].n;
        pooled.k += evidence[j].k;
      }
    }
    a.absorb(pooled);
  }

  for (std::size_t i = 0; i < n; ++i) credences[i] = state.agents[i].credence(step_size);
  ++state.iteration;
}

std::vector<double> credence_buffer(const IterationState& state, double step_size) {
  std::vector<double> c(state.agents.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = state.agents[i].credence(step_size);
  return c;
}

IterationRecord make_record(const IterationState& state, const ComponentInfo& info,
                            const EpistemicParams& params, const std::vector<double>& credences) {
  IterationRecord rec;
  const std::size_t n = state.agents.size();

  std::int64_t actives = 0;
  double active_sum = 0.0;
  std::int64_t active_beta = 0;
  double all_sum = 0.0;
  std::int64_t all_beta = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = credences[i];
    all_sum += c;
    if (c > 0.5) ++all_beta;
    if (state.agents[i].active) {
      ++actives;
      active_sum += c;
      if (c > 0.5) ++active_beta;
    }
  }
  rec.active_count = actives;
  if (actives > 0) {
    rec.mean_credence = active_sum / static_cast<double>(actives);
    rec.beta_fraction = static_cast<double>(active_beta) / static_cast<double>(actives);
  } else {
    // Nobody is active; fall back to the whole population so trajectory
    // averages stay defined.
    rec.mean_credence = all_sum / static_cast<double>(n);
    rec.beta_fraction = static_cast<double>(all_beta) / static_cast<double>(n);
  }
  rec.component_count = info.count;
  rec.lcc_size = info.count > 0 ? info.sizes[info.lcc] : 0;

  bool lcc_any = false, lcc_above = true, lcc_below = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!state.agents[i].active || info.comp_of[i] != info.lcc) continue;
    lcc_any = true;
    if (credences[i] <= params.upper_threshold) lcc_above = false;
    if (credences[i] > params.lower_threshold) lcc_below = false;
  }
  if (lcc_any && lcc_above)
    rec.lcc_consensus = ConsensusLabel::correct;
  else if (lcc_any && lcc_below)
    rec.lcc_consensus = ConsensusLabel::incorrect;
  else
    rec.lcc_consensus = ConsensusLabel::none;
  return rec;
}

ConsensusLabel consensus_from_credences(const IterationState& state,
                                        const EpistemicParams& params,
                                        const std::vector<double>& credences) {
  bool any = false, above = true, below = true;
  for (std::size_t i = 0; i < state.agents.size(); ++i) {
    if (!state.agents[i].active) continue;
    any = true;
    if (credences[i] <= params.upper_threshold) above = false;
    if (credences[i] > params.lower_threshold) below = false;
    if (!above && !below) return ConsensusLabel::none;
  }
  if (!any) return ConsensusLabel::none;
  if (above) return ConsensusLabel::correct;
  if (below) return ConsensusLabel::incorrect;
  return ConsensusLabel::none;
}

template <typename Draw>
SimResult run_phases_impl(std::span<const SnapshotPhase> phases, const BanditEnvironment& env,
                          const EpistemicParams& params, std::uint64_t seed,
                          const RunHooks* hooks, RngEngine& eng, Draw&& draw) {
  const Graph& first = *phases.front().graph;
  for (const auto& ph : phases) {
    if (!ph.graph || !ph.info) throw std::invalid_argument("run: null phase graph");
    if (ph.graph->nodes() != first.nodes())
      throw std::invalid_argument("run: all snapshots must share one node universe");
  }
  if (first.node_count() == 0) throw std::invalid_argument("run: empty node universe");

  IterationState state;
  if (hooks && hooks->initial_credences)
    state.agents = agents_from_credences(first.nodes(), *hooks->initial_credences);
  else
    state.agents = init_credences(first.nodes(), eng);

  const double step_size = env.log_odds_step();
  std::size_t budget = 0;
  for (const auto& ph : phases) budget += ph.steps;

  SimResult result;
  result.seed = seed;
  result.series.reserve(budget + 1);

  std::vector<double> credences = credence_buffer(state, step_size);
  std::vector<Evidence> evidence(state.agents.size());
  std::vector<char> experimented(state.agents.size(), 0);

  state.graph = phases.front().graph;
  refresh_activity(state);
  result.series.push_back(make_record(state, *phases.front().info, params, credences));
  ConsensusLabel label = consensus_from_credences(state, params, credences);
  if (label != ConsensusLabel::none) {
    result.outcome = label;
    result.converged_at = 0;
    return result;
  }

  for (const auto& phase : phases) {
    state.graph = phase.graph;
    refresh_activity(state);
    for (std::size_t s = 0; s < phase.steps; ++s) {
      step_impl(state, env, params, credences, evidence, experimented, draw);
      result.series.push_back(make_record(state, *phase.info, params, credences));
      label = consensus_from_credences(state, params, credences);
      if (label != ConsensusLabel::none) {
        result.outcome = label;
        result.converged_at = state.iteration;
        return result;
      }
    }
  }
  return result;
}

}  // namespace

void step(IterationState& state, const BanditEnvironment& env, const EpistemicParams& params,
          RngEngine& eng) {
  std::vector<double> credences = credence_buffer(state, env.log_odds_step());
  std::vector<Evidence> evidence(state.agents.size());
  std::vector<char> experimented(state.agents.size(), 0);
  step_impl(state, env, params, credences, evidence, experimented,
            [&](std::size_t, std::int64_t n) { return binomial(eng, n, env.p_beta()); });
}

void step_with_sampler(IterationState& state, const BanditEnvironment& env,
                       const EpistemicParams& params, const TrialSampler& sampler) {
  std::vector<double> credences = credence_buffer(state, env.log_odds_step());
  std::vector<Evidence> evidence(state.agents.size());
  std::vector<char> experimented(state.agents.size(), 0);
  step_impl(state, env, params, credences, evidence, experimented, sampler);
}

SimResult run_phases(std::span<const SnapshotPhase> phases, const BanditEnvironment& env,
                     const EpistemicParams& params, std::uint64_t seed, const RunHooks* hooks) {
  env.validate();
  if (phases.empty()) throw std::invalid_argument("run: no snapshot phases");
  RngEngine eng(seed);
  if (hooks && hooks->sampler)
    return run_phases_impl(phases, env, params, seed, hooks, eng,
                           [&](std::size_t i, std::int64_t n) { return hooks->sampler(i, n); });
  return run_phases_impl(phases, env, params, seed, hooks, eng,
                         [&](std::size_t, std::int64_t n) { return binomial(eng, n, env.p_beta()); });
}

SimResult run_static(const Graph& g, const BanditEnvironment& env, const EpistemicParams& params,
                     std::uint64_t seed, const RunHooks* hooks) {
  params.validate();
  const ComponentInfo info = component_info(g);
  const SnapshotPhase phase{&g, &info, params.max_iterations};
  return run_phases({&phase, 1}, env, params, seed, hooks);
}

SimResult run_on_snapshots(const SnapshotSeries& series, std::size_t iterations_per_state,
                           const BanditEnvironment& env, const EpistemicParams& params,
                           std::uint64_t seed, const RunHooks* hooks) {
  // max_iterations is not consulted here (the budget is |snapshots| *
  // iterations_per_state), so only the learning parameters are validated.
  if (params.trials_n < 1) throw std::invalid_argument("epistemic: trials_n must be >= 1");
  if (!(params.lower_threshold >= 0.5 && params.lower_threshold < params.upper_threshold &&
        params.upper_threshold < 1.0))
    throw std::invalid_argument("epistemic: need 0.5 <= lower_threshold < upper_threshold < 1");
  if (series.graphs.empty()) throw std::invalid_argument("run: empty snapshot series");
  std::vector<SnapshotPhase> phases(series.graphs.size());
  for (std::size_t i = 0; i < phases.size(); ++i)
    phases[i] = {&series.graphs[i], &series.infos[i], iterations_per_state};
  return run_phases(phases, env, params, seed, hooks);
}

SimResult run_temporal(const TraceSet& traces, const SnapshotSchedule& schedule,
                       const BanditEnvironment& env, const EpistemicParams& params,
                       const CogsnetParams& cogsnet, std::uint64_t seed, const RunHooks* hooks) {
  schedule.validate();
  const SnapshotSeries series = precompute_snapshots(traces, schedule.times, cogsnet);
  return run_on_snapshots(series, schedule.iterations_per_state, env, params, seed, hooks);
}

SimResult frozen_snapshot_baseline(const TraceSet& traces, double t_freeze,
                                   const BanditEnvironment& env, const EpistemicParams& params,
                                   const CogsnetParams& cogsnet, std::uint64_t seed,
                                   const RunHooks* hooks) {
  const Graph g = snapshot_at(traces, t_freeze, cogsnet);
  return run_static(g, env, params, seed, hooks);
}

void write_series_csv(const SimResult& result, std::ostream& out) {
  out << "iteration,mean_credence,beta_fraction,active_count,component_count,lcc_size,"
         "lcc_consensus\n";
  for (std::size_t i = 0; i < result.series.size(); ++i) {
    const auto& r = result.series[i];
    out << i << ',' << format_double(r.mean_credence) << ',' << format_double(r.beta_fraction)
        << ',' << r.active_count << ',' << r.component_count << ',' << r.lcc_size << ','
        << consensus_name(r.lcc_consensus) << "\n";
  }
}

void write_outcome_json(const SimResult& result, std::ostream& out) {
  nlohmann::ordered_json j;
  j["outcome"] = std::string(consensus_name(result.outcome));
  if (result.converged_at)
    j["converged_at"] = *result.converged_at;
  else
    j["converged_at"] = nullptr;
  j["iterations"] = result.series.empty() ? 0 : result.series.size() - 1;
  j["seed"] = result.seed;
  if (!result.series.empty()) {
    const auto& r = result.series.back();
    j["final"] = {{"mean_credence", r.mean_credence},
                  {"beta_fraction", r.beta_fraction},
                  {"active_count", r.active_count},
                  {"component_count", r.component_count},
                  {"lcc_size", r.lcc_size},
                  {"lcc_consensus", std::string(consensus_name(r.lcc_consensus))}};
  }
  out << j.dump(2) << "\n";
}

}  // namespace netepi
