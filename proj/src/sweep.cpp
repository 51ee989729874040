#include "netepi/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <memory>
#include <mutex>
#include <ostream>
#include <semaphore>
#include <stdexcept>
#include <thread>

#include "netepi/format.hpp"

namespace netepi {

std::string_view topology_name(Topology t) {
  switch (t) {
    case Topology::temporal: return "temporal";
    case Topology::frozen_snapshot: return "frozen_snapshot";
    case Topology::complete: return "complete";
    case Topology::cycle: return "cycle";
    case Topology::wheel: return "wheel";
    case Topology::er: return "er";
    case Topology::ws: return "ws";
    case Topology::ba: return "ba";
  }
  return "?";
}

std::optional<Topology> topology_from_name(std::string_view name) {
  if (name == "temporal") return Topology::temporal;
  if (name == "frozen_snapshot") return Topology::frozen_snapshot;
  if (name == "complete") return Topology::complete;
  if (name == "cycle") return Topology::cycle;
  if (name == "wheel" || name == "circle") return Topology::wheel;
  if (name == "er") return Topology::er;
  if (name == "ws") return Topology::ws;
  if (name == "ba") return Topology::ba;
  return std::nullopt;
}

std::size_t SweepConfig::budget() const {
  if (topology == Topology::temporal) return schedule ? schedule->total_iterations() : 0;
  return epistemic.max_iterations;
}

void SweepConfig::validate() const {
  if (payoffs.empty()) throw std::invalid_argument("sweep: payoffs must be non-empty");
  for (const double p : payoffs)
    if (!(p > 0.5 && p < 1.0)) throw std::invalid_argument("sweep: each payoff must be in (0.5, 1)");
  for (std::size_t i = 0; i < payoffs.size(); ++i)
    for (std::size_t j = i + 1; j < payoffs.size(); ++j)
      if (payoffs[i] == payoffs[j]) throw std::invalid_argument("sweep: duplicate payoff value");
  if (payoffs.size() > 0xffff) throw std::invalid_argument("sweep: too many payoffs");
  if (replications < 1) throw std::invalid_argument("sweep: replications must be >= 1");
  if (replications > 0xffffffffULL) throw std::invalid_argument("sweep: too many replications");
  epistemic.validate();

  const bool needs_stream =
      topology == Topology::temporal || topology == Topology::frozen_snapshot;
  if (needs_stream) {
    if (!cogsnet || !schedule)
      throw std::invalid_argument("sweep: temporal/frozen_snapshot need cogsnet and schedule");
    cogsnet->validate();
    schedule->validate();
    if (topology == Topology::temporal &&
        epistemic.max_iterations != schedule->total_iterations())
      throw std::invalid_argument(
          "sweep: temporal max_iterations must equal |snapshots| * iterations_per_state (" +
          std::to_string(schedule->total_iterations()) + ")");
  } else {
    if (cogsnet || schedule)
      throw std::invalid_argument("sweep: cogsnet/schedule only apply to temporal topologies");
  }

  switch (topology) {
    case Topology::complete:
    case Topology::cycle:
      if (topo.n < 3) throw std::invalid_argument("sweep: topology needs n >= 3");
      break;
    case Topology::wheel:
      if (topo.n < 4) throw std::invalid_argument("sweep: wheel needs n >= 4");
      break;
    case Topology::er:
      if (topo.n < 1) throw std::invalid_argument("sweep: er needs n >= 1");
      if (!(topo.er_p >= 0.0 && topo.er_p <= 1.0))
        throw std::invalid_argument("sweep: er needs p in [0, 1]");
      break;
    case Topology::ws:
      if (!(topo.ws_k >= 2 && topo.ws_k % 2 == 0 && topo.ws_k < topo.n))
        throw std::invalid_argument("sweep: ws needs even k with 2 <= k < n");
      if (!(topo.ws_beta >= 0.0 && topo.ws_beta <= 1.0))
        throw std::invalid_argument("sweep: ws needs beta in [0, 1]");
      break;
    case Topology::ba:
      if (!(topo.ba_m >= 1 && topo.ba_m < topo.n))
        throw std::invalid_argument("sweep: ba needs 1 <= m < n");
      break;
    default:
      break;
  }
}

std::uint64_t seed_for(std::uint64_t base_seed, unsigned topology_index,
                       std::size_t payoff_index, std::size_t replication_index) {
  const std::uint64_t packed = (static_cast<std::uint64_t>(topology_index) << 48) |
                               (static_cast<std::uint64_t>(payoff_index) << 32) |
                               static_cast<std::uint64_t>(replication_index);
  return splitmix64(base_seed ^ packed);
}

std::uint64_t graph_seed_for(std::uint64_t sim_seed) {
  return splitmix64(sim_seed ^ 0x8bb84b93962eacc9ULL);
}

namespace {

// Order-sensitive reduction state for one (topology, payoff) cell; fed
// strictly in replication order.
class PayoffAccumulator {
 public:
  PayoffAccumulator(double payoff, std::size_t budget)
      : payoff_(payoff),
        traj_credence_(budget + 1, 0.0),
        traj_beta_(budget + 1, 0.0) {}

  void add(const SimResult& run) {
    ++runs_;
    switch (run.outcome) {
      case ConsensusLabel::correct: ++correct_; break;
      case ConsensusLabel::incorrect: ++incorrect_; break;
      default: break;
    }
    if (run.converged_at) convergence_.push_back(static_cast<double>(*run.converged_at));
    final_credence_sum_ += run.series.back().mean_credence;

    const ConsensusLabel lcc_final = run.series.back().lcc_consensus;
    if (lcc_final == ConsensusLabel::correct) ++lcc_correct_;
    if (lcc_final == ConsensusLabel::incorrect) ++lcc_incorrect_;
    if (lcc_final != ConsensusLabel::none) {
      // First iteration of the trailing stretch that holds the final label.
      std::size_t idx = run.series.size() - 1;
      while (idx > 0 && run.series[idx - 1].lcc_consensus == lcc_final) --idx;
      lcc_convergence_.push_back(static_cast<double>(idx));
    }

    const std::size_t last = run.series.size() - 1;
    for (std::size_t t = 0; t < traj_credence_.size(); ++t) {
      const auto& rec = run.series[std::min(t, last)];
      traj_credence_[t] += rec.mean_credence;
      traj_beta_[t] += rec.beta_fraction;
    }
  }

  PayoffStats finish() {
    if (runs_ == 0) throw std::invalid_argument("aggregate: no simulation results");
    PayoffStats st;
    st.payoff = payoff_;
    st.runs = runs_;
    const double n = static_cast<double>(runs_);
    st.correct_rate = static_cast<double>(correct_) / n;
    st.incorrect_rate = static_cast<double>(incorrect_) / n;
    st.none_rate = static_cast<double>(runs_ - correct_ - incorrect_) / n;
    st.mean_final_credence = final_credence_sum_ / n;
    fill_convergence(convergence_, st.mean_convergence, st.median_convergence);
    st.lcc_correct_rate = static_cast<double>(lcc_correct_) / n;
    st.lcc_incorrect_rate = static_cast<double>(lcc_incorrect_) / n;
    st.lcc_none_rate = static_cast<double>(runs_ - lcc_correct_ - lcc_incorrect_) / n;
    fill_convergence(lcc_convergence_, st.lcc_mean_convergence, st.lcc_median_convergence);
    for (double& v : traj_credence_) v /= n;
    for (double& v : traj_beta_) v /= n;
    st.traj_mean_credence = std::move(traj_credence_);
    st.traj_beta_fraction = std::move(traj_beta_);
    return st;
  }

 private:
  static void fill_convergence(std::vector<double>& values, std::optional<double>& mean,
                               std::optional<double>& median) {
    if (values.empty()) return;
    double sum = 0.0;
    for (const double v : values) sum += v;
    mean = sum / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  }

  double payoff_;
  std::size_t runs_ = 0;
  std::size_t correct_ = 0;
  std::size_t incorrect_ = 0;
  std::size_t lcc_correct_ = 0;
  std::size_t lcc_incorrect_ = 0;
  double final_credence_sum_ = 0.0;
  std::vector<double> convergence_;
  std::vector<double> lcc_convergence_;
  std::vector<double> traj_credence_;
  std::vector<double> traj_beta_;
};

}  // namespace

PayoffStats aggregate_payoff(std::span<const SimResult> results, double payoff,
                             std::size_t budget) {
  if (results.empty()) throw std::invalid_argument("aggregate: no simulation results");
  PayoffAccumulator acc(payoff, budget);
  for (const auto& r : results) acc.add(r);
  return acc.finish();
}

AggregateResult run_sweep(const SweepConfig& cfg, const SweepInputs& inputs, unsigned threads) {
  cfg.validate();
  const bool needs_stream =
      cfg.topology == Topology::temporal || cfg.topology == Topology::frozen_snapshot;
  if (needs_stream && !inputs.traces)
    throw std::invalid_argument("sweep: temporal/frozen_snapshot need an event trace set");

  // Immutable shared inputs for all cells.
  SnapshotSeries series;
  Graph fixed_graph;
  ComponentInfo fixed_info;
  bool has_fixed = false;
  switch (cfg.topology) {
    case Topology::temporal:
      series = precompute_snapshots(*inputs.traces, cfg.schedule->times, *cfg.cogsnet);
      break;
    case Topology::frozen_snapshot:
      fixed_graph = snapshot_at(*inputs.traces, cfg.schedule->times.front(), *cfg.cogsnet);
      has_fixed = true;
      break;
    case Topology::complete:
      fixed_graph = gen_complete(cfg.topo.n);
      has_fixed = true;
      break;
    case Topology::cycle:
      fixed_graph = gen_cycle(cfg.topo.n);
      has_fixed = true;
      break;
    case Topology::wheel:
      fixed_graph = gen_wheel(cfg.topo.n);
      has_fixed = true;
      break;
    default:
      break;  // random topology generated per replication
  }
  if (has_fixed) fixed_info = component_info(fixed_graph);

  std::vector<SnapshotPhase> temporal_phases;
  if (cfg.topology == Topology::temporal) {
    temporal_phases.resize(series.graphs.size());
    for (std::size_t i = 0; i < temporal_phases.size(); ++i)
      temporal_phases[i] = {&series.graphs[i], &series.infos[i],
                            cfg.schedule->iterations_per_state};
  }

  const unsigned topo_index = static_cast<unsigned>(cfg.topology);
  const std::size_t budget = cfg.budget();

  auto run_cell = [&](std::size_t payoff_idx, std::size_t rep) -> SimResult {
    const std::uint64_t seed = seed_for(cfg.base_seed, topo_index, payoff_idx, rep);
    const BanditEnvironment env{cfg.payoffs[payoff_idx] - 0.5};
    switch (cfg.topology) {
      case Topology::temporal:
        return run_phases(temporal_phases, env, cfg.epistemic, seed);
      case Topology::er:
      case Topology::ws:
      case Topology::ba: {
        const std::uint64_t gseed = graph_seed_for(seed);
        Graph g = cfg.topology == Topology::er ? gen_er(cfg.topo.n, cfg.topo.er_p, gseed)
                  : cfg.topology == Topology::ws
                      ? gen_ws(cfg.topo.n, cfg.topo.ws_k, cfg.topo.ws_beta, gseed)
                      : gen_ba(cfg.topo.n, cfg.topo.ba_m, gseed);
        const ComponentInfo info = component_info(g);
        const SnapshotPhase phase{&g, &info, cfg.epistemic.max_iterations};
        return run_phases({&phase, 1}, env, cfg.epistemic, seed);
      }
      default: {
        const SnapshotPhase phase{&fixed_graph, &fixed_info, cfg.epistemic.max_iterations};
        return run_phases({&phase, 1}, env, cfg.epistemic, seed);
      }
    }
  };

  const std::size_t cells = cfg.payoffs.size() * cfg.replications;
  unsigned nthreads = threads ? threads : std::thread::hardware_concurrency();
  if (nthreads == 0) nthreads = 1;
  nthreads = static_cast<unsigned>(std::min<std::size_t>(nthreads, cells));

  // Workers fill result slots in whatever order they finish; the reducer
  // consumes them strictly in cell order, so the aggregate never depends on
  // the thread count. The semaphore bounds how far production may run ahead
  // of reduction, which caps memory at ~window full series.
  std::vector<std::unique_ptr<SimResult>> slots(cells);
  std::atomic<std::size_t> next_cell{0};
  std::mutex mtx;
  std::condition_variable ready;
  std::exception_ptr failure;
  const std::ptrdiff_t window = std::max<std::ptrdiff_t>(4 * nthreads, 16);
  std::counting_semaphore<> quota(window);

  auto worker = [&]() {
    for (;;) {
      quota.acquire();
      const std::size_t i = next_cell.fetch_add(1);
      if (i >= cells) {
        quota.release();
        return;
      }
      std::unique_ptr<SimResult> result;
      try {
        result = std::make_unique<SimResult>(run_cell(i / cfg.replications, i % cfg.replications));
      } catch (...) {
        std::lock_guard lock(mtx);
        if (!failure) failure = std::current_exception();
        ready.notify_all();
        return;
      }
      {
        std::lock_guard lock(mtx);
        slots[i] = std::move(result);
      }
      ready.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);

  std::vector<PayoffAccumulator> accs;
  accs.reserve(cfg.payoffs.size());
  for (const double p : cfg.payoffs) accs.emplace_back(p, budget);

  bool failed = false;
  for (std::size_t i = 0; i < cells && !failed; ++i) {
    std::unique_ptr<SimResult> result;
    {
      std::unique_lock lock(mtx);
      ready.wait(lock, [&] { return slots[i] != nullptr || failure != nullptr; });
      if (failure) {
        failed = true;
      } else {
        result = std::move(slots[i]);
      }
    }
    if (!failed) {
      accs[i / cfg.replications].add(*result);
      quota.release();
    }
  }
  if (failed) {
    next_cell.store(cells);       // stop claiming new cells
    quota.release(window);        // wake anyone blocked on the window
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  AggregateResult agg;
  agg.topology = cfg.topology;
  agg.budget = budget;
  agg.per_payoff.reserve(accs.size());
  for (auto& acc : accs) agg.per_payoff.push_back(acc.finish());
  return agg;
}

namespace {

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

void write_summary_csv(const AggregateResult& agg, std::ostream& out) {
  out << "topology,payoff,replications,correct_rate,incorrect_rate,none_rate,"
         "mean_convergence,median_convergence,mean_final_credence,"
         "lcc_correct_rate,lcc_incorrect_rate,lcc_none_rate,"
         "lcc_mean_convergence,lcc_median_convergence\n";
  for (const auto& st : agg.per_payoff) {
    out << topology_name(agg.topology) << ',' << format_double(st.payoff) << ',' << st.runs << ','
        << format_double(st.correct_rate) << ',' << format_double(st.incorrect_rate) << ','
        << format_double(st.none_rate) << ',' << opt_field(st.mean_convergence) << ','
        << opt_field(st.median_convergence) << ',' << format_double(st.mean_final_credence) << ','
        << format_double(st.lcc_correct_rate) << ',' << format_double(st.lcc_incorrect_rate)
        << ',' << format_double(st.lcc_none_rate) << ',' << opt_field(st.lcc_mean_convergence)
        << ',' << opt_field(st.lcc_median_convergence) << "\n";
  }
}

void write_trajectory_csv(const PayoffStats& stats, std::ostream& out) {
  out << "iteration,mean_credence,beta_fraction\n";
  for (std::size_t t = 0; t < stats.traj_mean_credence.size(); ++t)
    out << t << ',' << format_double(stats.traj_mean_credence[t]) << ','
        << format_double(stats.traj_beta_fraction[t]) << "\n";
}

std::string payoff_label(double payoff) { return format_double(payoff); }

}  // namespace netepi
