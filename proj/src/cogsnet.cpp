#include "netepi/cogsnet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include "netepi/format.hpp"

namespace netepi {

std::string_view forgetting_name(Forgetting f) {
  return f == Forgetting::exponential ? "exponential" : "power";
}

void CogsnetParams::validate() const {
  if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("cogsnet: mu must be in (0, 1]");
  if (!(theta > 0.0 && theta < mu)) throw std::invalid_argument("cogsnet: theta must be in (0, mu)");
  if (!(lambda > 0.0)) throw std::invalid_argument("cogsnet: lambda must be > 0");
  if (!(unit_hours > 0.0)) throw std::invalid_argument("cogsnet: unit_hours must be > 0");
}

double forgetting_factor(const CogsnetParams& params, double dt) {
  if (dt < 0.0) throw std::invalid_argument("forgetting_factor: dt must be >= 0");
  if (params.forgetting == Forgetting::exponential) return std::exp(-params.lambda * dt);
  return std::pow(std::max(1.0, dt), -params.lambda);
}

double lambda_from_lifetime(double mu, double theta, double lifetime) {
  if (!(theta > 0.0) || !(theta < mu)) throw std::invalid_argument("lambda_from_lifetime: need 0 < theta < mu");
  if (!(lifetime > 0.0)) throw std::invalid_argument("lambda_from_lifetime: lifetime must be > 0");
  return std::log(mu / theta) / lifetime;
}

double weight_at(const EdgeTrace& trace, double t, const CogsnetParams& params) {
  if (!trace.alive) return 0.0;
  if (t < trace.last_time) throw std::invalid_argument("weight_at: t precedes last trace update");
  const double w = trace.weight * forgetting_factor(params, t - trace.last_time);
  return w < params.theta ? 0.0 : w;
}

EdgeTrace process_event(EdgeTrace trace, double t, const CogsnetParams& params) {
  if (trace.alive && t < trace.last_time)
    throw std::invalid_argument("process_event: events must be processed in time order");
  const double decayed = weight_at(trace, t, params);  // 0 if fresh or expired
  trace.weight = params.mu + decayed * (1.0 - params.mu);
  trace.last_time = t;
  trace.alive = true;
  return trace;
}

double history_weight_at(const TraceSet::PairHistory& hist, double t,
                         const CogsnetParams& params) {
  auto it = std::upper_bound(hist.times.begin(), hist.times.end(), t);
  if (it == hist.times.begin()) return 0.0;
  const std::size_t idx = static_cast<std::size_t>(it - hist.times.begin()) - 1;
  const double w = hist.weights[idx] * forgetting_factor(params, t - hist.times[idx]);
  return w < params.theta ? 0.0 : w;
}

TraceSet build_traces(const std::vector<EventRecord>& events, const CogsnetParams& params,
                      const ParticipantSet* participants) {
  params.validate();
  TraceSet ts;
  if (participants) ts.nodes_ = participants->ids;
  if (events.empty()) return ts;

  ts.origin_seconds_ = events.front().time;
  const double seconds_per_unit = 3600.0 * params.unit_hours;

  std::map<std::pair<NodeId, NodeId>, std::size_t> index;
  std::vector<EdgeTrace> folds;
  std::int64_t prev_time = events.front().time;
  for (const auto& ev : events) {
    if (ev.time < prev_time) throw std::invalid_argument("build_traces: events not sorted by time");
    prev_time = ev.time;
    if (participants && (!participants->contains(ev.from) || !participants->contains(ev.to)))
      throw std::invalid_argument("build_traces: event endpoint outside participant set");

    const NodeId a = std::min(ev.from, ev.to);
    const NodeId b = std::max(ev.from, ev.to);
    auto [it, fresh] = index.emplace(std::make_pair(a, b), folds.size());
    if (fresh) {
      folds.push_back(EdgeTrace{a, b, 0.0, 0.0, false});
      ts.pairs_.push_back(TraceSet::PairHistory{a, b, {}, {}});
    }
    const double t = static_cast<double>(ev.time - ts.origin_seconds_) / seconds_per_unit;
    EdgeTrace& trace = folds[it->second];
    trace = process_event(trace, t, params);
    ts.pairs_[it->second].times.push_back(t);
    ts.pairs_[it->second].weights.push_back(trace.weight);
  }

  std::sort(ts.pairs_.begin(), ts.pairs_.end(),
            [](const TraceSet::PairHistory& x, const TraceSet::PairHistory& y) {
              return std::tie(x.a, x.b) < std::tie(y.a, y.b);
            });

  if (!participants) {
    for (const auto& h : ts.pairs_) {
      ts.nodes_.push_back(h.a);
      ts.nodes_.push_back(h.b);
    }
    std::sort(ts.nodes_.begin(), ts.nodes_.end());
    ts.nodes_.erase(std::unique(ts.nodes_.begin(), ts.nodes_.end()), ts.nodes_.end());
  }
  return ts;
}

Graph snapshot_at(const TraceSet& traces, double t, const CogsnetParams& params) {
  std::vector<WeightedEdge> edges;
  for (const auto& hist : traces.pairs()) {
    const double w = history_weight_at(hist, t, params);
    if (w > 0.0) edges.push_back({hist.a, hist.b, w});
  }
  return Graph(traces.nodes(), std::move(edges));
}

void write_snapshot_csv(const Graph& g, double t, std::ostream& out) {
  out << "t,node_a,node_b,weight\n";
  const std::string ts = format_double(t);
  for (const auto& e : g.edges()) {
    out << ts << ',' << e.a << ',' << e.b << ',' << format_double(e.weight) << "\n";
  }
}

}  // namespace netepi
