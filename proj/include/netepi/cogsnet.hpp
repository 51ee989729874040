#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "netepi/events.hpp"
#include "netepi/graph.hpp"

namespace netepi {

enum class Forgetting : std::uint8_t { exponential, power };

std::string_view forgetting_name(Forgetting f);

// Memory-trace model parameters. Time arithmetic is done in "time-units";
// event timestamps in seconds are divided by 3600 * unit_hours, relative to
// the first event of the stream.
struct CogsnetParams {
  double mu = 0.3;     // peak weight set by an interaction, in (0, 1]
  double theta = 0.2;  // cut-off threshold, in (0, mu)
  double lambda = 0.0;  // decay rate per time-unit, > 0
  Forgetting forgetting = Forgetting::exponential;
  double unit_hours = 1.0;

  void validate() const;  // throws std::invalid_argument
};

// Decay multiplier after dt time-units: exponential e^(-lambda*dt) or power
// max(1, dt)^(-lambda). dt < 0 is an error.
double forgetting_factor(const CogsnetParams& params, double dt);

// Decay rate that makes a single-event trace last exactly `lifetime`
// time-units before dropping below theta: ln(mu/theta) / lifetime.
double lambda_from_lifetime(double mu, double theta, double lifetime);

// Fold state of one unordered pair's memory trace.
struct EdgeTrace {
  NodeId a = 0;
  NodeId b = 0;
  double weight = 0.0;
  double last_time = 0.0;
  bool alive = false;
};

// Decayed weight at time t; 0 once the trace has dropped strictly below
// theta (at exactly theta it survives). t must not precede last_time.
double weight_at(const EdgeTrace& trace, double t, const CogsnetParams& params);

// Applies an interaction at time t: a dead (or fresh) trace restarts at mu,
// a live one is reinforced to mu + decayed * (1 - mu). Events must arrive in
// time order.
EdgeTrace process_event(EdgeTrace trace, double t, const CogsnetParams& params);

// All pair traces of an event stream, with the full reinforcement history
// kept so snapshots can be evaluated at arbitrary times in any order.
class TraceSet {
 public:
  struct PairHistory {
    NodeId a = 0;
    NodeId b = 0;
    std::vector<double> times;    // event times, ascending, in time-units
    std::vector<double> weights;  // weight immediately after each event
  };

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<PairHistory>& pairs() const { return pairs_; }
  std::int64_t origin_seconds() const { return origin_seconds_; }
  bool empty() const { return pairs_.empty(); }

 private:
  friend TraceSet build_traces(const std::vector<EventRecord>&, const CogsnetParams&,
                               const ParticipantSet*);
  std::vector<NodeId> nodes_;        // snapshot node universe, sorted
  std::vector<PairHistory> pairs_;   // sorted by (a, b)
  std::int64_t origin_seconds_ = 0;  // timestamp of the first event
};

// Decayed weight of one pair at time t (time-units); 0 when dead or before
// the pair's first event.
double history_weight_at(const TraceSet::PairHistory& hist, double t,
                         const CogsnetParams& params);

// Folds a cleaned, time-sorted event stream into traces. The snapshot node
// universe is `participants` when given (all events must stay inside it),
// otherwise the nodes observed in the stream.
TraceSet build_traces(const std::vector<EventRecord>& events, const CogsnetParams& params,
                      const ParticipantSet* participants = nullptr);

// Graph at time t: every pair whose decayed weight is still >= theta, over
// the full node universe (isolated nodes are present, just edgeless).
Graph snapshot_at(const TraceSet& traces, double t, const CogsnetParams& params);

// Snapshot export rows: `t,node_a,node_b,weight`.
void write_snapshot_csv(const Graph& g, double t, std::ostream& out);

}  // namespace netepi
