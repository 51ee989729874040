#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "netepi/graph.hpp"

namespace netepi {

enum class EventKind : std::uint8_t { call, message };

std::string_view event_kind_name(EventKind k);

// One timestamped directed communication between two participants.
struct EventRecord {
  std::int64_t time = 0;  // seconds since stream epoch
  NodeId from = 0;
  NodeId to = 0;
  EventKind kind = EventKind::call;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct ParticipantSet {
  std::vector<NodeId> ids;  // sorted, unique, non-empty

  bool contains(NodeId id) const;
  static ParticipantSet from_ids(std::vector<NodeId> ids);
  static ParticipantSet range(std::size_t n);  // 0..n-1
};

// Parse failure; `line` is 1-based and counts the header.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Reads the canonical event CSV (header `time,from,to,kind`). Rejects
// malformed rows, negative times and self-communication; keeps duplicates.
std::vector<EventRecord> parse_events(std::istream& in);

void write_events(const std::vector<EventRecord>& events, std::ostream& out);

// One node-id per line.
ParticipantSet read_participants(std::istream& in);
void write_participants(const ParticipantSet& ps, std::ostream& out);

// Sorts by time (stable for ties), collapses exact duplicate records, and —
// when a participant set is given — drops records touching outsiders.
std::vector<EventRecord> clean_events(std::vector<EventRecord> events,
                                      const ParticipantSet* participants = nullptr);

// Synthetic communication stream: a fixed random acquaintance graph (mean
// degree ~8) with an independent gamma-renewal process per acquainted pair.
// `mean_daily_contacts` is events per node per day; `burstiness` is the
// renewal shape (1 = Poisson; < 1 = bursty). Deterministic per seed, and
// independent of pair iteration order (per-pair RNG streams).
std::vector<EventRecord> synth_events(std::size_t n_nodes, double horizon_days,
                                      double mean_daily_contacts, double burstiness,
                                      std::uint64_t seed);

}  // namespace netepi
