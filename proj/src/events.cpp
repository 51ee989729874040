#include "netepi/events.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>

#include "netepi/rng.hpp"

namespace netepi {

std::string_view event_kind_name(EventKind k) {
  return k == EventKind::call ? "call" : "message";
}

bool ParticipantSet::contains(NodeId id) const {
  return std::binary_search(ids.begin(), ids.end(), id);
}

ParticipantSet ParticipantSet::from_ids(std::vector<NodeId> raw) {
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  if (raw.empty()) throw std::invalid_argument("participant set must be non-empty");
  return ParticipantSet{std::move(raw)};
}

ParticipantSet ParticipantSet::range(std::size_t n) {
  if (n == 0) throw std::invalid_argument("participant set must be non-empty");
  std::vector<NodeId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<NodeId>(i);
  return ParticipantSet{std::move(ids)};
}

namespace {

// Parses a non-negative integer field; no signs, no blanks, no overflow.
bool parse_u63(std::string_view s, std::int64_t& out) {
  if (s.empty() || s.size() > 18) return false;
  std::int64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

}  // namespace

std::vector<EventRecord> parse_events(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<EventRecord> out;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!saw_header) {
      if (line != "time,from,to,kind") throw ParseError(lineno, "expected header `time,from,to,kind`");
      saw_header = true;
      continue;
    }
    std::string_view rest(line);
    std::string_view field[4];
    for (int i = 0; i < 3; ++i) {
      const auto comma = rest.find(',');
      if (comma == std::string_view::npos) throw ParseError(lineno, "expected 4 comma-separated fields");
      field[i] = rest.substr(0, comma);
      rest.remove_prefix(comma + 1);
    }
    if (rest.find(',') != std::string_view::npos) throw ParseError(lineno, "expected 4 comma-separated fields");
    field[3] = rest;

    EventRecord rec;
    if (!parse_u63(field[0], rec.time)) throw ParseError(lineno, "bad time field");
    if (!parse_u63(field[1], rec.from)) throw ParseError(lineno, "bad from field");
    if (!parse_u63(field[2], rec.to)) throw ParseError(lineno, "bad to field");
    if (field[3] == "call")
      rec.kind = EventKind::call;
    else if (field[3] == "message")
      rec.kind = EventKind::message;
    else
      throw ParseError(lineno, "kind must be `call` or `message`");
    if (rec.from == rec.to) throw ParseError(lineno, "self-communication is not allowed");
    out.push_back(rec);
  }
  if (!saw_header) throw ParseError(1, "empty input, expected header `time,from,to,kind`");
  return out;
}

void write_events(const std::vector<EventRecord>& events, std::ostream& out) {
  out << "time,from,to,kind\n";
  for (const auto& e : events)
    out << e.time << ',' << e.from << ',' << e.to << ',' << event_kind_name(e.kind) << "\n";
}

ParticipantSet read_participants(std::istream& in) {
  std::vector<NodeId> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::int64_t id;
    if (!parse_u63(line, id)) throw ParseError(lineno, "bad participant id");
    ids.push_back(id);
  }
  return ParticipantSet::from_ids(std::move(ids));
}

void write_participants(const ParticipantSet& ps, std::ostream& out) {
  for (const auto id : ps.ids) out << id << "\n";
}

std::vector<EventRecord> clean_events(std::vector<EventRecord> events,
                                      const ParticipantSet* participants) {
  if (participants) {
    std::erase_if(events, [&](const EventRecord& e) {
      return !participants->contains(e.from) || !participants->contains(e.to);
    });
  }
  std::set<std::tuple<std::int64_t, NodeId, NodeId, EventKind>> seen;
  std::vector<EventRecord> kept;
  kept.reserve(events.size());
  for (const auto& e : events)
    if (seen.emplace(e.time, e.from, e.to, e.kind).second) kept.push_back(e);
  std::stable_sort(kept.begin(), kept.end(),
                   [](const EventRecord& a, const EventRecord& b) { return a.time < b.time; });
  return kept;
}

std::vector<EventRecord> synth_events(std::size_t n_nodes, double horizon_days,
                                      double mean_daily_contacts, double burstiness,
                                      std::uint64_t seed) {
  if (n_nodes < 2) throw std::invalid_argument("synth_events: need at least 2 nodes");
  if (horizon_days < 1.0) throw std::invalid_argument("synth_events: horizon must be >= 1 day");
  if (burstiness <= 0.0) throw std::invalid_argument("synth_events: burstiness must be > 0");

  std::vector<EventRecord> out;
  if (mean_daily_contacts <= 0.0) return out;

  // Acquaintance graph: ER with mean degree ~8 (capped at complete).
  const double p = std::min(1.0, 8.0 / static_cast<double>(n_nodes - 1));
  RngEngine acq_eng(splitmix64(seed ^ 0x61c8864680b583ebULL));
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (std::size_t i = 0; i < n_nodes; ++i)
    for (std::size_t j = i + 1; j < n_nodes; ++j)
      if (bernoulli(acq_eng, p)) pairs.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
  if (pairs.empty()) pairs.emplace_back(0, 1);

  // Per-pair renewal: events per node per day -> events per pair per day.
  const double pair_rate =
      mean_daily_contacts * static_cast<double>(n_nodes) / (2.0 * static_cast<double>(pairs.size()));
  const double scale = 1.0 / (pair_rate * burstiness);  // mean gap = 1/pair_rate days

  for (const auto& [a, b] : pairs) {
    const std::uint64_t pair_key =
        (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
    RngEngine eng(splitmix64(seed ^ splitmix64(pair_key)));
    double t = 0.0;
    for (;;) {
      t += gamma_draw(eng, burstiness, scale);
      if (!(t < horizon_days)) break;
      EventRecord rec;
      rec.time = std::llround(t * 86400.0);
      const bool forward = bernoulli(eng, 0.5);
      rec.from = forward ? a : b;
      rec.to = forward ? b : a;
      rec.kind = bernoulli(eng, 0.9) ? EventKind::message : EventKind::call;
      out.push_back(rec);
    }
  }

  std::sort(out.begin(), out.end(), [](const EventRecord& x, const EventRecord& y) {
    return std::tie(x.time, x.from, x.to, x.kind) < std::tie(y.time, y.from, y.to, y.kind);
  });
  return out;
}

}  // namespace netepi
