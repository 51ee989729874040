// Shared test fixtures: the 4-node walkthrough stream, the two-component
// stream, and small subprocess/tempdir helpers for CLI-level tests.
#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "netepi/cogsnet.hpp"
#include "netepi/events.hpp"
#include "netepi/graph.hpp"

namespace netepi::testing {

// Trace-model parameters used throughout: peak 0.3, cut-off 0.2, one-hour
// unit, decay tuned for a 3-day single-event lifetime.
inline CogsnetParams reference_params() {
  CogsnetParams p;
  p.mu = 0.3;
  p.theta = 0.2;
  p.lambda = 0.00563145983483561;
  p.forgetting = Forgetting::exponential;
  p.unit_hours = 1.0;
  return p;
}

inline EventRecord ev(double hours, NodeId from, NodeId to,
                      EventKind kind = EventKind::message) {
  return EventRecord{static_cast<std::int64_t>(hours * 3600.0), from, to, kind};
}

// Four nodes, seven events. Relative to the first event (hour 0):
//   pairs (0,1), (0,2), (2,3) start together; (0,1) and (0,2) are renewed at
//   hour 78 (just after their old traces expired), (1,3) appears at 88 and
//   (2,3) is renewed at 98.
// Snapshots: hour 12 -> {01,02,23}; hour 84 -> {01,02} with node 3 isolated
// (the 23 trace died); hour 108 -> {01,02,13,23}.
inline std::vector<EventRecord> walkthrough_events() {
  return {
      ev(0, 0, 1), ev(0, 0, 2), ev(0, 2, 3),
      ev(78, 1, 0), ev(78, 2, 0),
      ev(88, 1, 3),
      ev(98, 3, 2, EventKind::call),
  };
}

inline constexpr double kWalkT1 = 12.0;
inline constexpr double kWalkT2 = 84.0;
inline constexpr double kWalkT3 = 108.0;

// Two permanently disconnected dyads (0,1) and (2,3), each renewed every 48
// hours for 30 days so both edges stay alive at every daily snapshot.
inline std::vector<EventRecord> two_component_events(double days = 30.0) {
  std::vector<EventRecord> events;
  for (double h = 0.0; h <= days * 24.0; h += 48.0) {
    events.push_back(ev(h, 0, 1));
    events.push_back(ev(h, 2, 3));
  }
  return events;
}

inline std::vector<std::pair<NodeId, NodeId>> edge_pairs(const Graph& g) {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(g.edge_count());
  for (const auto& e : g.edges()) out.emplace_back(e.a, e.b);
  return out;
}

// ---- process helpers ----------------------------------------------------

struct CmdResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr interleaved
};

inline CmdResult run_cmd(const std::string& cmd) {
  CmdResult res;
  FILE* pipe = ::popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return res;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof(buf), pipe)) > 0) res.output.append(buf, got);
  const int status = ::pclose(pipe);
  if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
  return res;
}

inline std::string netepi_bin() {
  const char* bin = std::getenv("NETEPI_BIN");
  return bin ? bin : "";
}

class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 gen(std::random_device{}());
    const auto base = std::filesystem::temp_directory_path();
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto candidate = base / ("netepi_test_" + std::to_string(gen()));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = std::move(candidate);
        return;
      }
    }
    throw std::runtime_error("cannot create temp directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& name = "") const {
    return name.empty() ? path_.string() : (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace netepi::testing
