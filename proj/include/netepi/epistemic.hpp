#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "netepi/graph.hpp"
#include "netepi/rng.hpp"

namespace netepi {

enum class Action : std::uint8_t { alpha, beta };
enum class ConsensusLabel : std::uint8_t { none, correct, incorrect };

std::string_view consensus_name(ConsensusLabel label);

// Two-armed bandit: Alpha pays off with probability 0.5, Beta with
// 0.5 + epsilon. The sign of epsilon selects the true world state.
struct BanditEnvironment {
  double epsilon = 0.0;

  double p_alpha() const { return 0.5; }
  double p_beta() const { return 0.5 + epsilon; }
  // Log-likelihood-ratio contributed by one extra Beta success over a
  // failure: ln((0.5+eps)/(0.5-eps)). One Bayesian update moves an agent's
  // log-odds by (2k - n) times this step.
  double log_odds_step() const;
  void validate() const;  // requires 0 < |epsilon| < 0.5
};

struct Evidence {
  std::int64_t n = 0;  // Beta trials
  std::int64_t k = 0;  // successes
  std::int64_t net() const { return 2 * k - n; }
  friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct EpistemicParams {
  std::int64_t trials_n = 0;       // experiments per Beta-voter per iteration
  double upper_threshold = 0.99;   // correct consensus: all actives above
  double lower_threshold = 0.5;    // incorrect consensus: all actives at or below
  std::size_t max_iterations = 0;  // iteration budget for static runs

  void validate() const;
};

// Log-odds saturate here; |log_odds| = 745 is already far beyond any
// representable odds ratio, so the clamp only guards against inf.
inline constexpr double kLogOddsClamp = 745.0;

double logit(double c);     // ln(c / (1-c))
double logistic(double l);  // evaluated stably on both tails

// Credence is stored as an initial log-odds plus the integer net evidence
// (sum of 2k - n over all absorbed updates). The posterior log-odds is
// init + net * step, so pooling evidence and updating sequentially agree
// bit-for-bit — integer addition is exact where repeated double addition
// would not be.
struct AgentState {
  NodeId id = 0;
  double init_log_odds = 0.0;
  std::int64_t net_evidence = 0;
  bool active = true;

  double log_odds(double step) const {
    const double l = init_log_odds + step * static_cast<double>(net_evidence);
    if (l > kLogOddsClamp) return kLogOddsClamp;
    if (l < -kLogOddsClamp) return -kLogOddsClamp;
    return l;
  }
  double credence(double step) const { return logistic(log_odds(step)); }
  void absorb(const Evidence& ev) { net_evidence += ev.net(); }
};

// Uniform(0,1) initial credences, active by default. Draws one uniform per
// agent from `eng`, in id order.
std::vector<AgentState> init_credences(const std::vector<NodeId>& ids, RngEngine& eng);

// Fixed initial credences (fixtures and scripted walkthroughs).
std::vector<AgentState> agents_from_credences(const std::vector<NodeId>& ids,
                                              const std::vector<double>& credences);

// Alpha when credence <= 0.5, Beta above.
Action choose_action(double credence);

// k ~ Binomial(n, 0.5 + epsilon). Only Beta-voters experiment.
Evidence run_trials(const BanditEnvironment& env, std::int64_t n, RngEngine& eng);

Evidence pool_evidence(const std::optional<Evidence>& self, std::span<const Evidence> neighbors);

// Bayesian posterior for pooled evidence, computed in log-odds form:
// logit(c') = logit(c) + (2k - n) * ln((0.5+eps)/(0.5-eps)), clamped.
double update_log_odds(double log_odds, const Evidence& ev, double epsilon);
double update_credence(double c, const Evidence& ev, double epsilon);

// Over ACTIVE agents only: correct when every credence exceeds the upper
// threshold, incorrect when none exceeds the lower one, none otherwise or
// when nobody is active.
ConsensusLabel check_consensus(std::span<const AgentState> agents, const EpistemicParams& params,
                               double step);

}  // namespace netepi
