#include "netepi/epistemic.hpp"

#include <cmath>
#include <stdexcept>

namespace netepi {

std::string_view consensus_name(ConsensusLabel label) {
  switch (label) {
    case ConsensusLabel::correct: return "correct";
    case ConsensusLabel::incorrect: return "incorrect";
    default: return "none";
  }
}

double BanditEnvironment::log_odds_step() const {
  return std::log((0.5 + epsilon) / (0.5 - epsilon));
}

void BanditEnvironment::validate() const {
  if (!(epsilon != 0.0 && epsilon > -0.5 && epsilon < 0.5))
    throw std::invalid_argument("bandit: epsilon must satisfy 0 < |epsilon| < 0.5");
}

void EpistemicParams::validate() const {
  if (trials_n < 1) throw std::invalid_argument("epistemic: trials_n must be >= 1");
  if (!(lower_threshold >= 0.5 && lower_threshold < upper_threshold && upper_threshold < 1.0))
    throw std::invalid_argument("epistemic: need 0.5 <= lower_threshold < upper_threshold < 1");
  if (max_iterations < 1) throw std::invalid_argument("epistemic: max_iterations must be >= 1");
}

double logit(double c) { return std::log(c) - std::log1p(-c); }

double logistic(double l) {
  if (l >= 0.0) return 1.0 / (1.0 + std::exp(-l));
  const double e = std::exp(l);
  return e / (1.0 + e);
}

std::vector<AgentState> init_credences(const std::vector<NodeId>& ids, RngEngine& eng) {
  std::vector<AgentState> agents;
  agents.reserve(ids.size());
  for (const NodeId id : ids) agents.push_back({id, logit(uniform_open01(eng)), 0, true});
  return agents;
}

std::vector<AgentState> agents_from_credences(const std::vector<NodeId>& ids,
                                              const std::vector<double>& credences) {
  if (ids.size() != credences.size())
    throw std::invalid_argument("agents_from_credences: size mismatch");
  std::vector<AgentState> agents;
  agents.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!(credences[i] > 0.0 && credences[i] < 1.0))
      throw std::invalid_argument("agents_from_credences: credence must be in (0,1)");
    agents.push_back({ids[i], logit(credences[i]), 0, true});
  }
  return agents;
}

Action choose_action(double credence) {
  return credence > 0.5 ? Action::beta : Action::alpha;
}

Evidence run_trials(const BanditEnvironment& env, std::int64_t n, RngEngine& eng) {
  if (n < 0) throw std::invalid_argument("run_trials: n must be >= 0");
  return Evidence{n, binomial(eng, n, env.p_beta())};
}

Evidence pool_evidence(const std::optional<Evidence>& self, std::span<const Evidence> neighbors) {
  Evidence total = self.value_or(Evidence{});
  for (const auto& ev : neighbors) {
    total.n += ev.n;
    total.k += ev.k;
  }
  return total;
}

double update_log_odds(double log_odds, const Evidence& ev, double epsilon) {
  const double step = std::log((0.5 + epsilon) / (0.5 - epsilon));
  double l = log_odds + static_cast<double>(ev.net()) * step;
  if (l > kLogOddsClamp) l = kLogOddsClamp;
  if (l < -kLogOddsClamp) l = -kLogOddsClamp;
  return l;
}

double update_credence(double c, const Evidence& ev, double epsilon) {
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("update_credence: c must be in (0,1)");
  if (ev.k < 0 || ev.k > ev.n) throw std::invalid_argument("update_credence: need 0 <= k <= n");
  if (ev.net() == 0) return c;  // successes and failures cancel exactly
  return logistic(update_log_odds(logit(c), ev, epsilon));
}

ConsensusLabel check_consensus(std::span<const AgentState> agents, const EpistemicParams& params,
                               double step) {
  bool any_active = false;
  bool all_above = true;
  bool all_at_or_below = true;
  for (const auto& a : agents) {
    if (!a.active) continue;
    any_active = true;
    const double c = a.credence(step);
    if (c <= params.upper_threshold) all_above = false;
    if (c > params.lower_threshold) all_at_or_below = false;
    if (!all_above && !all_at_or_below) return ConsensusLabel::none;
  }
  if (!any_active) return ConsensusLabel::none;
  if (all_above) return ConsensusLabel::correct;
  if (all_at_or_below) return ConsensusLabel::incorrect;
  return ConsensusLabel::none;
}

}  // namespace netepi
