#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "netepi/epistemic.hpp"
#include "netepi/rng.hpp"

using namespace netepi;

namespace {

// Independent reference for the Bayesian update, evaluated directly in
// probability space: c' = c*B / (c*B + (1-c)*A) with B = (0.5+eps)^k *
// (0.5-eps)^(n-k) and A its mirror. Valid only while the powers stay
// representable; n <= 100 keeps them far from underflow.
double direct_posterior(double c, std::int64_t n, std::int64_t k, double eps) {
  const double b = std::pow(0.5 + eps, static_cast<double>(k)) *
                   std::pow(0.5 - eps, static_cast<double>(n - k));
  const double a = std::pow(0.5 - eps, static_cast<double>(k)) *
                   std::pow(0.5 + eps, static_cast<double>(n - k));
  return c * b / (c * b + (1.0 - c) * a);
}

}  // namespace

TEST_CASE("bandit environment arms and validation") {
  BanditEnvironment env{0.05};
  CHECK(env.p_alpha() == 0.5);
  CHECK(env.p_beta() == 0.55);
  CHECK(env.log_odds_step() == doctest::Approx(0.20067069546215124).epsilon(1e-15));
  CHECK_NOTHROW(env.validate());
  CHECK_NOTHROW(BanditEnvironment{-0.05}.validate());
  CHECK_THROWS_AS(BanditEnvironment{0.0}.validate(), std::invalid_argument);
  CHECK_THROWS_AS(BanditEnvironment{0.5}.validate(), std::invalid_argument);
  CHECK_THROWS_AS(BanditEnvironment{-0.5}.validate(), std::invalid_argument);
}

TEST_CASE("action choice: boundary credence 0.5 plays the known arm") {
  CHECK(choose_action(0.5) == Action::alpha);
  CHECK(choose_action(0.51) == Action::beta);
  CHECK(choose_action(0.0001) == Action::alpha);
  CHECK(choose_action(0.9999) == Action::beta);
}

TEST_CASE("initial credences are uniform in the open interval") {
  RngEngine eng(8);
  std::vector<NodeId> ids(10000);
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<NodeId>(i);
  const auto agents = init_credences(ids, eng);
  REQUIRE(agents.size() == 10000);

  double sum = 0.0;
  const double step = 0.1;  // arbitrary; net evidence is zero everywhere
  for (const auto& a : agents) {
    const double c = a.credence(step);
    CHECK(c > 0.0);
    CHECK(c < 1.0);
    CHECK(a.net_evidence == 0);
    sum += c;
  }
  const double mean = sum / 10000.0;
  CHECK(mean >= 0.49);  // uniform mean 0.5, sd/sqrt(n) ~ 0.0029: 5-sigma band
  CHECK(mean <= 0.51);

  RngEngine eng2(8);
  const auto again = init_credences(ids, eng2);
  for (std::size_t i = 0; i < ids.size(); ++i)
    CHECK(again[i].init_log_odds == agents[i].init_log_odds);
}

TEST_CASE("run_trials draws Binomial(n, 0.5 + eps)") {
  const BanditEnvironment env{0.05};
  RngEngine eng(17);
  CHECK(run_trials(env, 0, eng) == Evidence{0, 0});

  std::int64_t total = 0;
  for (int i = 0; i < 100000; ++i) {
    const Evidence ev = run_trials(env, 10, eng);
    CHECK(ev.n == 10);
    CHECK(ev.k >= 0);
    CHECK(ev.k <= 10);
    total += ev.k;
  }
  const double mean_k = static_cast<double>(total) / 100000.0;
  CHECK(mean_k >= 5.45);  // mean 5.5, 5-sigma band over 100k draws
  CHECK(mean_k <= 5.55);
}

TEST_CASE("pool_evidence sums trials and successes") {
  const std::vector<Evidence> two{{10, 6}, {10, 7}};
  CHECK(pool_evidence(std::nullopt, two) == Evidence{20, 13});
  CHECK(pool_evidence(Evidence{10, 4}, {}) == Evidence{10, 4});
  CHECK(pool_evidence(std::nullopt, {}) == Evidence{0, 0});
}

TEST_CASE("update_credence: fixed points and the frozen oracle value") {
  // balanced evidence leaves the prior bit-identical
  CHECK(update_credence(0.5, {10, 5}, 0.05) == 0.5);
  CHECK(update_credence(0.8, {0, 0}, 0.05) == 0.8);
  CHECK(update_credence(0.123456789, {4, 2}, 0.3) == 0.123456789);
  // one 6-of-10 result: 0.3025/0.505
  CHECK(update_credence(0.5, {10, 6}, 0.05) ==
        doctest::Approx(0.599009900990099).epsilon(1e-14));

  CHECK_THROWS_AS(update_credence(0.0, {10, 6}, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(update_credence(1.0, {10, 6}, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(update_credence(0.5, {10, 11}, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(update_credence(0.5, {10, -1}, 0.05), std::invalid_argument);
}

TEST_CASE("log-odds update matches the direct Bayesian form") {
  const double eps_grid[] = {0.0001, 0.0005, 0.001, 0.005, 0.01, 0.02, 0.03, 0.04, 0.05};
  RngEngine eng(271828);
  for (int i = 0; i < 10000; ++i) {
    const double c = 0.001 + 0.998 * uniform01(eng);
    const std::int64_t n = static_cast<std::int64_t>(uniform_below(eng, 101));
    const std::int64_t k = static_cast<std::int64_t>(uniform_below(eng, n + 1));
    const double eps = eps_grid[uniform_below(eng, 9)];

    const double got = update_credence(c, {n, k}, eps);
    const double want = direct_posterior(c, n, k, eps);
    CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
  }
}

TEST_CASE("sequential and pooled updates agree exactly") {
  RngEngine eng(314159);
  for (int i = 0; i < 10000; ++i) {
    const double l0 = -30.0 + 60.0 * uniform01(eng);
    const double eps = 0.001 + 0.098 * uniform01(eng);
    const std::int64_t n1 = static_cast<std::int64_t>(uniform_below(eng, 50));
    const std::int64_t k1 = static_cast<std::int64_t>(uniform_below(eng, n1 + 1));
    const std::int64_t n2 = static_cast<std::int64_t>(uniform_below(eng, 50));
    const std::int64_t k2 = static_cast<std::int64_t>(uniform_below(eng, n2 + 1));

    AgentState sequential{0, l0, 0, true};
    sequential.absorb({n1, k1});
    sequential.absorb({n2, k2});
    AgentState pooled{0, l0, 0, true};
    const Evidence neighbor[] = {Evidence{n2, k2}};
    pooled.absorb(pool_evidence(Evidence{n1, k1}, neighbor));

    const double step = std::log((0.5 + eps) / (0.5 - eps));
    CHECK(sequential.log_odds(step) == pooled.log_odds(step));  // exact
    CHECK(sequential.net_evidence == (2 * k1 - n1) + (2 * k2 - n2));
  }
}

TEST_CASE("posterior symmetry: mirrored prior and evidence") {
  RngEngine eng(161803);
  for (int i = 0; i < 2000; ++i) {
    const double c = 0.01 + 0.98 * uniform01(eng);
    const std::int64_t n = static_cast<std::int64_t>(uniform_below(eng, 60));
    const std::int64_t k = static_cast<std::int64_t>(uniform_below(eng, n + 1));
    const double eps = 0.001 + 0.098 * uniform01(eng);
    const double lhs = update_credence(c, {n, k}, eps);
    const double rhs = 1.0 - update_credence(1.0 - c, {n, n - k}, eps);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("posterior is strictly monotone in successes and prior") {
  for (std::int64_t k = 0; k < 10; ++k)
    CHECK(update_credence(0.4, {10, k}, 0.05) < update_credence(0.4, {10, k + 1}, 0.05));
  for (double c = 0.1; c < 0.9; c += 0.1)
    CHECK(update_credence(c, {10, 6}, 0.05) < update_credence(c + 0.05, {10, 6}, 0.05));
}

TEST_CASE("log-odds saturate instead of overflowing") {
  const double l = update_log_odds(700.0, {1000000, 1000000}, 0.05);
  CHECK(l == kLogOddsClamp);
  // at the positive clamp exp(-l) is subnormal and the credence rounds to
  // exactly 1; the negative tail keeps its subnormal distance from 0
  CHECK(logistic(l) == 1.0);
  CHECK(logistic(-kLogOddsClamp) > 0.0);
  CHECK(logistic(-kLogOddsClamp) < 1e-300);
  CHECK(std::isfinite(update_log_odds(-700.0, {1000000, 0}, 0.05)));

  AgentState a{0, 0.0, 0, true};
  a.absorb({4000000, 4000000});
  CHECK(a.log_odds(0.2) == kLogOddsClamp);
  CHECK(a.credence(0.2) == 1.0);
}

TEST_CASE("logit and logistic invert each other") {
  for (double c : {1e-12, 0.001, 0.3, 0.5, 0.7, 0.999, 1.0 - 1e-12})
    CHECK(logistic(logit(c)) == doctest::Approx(c).epsilon(1e-12));
}

TEST_CASE("consensus over active agents only") {
  EpistemicParams params;
  params.trials_n = 10;
  params.max_iterations = 100;
  const double step = 0.2;

  auto agents_at = [&](std::vector<double> credences, std::vector<bool> active) {
    std::vector<AgentState> agents;
    for (std::size_t i = 0; i < credences.size(); ++i)
      agents.push_back({static_cast<NodeId>(i), logit(credences[i]), 0, active[i]});
    return agents;
  };

  CHECK(check_consensus(agents_at({0.995, 0.9999}, {true, true}), params, step) ==
        ConsensusLabel::correct);
  CHECK(check_consensus(agents_at({0.3, 0.5}, {true, true}), params, step) ==
        ConsensusLabel::incorrect);
  // inactive high-credence agent is ignored; the actives are mixed
  CHECK(check_consensus(agents_at({0.3, 0.7, 0.999}, {true, true, false}), params, step) ==
        ConsensusLabel::none);
  // no actives at all -> none, regardless of credences
  CHECK(check_consensus(agents_at({0.999, 0.9999}, {false, false}), params, step) ==
        ConsensusLabel::none);
  // boundary: exactly at the upper threshold is NOT correct
  CHECK(check_consensus(agents_at({0.99}, {true}), params, step) == ConsensusLabel::none);
  // boundary: exactly at 0.5 is still incorrect-consensus territory
  CHECK(check_consensus(agents_at({0.5, 0.2}, {true, true}), params, step) ==
        ConsensusLabel::incorrect);
}

TEST_CASE("epistemic parameter validation") {
  EpistemicParams p{10, 0.99, 0.5, 100};
  CHECK_NOTHROW(p.validate());
  auto bad = [](EpistemicParams q) { CHECK_THROWS_AS(q.validate(), std::invalid_argument); };
  bad({0, 0.99, 0.5, 100});    // no trials
  bad({10, 0.99, 0.4, 100});   // lower below 0.5
  bad({10, 0.5, 0.99, 100});   // thresholds swapped
  bad({10, 1.0, 0.5, 100});    // upper not below 1
  bad({10, 0.99, 0.5, 0});     // no iterations
}

TEST_CASE("agents_from_credences validates the open interval") {
  const std::vector<NodeId> one{0};
  const std::vector<NodeId> two{0, 1};
  CHECK_THROWS_AS(agents_from_credences(one, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(agents_from_credences(one, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(agents_from_credences(two, {0.5}), std::invalid_argument);  // size mismatch
  const auto agents = agents_from_credences({3, 9}, {0.25, 0.75});
  REQUIRE(agents.size() == 2);
  CHECK(agents[0].id == 3);
  CHECK(agents[0].credence(0.1) == doctest::Approx(0.25).epsilon(1e-14));
}
