#include <gtest/gtest.h>

#include <cmath>

#include "dyadic/block_mdp.hpp"
#include "dyadic/errors.hpp"
#include "dyadic/evaluation.hpp"
#include "dyadic/maze.hpp"
#include "oracles.hpp"

using namespace dyadic;

namespace {

BlockMDP constant_reward_mdp(int H, int S, int A, double r, Rng& rng) {
  BlockMDP m = oracle::random_block_mdp(rng, S, A, H);
  BlockMDP out(H, S, A);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        const auto nx = m.next(h, s, a);
        out.set(h, s, a, r, std::vector<Successor>(nx.begin(), nx.end()));
      }
  return out;
}

}  // namespace

TEST(OptimalValues, ZeroRewardsGiveZero) {
  Rng rng(1);
  const BlockMDP m = constant_reward_mdp(3, 4, 2, 0.0, rng);
  for (double v : optimal_block_values(m)) EXPECT_EQ(v, 0.0);
}

TEST(OptimalValues, TwoPeriodsMatchEnumeration) {
  Rng rng(2);
  for (int c = 0; c < 20; ++c) {
    const BlockMDP m = oracle::random_block_mdp(rng, 3, 2, 2);
    const auto dp = optimal_block_values(m);
    const auto brute = oracle::enumerate_optimal(m);
    for (std::size_t s = 0; s < dp.size(); ++s) EXPECT_NEAR(dp[s], brute[s], 1e-12);
  }
}

TEST(OptimalValues, SingleDecision) {
  BlockMDP m(1, 2, 3);
  const double r[2][3] = {{0.1, 0.7, 0.3}, {0.9, 0.2, 0.4}};
  for (int s = 0; s < 2; ++s)
    for (int a = 0; a < 3; ++a) m.set(0, s, a, r[s][a], {{s, 1.0}});
  EXPECT_EQ(optimal_block_values(m), (std::vector<double>{0.7, 0.9}));
}

TEST(OptimalValues, RejectsMalformedRows) {
  // Rows are checked when the model is solved, not when each row is set.
  BlockMDP m(1, 2, 1);
  m.set(0, 0, 0, 0.0, {{0, 1.0}});
  m.set(0, 1, 0, 0.0, {{0, 0.5}});
  EXPECT_THROW(optimal_block_values(m), InvalidInput);
  m.set(0, 1, 0, 0.0, {{2, 1.0}});
  EXPECT_THROW(optimal_block_values(m), InvalidInput);
  m.set(0, 1, 0, NAN, {{1, 1.0}});
  EXPECT_THROW(optimal_block_values(m), InvalidInput);
  m.set(0, 1, 0, 0.0, {{1, 1.0}});
  EXPECT_NO_THROW(optimal_block_values(m));
  EXPECT_THROW(m.set(1, 0, 0, 0.0, {{0, 1.0}}), InvalidInput);
  BlockMDP empty(1, 1, 1);
  EXPECT_THROW(optimal_block_values(empty), InvalidInput);
  EXPECT_THROW(BlockMDP(0, 1, 1), InvalidInput);
}

TEST(PolicyValue, GreedyAttainsOptimum) {
  Rng rng(3);
  for (int c = 0; c < 20; ++c) {
    const BlockMDP m = oracle::random_block_mdp(rng, 4, 3, 4);
    const auto best = optimal_block_values(m);
    const auto v = policy_block_value(m, greedy_policy(m));
    for (std::size_t s = 0; s < v.size(); ++s) EXPECT_EQ(v[s], best[s]);
  }
}

TEST(PolicyValue, ConstantRewardsAreViewIndependent) {
  Rng rng(4);
  const BlockMDP m = constant_reward_mdp(5, 3, 2, 1.0, rng);
  DeterministicPolicy a(5, std::vector<int>(3, 0)), b(5, std::vector<int>(3, 1));
  for (double v : policy_block_value(m, a)) EXPECT_DOUBLE_EQ(v, 5.0);
  for (double v : policy_block_value(m, b)) EXPECT_DOUBLE_EQ(v, 5.0);
}

TEST(PolicyValue, MatchesMonteCarlo) {
  Rng rng(5);
  const BlockMDP m = oracle::random_block_mdp(rng, 3, 2, 4);
  DeterministicPolicy pi(4, std::vector<int>(3));
  for (auto& row : pi)
    for (int& a : row) a = bernoulli_half(rng);
  const auto exact = policy_block_value(m, pi);
  for (int s = 0; s < 3; ++s) {
    const auto mc = oracle::monte_carlo_value(m, pi, s, 100000, rng);
    EXPECT_LT(std::abs(mc.mean - exact[static_cast<std::size_t>(s)]), 3 * mc.se + 1e-12) << "state " << s;
  }
}

TEST(PolicyValue, RejectsIncompletePolicies) {
  Rng rng(6);
  const BlockMDP m = oracle::random_block_mdp(rng, 2, 2, 2);
  EXPECT_THROW(policy_block_value(m, DeterministicPolicy(1, std::vector<int>(2, 0))), InvalidInput);
  EXPECT_THROW(policy_block_value(m, DeterministicPolicy(2, std::vector<int>(1, 0))), InvalidInput);
  EXPECT_THROW(policy_block_value(m, DeterministicPolicy(2, std::vector<int>(2, 5))), InvalidInput);
  const StochasticPolicy bad(2, std::vector<std::vector<double>>(2, std::vector<double>{0.3, 0.3}));
  EXPECT_THROW(policy_block_value(m, bad), InvalidInput);
}

TEST(MazeBlockMdp, OracleMatchesSimulatedEnvironment) {
  // The enumerated block MDP must agree with rolling out the real environment
  // under the same (greedy) policy.
  for (MazeVariant v : {MazeVariant::kToy1, MazeVariant::kToy2}) {
    const MazeEnvConfig cfg = maze_config(v);
    const MazeBlockMDP mb = build_maze_block_mdp(cfg);
    EXPECT_EQ(mb.mdp.horizon(), cfg.periods + 1);
    EXPECT_EQ(mb.mdp.states(), 130);
    const DeterministicPolicy pi = greedy_policy(mb.mdp);
    const auto values = optimal_block_values(mb.mdp);
    MazeEnvironment env(cfg);
    Rng rng(7);
    env.begin_episode(rng);
    double sum[2] = {0, 0}, sq[2] = {0, 0};
    int n[2] = {0, 0};
    for (int b = 0; b < 40000; ++b) {
      if (b % cfg.blocks == 0) env.begin_episode(rng);
      const int w = static_cast<int>(env.begin_block(rng)[0]);
      const int maze = pi[0][static_cast<std::size_t>(MazeBlockMDP::opening_state(w))];
      env.set_high_action(maze);
      double total = 0.0;
      for (int h = 1; h <= cfg.periods; ++h) {
        const Cell c = env.position();
        const int s = mb.composite_state(w, maze, c.x * 4 + c.y);
        total += env.step(pi[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)], rng);
      }
      sum[w] += total;
      sq[w] += total * total;
      ++n[w];
    }
    for (int w = 0; w < 2; ++w) {
      const double mean = sum[w] / n[w];
      const double se = std::sqrt((sq[w] / n[w] - mean * mean) / n[w]);
      EXPECT_LT(std::abs(mean - values[static_cast<std::size_t>(w)]), 4 * se) << maze_variant_name(v) << " weather " << w;
    }
  }
  EXPECT_THROW(build_maze_block_mdp(maze_config(MazeVariant::kToy4)), ConfigError);
}

TEST(MazeOracleValues, UniformPolicyIsBelowOptimal) {
  const MazeEnvConfig cfg = maze_config(MazeVariant::kToy1);
  const MazeFeatures fs(8, 4);
  const MazeOracle oracle(cfg, fs);
  for (int w : {kGoodWeather, kBadWeather}) {
    const OracleValues v = oracle.evaluate(w, BlockPolicy{true, {0.5, 0.5}, {}});
    EXPECT_EQ(v.optimal, oracle.optimal(w));
    EXPECT_GT(v.gap(), 0.0);
  }
  // Good weather moves more reliably, so it is worth more.
  EXPECT_GT(oracle.optimal(kGoodWeather), oracle.optimal(kBadWeather));
}

TEST(MazeOracleValues, WeightsEncodingTheOptimumHaveNoGap) {
  // Write the optimal Q-values straight into one-hot weights.
  const MazeEnvConfig cfg = maze_config(MazeVariant::kToy2);
  const MazeFeatures fs(8, 4);
  const MazeOracle oracle(cfg, fs);
  const BlockMDP& m = oracle.block_mdp().mdp;
  const ValueTable V = optimal_values(m);
  ThetaSchedule theta(static_cast<std::size_t>(cfg.periods), std::vector<double>(fs.phi_dimension(), 0.0));
  for (int h = 1; h <= cfg.periods; ++h)
    for (int w = 0; w < 2; ++w)
      for (int maze = 0; maze < 2; ++maze)
        for (int cell = 0; cell < 32; ++cell)
          for (int a = 0; a < 2; ++a) {
            const int s = oracle.block_mdp().composite_state(w, maze, cell);
            double q = m.reward(h, s, a);
            if (h + 1 < m.horizon())
              for (const auto& nx : m.next(h, s, a))
                q += nx.prob * V[static_cast<std::size_t>(h + 1)][static_cast<std::size_t>(nx.state)];
            const std::vector<double> high{double(w)}, low{double(cell / 4), double(cell % 4)};
            const auto x = fs.phi(high, maze, low, a);
            theta[static_cast<std::size_t>(h - 1)][x.offset()] = q;
          }
  for (int w = 0; w < 2; ++w) {
    const auto greedy = greedy_policy(m);
    std::vector<double> probs(2, 0.0);
    probs[static_cast<std::size_t>(greedy[0][static_cast<std::size_t>(w)])] = 1.0;
    const OracleValues v = oracle.evaluate(w, BlockPolicy{false, probs, theta});
    EXPECT_NEAR(v.gap(), 0.0, 1e-12) << "weather " << w;
  }
}

TEST(Regret, Curves) {
  RunHistory h;
  for (double gap : {0.5, 0.25}) {
    BlockRecord r;
    r.oracle = OracleValues{1.0, 1.0 - gap};
    h.records.push_back(r);
  }
  EXPECT_EQ(cumulative_regret(h), (std::vector<double>{0.5, 0.75}));
  for (auto& r : h.records) r.oracle = OracleValues{2.0, 2.0};
  EXPECT_EQ(cumulative_regret(h), (std::vector<double>{0.0, 0.0}));
  h.records[1].oracle.reset();
  EXPECT_THROW(cumulative_regret(h), InvalidInput);
}

TEST(Theory, Schedule) {
  const Hyper h = theory_hyperparams(2, 2, 2, 1);
  EXPECT_NEAR(h.lambda, 8.0 * std::log(16.0), 1e-12);
  EXPECT_NEAR(h.sigma * std::sqrt(h.lambda), 1.0, 1e-15);
  EXPECT_EQ(theory_hyperparams(3, 5, 2, 0).lambda, theory_hyperparams(3, 5, 2, 1).lambda);
  double prev = 0.0;
  for (std::int64_t n = 1; n < 1000; n *= 3) {
    const Hyper t = theory_hyperparams(8, 130, 2, n);
    EXPECT_GE(t.lambda, prev);
    EXPECT_NEAR(t.sigma * std::sqrt(t.lambda), 1.0, 1e-15);
    prev = t.lambda;
  }
  EXPECT_THROW(theory_hyperparams(0, 2, 2, 1), InvalidInput);
  EXPECT_THROW(theory_hyperparams(2, -1, 2, 1), InvalidInput);
}

TEST(Aggregate, Examples) {
  const auto one = aggregate({{1.0, 2.0, 3.0}});
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(one[i].mean, i + 1.0);
    EXPECT_EQ(one[i].se, 0.0);
  }
  const auto sym = aggregate({{1.0, -2.0}, {-1.0, 2.0}});
  EXPECT_EQ(sym[0].mean, 0.0);
  EXPECT_EQ(sym[1].mean, 0.0);
  EXPECT_THROW(aggregate({}), InvalidInput);
  EXPECT_THROW(aggregate({{1.0}, {1.0, 2.0}}), InvalidInput);
}

TEST(Aggregate, MatchesBruteForce) {
  Rng rng(8);
  std::normal_distribution<double> n;
  std::vector<std::vector<double>> reps(10, std::vector<double>(6));
  for (auto& r : reps)
    for (double& v : r) v = n(rng) * 3 + 1;
  const auto agg = aggregate(reps);
  for (std::size_t i = 0; i < 6; ++i) {
    long double s = 0;
    for (const auto& r : reps) s += r[i];
    const long double mean = s / 10;
    long double ss = 0;
    for (const auto& r : reps) ss += (r[i] - mean) * (r[i] - mean);
    const double se = static_cast<double>(std::sqrt(ss / 9 / 10));
    EXPECT_NEAR(agg[i].mean, static_cast<double>(mean), 1e-12);
    EXPECT_NEAR(agg[i].se, se, 1e-12);
  }
}

TEST(ChiSquare, KnownTable) {
  // 2x2 table with a textbook statistic.
  const auto r = chi_square_independence({{10, 20}, {30, 40}});
  EXPECT_EQ(r.dof, 1);
  EXPECT_NEAR(r.statistic, 0.79365079365079361, 1e-12);
  EXPECT_NEAR(r.p_value, 0.37293, 1e-4);
  const auto degenerate = chi_square_independence({{5, 0}, {7, 0}});
  EXPECT_EQ(degenerate.dof, 0);
  EXPECT_EQ(degenerate.p_value, 1.0);
}
