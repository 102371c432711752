#include <gtest/gtest.h>

#include <cmath>

#include "dyadic/agents.hpp"
#include "dyadic/errors.hpp"
#include "dyadic/maze.hpp"

using namespace dyadic;

namespace {

// phi = one-hot over (low state, low action); psi = one-hot over (high state, high action).
class TinyFeatures final : public FeatureSpace {
 public:
  TinyFeatures(int states, int actions) : phi_{{states, actions}}, psi_{{2, 2}} {}
  using FeatureSpace::phi;
  std::size_t phi_dimension() const override { return phi_.dimension(); }
  FeatureVector phi(std::span<const double>, int, std::span<const double> low, int a_low) const override {
    return one_hot(phi_, {static_cast<int>(low[0]), a_low});
  }
  std::size_t psi_dimension() const override { return psi_.dimension(); }
  FeatureVector psi(std::span<const double> high, int a_high) const override {
    return one_hot(psi_, {static_cast<int>(high[0]), a_high});
  }

 private:
  SpaceSpec phi_, psi_;
};

// Two weathers, one low state, every reward zero.
class ZeroRewardEnv final : public DyadicEnvironment {
 public:
  int blocks() const override { return 3; }
  int periods() const override { return 2; }
  int high_actions() const override { return 2; }
  int low_actions() const override { return 2; }
  const FeatureSpace& features() const override { return fs_; }
  void begin_episode(Rng&) override {}
  std::vector<double> begin_block(Rng& rng) override { return {static_cast<double>(bernoulli_half(rng))}; }
  void set_high_action(int) override {}
  std::vector<double> low_state() const override { return {0.0}; }
  double step(int, Rng&) override { return 0.0; }

 private:
  TinyFeatures fs_{1, 2};
};

CompositeState state_at(int low) { return {{0.0}, 0, {static_cast<double>(low)}}; }

Transition tr(int low, int a, double r) { return {state_at(low), {0, a}, r}; }

}  // namespace

TEST(Rlsvi, EmptyDataDrawsFromPrior) {
  const TinyFeatures fs(1, 2);
  Rng a(5), b(5);
  const auto t1 = rlsvi_fit({}, fs, {1, 2}, {false, false}, 4.0, 1.0, a);
  const auto t2 = rlsvi_fit({}, fs, {1, 2}, {false, false}, 4.0, 1.0, b);
  ASSERT_EQ(t1.size(), 2u);
  EXPECT_EQ(t1, t2);
  for (const auto& th : t1)
    for (double v : th) EXPECT_TRUE(std::isfinite(v));
}

TEST(Rlsvi, HorizonOneIsPlainPosterior) {
  const TinyFeatures fs(2, 2);
  const std::vector<LowEpisode> eps{{tr(1, 0, 0.7)}};
  Rng a(9), b(9);
  const auto theta = rlsvi_fit(eps, fs, {1, 2}, {false}, 2.0, 0.5, a);
  RegressionData d(fs.phi_dimension());
  d.add(fs.phi(state_at(1), 0, 0), 0.7);
  EXPECT_EQ(theta.front(), sample_weights(posterior(d, 2.0, 0.5), b));
}

TEST(Rlsvi, RecoversDynamicProgrammingValues) {
  // One state, two actions, H = 2; rewards depend on (period, action) only.
  const double r[2][2] = {{0.2, 0.9}, {1.0, 0.4}};
  const TinyFeatures fs(1, 2);
  RlsviLearner learner(fs, {1, 2}, {false, false});
  Rng rng(11);
  for (int e = 0; e < 200; ++e) {
    const int a0 = bernoulli_half(rng), a1 = bernoulli_half(rng);
    learner.add_episode({tr(0, a0, r[0][a0]), tr(0, a1, r[1][a1])});
  }
  const double lambda = 1e-6;
  const Posterior q2 = posterior(learner.regression(1, {}), lambda, 1.0);
  EXPECT_NEAR(q2.mean()[0], 1.0, 0.05);
  EXPECT_NEAR(q2.mean()[1], 0.4, 0.05);
  const Posterior q1 = posterior(learner.regression(0, q2.mean()), lambda, 1.0);
  EXPECT_NEAR(q1.mean()[0], 0.2 + 1.0, 0.1);
  EXPECT_NEAR(q1.mean()[1], 0.9 + 1.0, 0.1);
}

TEST(Rlsvi, RejectsRaggedEpisodes) {
  const TinyFeatures fs(1, 2);
  Rng rng(1);
  EXPECT_THROW(rlsvi_fit({{tr(0, 0, 1.0)}}, fs, {1, 2}, {false, false}, 1, 1, rng), InvalidInput);
}

TEST(ThompsonSampling, MatchesPosteriorDraw) {
  const TinyFeatures fs(1, 2);
  Rng a(3), b(3);
  const auto prior = ts_fit({}, fs, 1.0, 1.0, a);
  EXPECT_EQ(prior, sample_weights(posterior(RegressionData(4), 1.0, 1.0), b));

  const std::vector<HighRecord> recs{{{0.0}, 0, 1.0, {0.0}}};
  const RegressionData d = ts_regression(recs, fs);
  const Posterior p = posterior(d, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(p.mean()[0], 0.5);
  EXPECT_DOUBLE_EQ(p.covariance(0, 0), 0.5);
  Rng c(4), e(4);
  EXPECT_EQ(ts_fit(recs, fs, 1.0, 1.0, c), sample_weights(p, e));
}

TEST(StationaryRlsvi, TerminalEpisodeIsPlainPosterior) {
  const TinyFeatures fs(2, 2);
  const std::vector<LowEpisode> eps{{tr(1, 1, 0.3)}};
  const std::vector<double> prev(fs.phi_dimension(), 5.0);
  Rng a(2), b(2);
  const auto theta = stationary_rlsvi_fit(eps, fs, {1, 2}, {false}, prev, 1.0, 1.0, 0.37, a);
  RegressionData d(fs.phi_dimension());
  d.add(fs.phi(state_at(1), 0, 1), 0.3);
  EXPECT_EQ(theta, sample_weights(posterior(d, 1.0, 1.0), b));
}

TEST(StationaryRlsvi, StackedRegressionMatchesBruteForce) {
  const TinyFeatures fs(3, 2);
  StationaryLearner learner(fs, {1, 2}, {false, false, false});
  const std::vector<LowEpisode> eps{
      {tr(0, 0, 1.0), tr(1, 1, 0.5), tr(2, 0, -0.2)},
      {tr(2, 1, 0.0), tr(2, 0, 0.3), tr(1, 1, 2.0)},
      {tr(1, 0, -1.0), tr(0, 0, 0.1), tr(0, 1, 0.4)},
  };
  for (const auto& e : eps) learner.add_episode(e);
  const std::vector<double> prev{0.1, 0.6, -0.3, 0.2, 0.9, 0.8};
  const double gamma = 0.5;
  const RegressionData d = learner.regression(prev, gamma);
  // Expected: every tuple in episode-major order, target r + gamma * max_a prev(s', a).
  std::vector<double> want_y;
  std::vector<FeatureVector> want_x;
  for (const auto& e : eps)
    for (std::size_t h = 0; h < e.size(); ++h) {
      want_x.push_back(fs.phi(e[h].state, 0, e[h].action.low));
      double y = e[h].reward;
      if (h + 1 < e.size()) {
        const int s = static_cast<int>(e[h + 1].state.low[0]);
        y += gamma * std::max(prev[static_cast<std::size_t>(s * 2)], prev[static_cast<std::size_t>(s * 2 + 1)]);
      }
      want_y.push_back(y);
    }
  ASSERT_EQ(d.rows.size(), want_x.size());
  for (std::size_t i = 0; i < want_x.size(); ++i) {
    EXPECT_EQ(d.rows[i], want_x[i]) << "row " << i;
    EXPECT_DOUBLE_EQ(d.targets[i], want_y[i]) << "row " << i;
  }
}

TEST(SelectAction, ZeroWeightsBreakTiesUniformly) {
  const TinyFeatures fs(1, 2);
  const std::vector<double> theta(2, 0.0);
  Rng rng(13);
  int count = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) count += select_action(theta, fs, state_at(0), false, {1, 2}, rng).low;
  EXPECT_NEAR(static_cast<double>(count) / n, 0.5, 0.03);
  Rng a(1), b(1);
  EXPECT_EQ(select_action(theta, fs, state_at(0), false, {1, 2}, a),
            select_action(theta, fs, state_at(0), false, {1, 2}, b));
}

TEST(SelectAction, StrictArgmax) {
  const TinyFeatures fs(1, 2);
  const std::vector<double> theta{1.0, 2.0};
  Rng rng(1);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(select_action(theta, fs, state_at(0), false, {1, 2}, rng).low, 1);
  EXPECT_THROW(select_action(theta, fs, state_at(0), false, {1, 0}, rng), InvalidInput);
  EXPECT_TRUE(argmax_set(std::vector<double>{}).empty());
  EXPECT_THROW(sample_argmax(std::vector<double>{}, rng), InvalidInput);
}

TEST(SelectAction, JointCandidatesCoverBothLevels) {
  CompositeState s{{0.0}, kNoAction, {0.0}};
  const auto c = candidate_actions(s, true, {2, 3});
  EXPECT_EQ(c.size(), 6u);
  s.high_action = 1;
  const auto d = candidate_actions(s, false, {2, 3});
  ASSERT_EQ(d.size(), 3u);
  for (const auto& a : d) EXPECT_EQ(a.high, 1);
}

TEST(Relabel, Examples) {
  const TinyFeatures fs(2, 2);
  std::vector<HighRecord> recs{{{0.0}, 0, 9.0, {0.0}}, {{1.0}, 1, -4.0, {1.0}}};
  relabel_high_rewards(recs, std::vector<double>(4, 0.0), fs, 2);
  for (const auto& r : recs) EXPECT_EQ(r.r_tilde, 0.0);

  const std::vector<double> theta{1.0, 2.0, 7.0, -3.0};
  relabel_high_rewards(recs, theta, fs, 2);
  EXPECT_EQ(recs[0].r_tilde, 2.0);
  EXPECT_EQ(recs[1].r_tilde, 7.0);
  EXPECT_EQ(reconstructed_reward(recs[0], theta, fs, 1), 1.0);
}

TEST(RunAlgorithm, PureWarmStartRunIgnoresFitting) {
  MazeEnvConfig cfg = maze_config(MazeVariant::kToy1);
  for (Algorithm algo : {Algorithm::kDyadic, Algorithm::kFull, Algorithm::kStationary, Algorithm::kBandit}) {
    MazeEnvironment env(cfg);
    const RunHistory h = run_algorithm(algo, env, 1, 15, 7, AgentConfig{}, 123);
    // Same seed, different algorithm: warm actions come from the warm stream only.
    MazeEnvironment env2(cfg);
    const RunHistory g = run_algorithm(Algorithm::kDyadic, env2, 1, 15, 7, AgentConfig{}, 123);
    ASSERT_EQ(h.records.size(), 15u);
    for (std::size_t i = 0; i < h.records.size(); ++i) {
      EXPECT_TRUE(h.records[i].warm);
      EXPECT_EQ(h.records[i].high_action, g.records[i].high_action);
      ASSERT_EQ(h.records[i].periods.size(), 7u);
      for (std::size_t t = 0; t < 7; ++t)
        EXPECT_EQ(h.records[i].periods[t].action, g.records[i].periods[t].action) << algorithm_name(algo);
    }
  }
}

TEST(RunAlgorithm, Deterministic) {
  MazeEnvironment a(maze_config(MazeVariant::kToy3)), b(maze_config(MazeVariant::kToy3));
  const RunHistory x = run_algorithm(Algorithm::kFull, a, 3, 15, 7, AgentConfig{}, 99);
  const RunHistory y = run_algorithm(Algorithm::kFull, b, 3, 15, 7, AgentConfig{}, 99);
  ASSERT_EQ(x.records.size(), y.records.size());
  for (std::size_t i = 0; i < x.records.size(); ++i) {
    EXPECT_EQ(x.records[i].reward, y.records[i].reward);
    EXPECT_EQ(x.records[i].high_state, y.records[i].high_state);
    for (std::size_t t = 0; t < x.records[i].periods.size(); ++t)
      EXPECT_EQ(x.records[i].periods[t].state, y.records[i].periods[t].state);
  }
}

TEST(RunAlgorithm, RejectsShapeMismatch) {
  MazeEnvironment env(maze_config(MazeVariant::kToy1));
  EXPECT_THROW(run_algorithm(Algorithm::kDyadic, env, 2, 14, 7, AgentConfig{}, 1), InvalidInput);
  EXPECT_THROW(run_algorithm(Algorithm::kDyadic, env, 2, 15, 6, AgentConfig{}, 1), InvalidInput);
}

TEST(RunAlgorithm, ZeroRewardRelabelsShrink) {
  // Mean |r_tilde| over stored records after episode 2 vs after episode 50.
  double early = 0.0, late = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    ZeroRewardEnv env;
    RunOptions opt;
    opt.keep_periods = false;
    opt.after_block = [&](const Agent& agent, const BlockRecord& rec) {
      if (rec.block != 2 || (rec.episode != 1 && rec.episode != 49)) return;
      const auto& recs = dynamic_cast<const DyadicAgentView&>(agent).high_records();
      double m = 0.0;
      for (const auto& r : recs) m += std::abs(r.r_tilde);
      (rec.episode == 1 ? early : late) += m / static_cast<double>(recs.size());
    };
    run_algorithm(Algorithm::kDyadic, env, 50, 3, 2, AgentConfig{}, seed, opt);
  }
  EXPECT_LT(late, early);
  EXPECT_LT(late / 100, 0.2);
}

TEST(AgentConfigChecks, NamesRoundTrip) {
  for (Algorithm a : {Algorithm::kDyadic, Algorithm::kFull, Algorithm::kStationary, Algorithm::kBandit})
    EXPECT_EQ(parse_algorithm(algorithm_name(a)), a);
  EXPECT_FALSE(parse_algorithm("qlearning").has_value());
}
