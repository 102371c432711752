#include <gtest/gtest.h>

#include <map>

#include "dyadic/errors.hpp"
#include "dyadic/maze.hpp"
#include "dyadic/validate.hpp"

using namespace dyadic;

TEST(Tiredness, DefiningSum) {
  EXPECT_EQ(tiredness(std::vector<int>{}), 0.0);
  EXPECT_DOUBLE_EQ(tiredness(std::vector<int>{1, 1}), 0.75);
  EXPECT_DOUBLE_EQ(tiredness(std::vector<int>{1, 0, 1}), 0.625);
}

TEST(MoveProb, TableValues) {
  EXPECT_DOUBLE_EQ(move_prob(MazeVariant::kToy1, kGoodWeather, 0.0), 0.9);
  EXPECT_DOUBLE_EQ(move_prob(MazeVariant::kToy2, kBadWeather, 5.0), 0.6);
  EXPECT_DOUBLE_EQ(move_prob(MazeVariant::kToy5, kBadWeather, 1.0), 0.4);
  EXPECT_DOUBLE_EQ(move_prob(MazeVariant::kToy3, kGoodWeather, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(move_prob(MazeVariant::kToy4, kGoodWeather, 0.5), 0.9);
  EXPECT_EQ(move_prob(MazeVariant::kToy5, kBadWeather, 10.0), 0.0);
}

TEST(MazeStep, DeterministicLimit) {
  const MazeLayout& easy = maze_layout(kEasyMaze, RewardMode::kDense);
  Rng rng(1);
  EXPECT_EQ(maze_step(easy, {0, 0}, kUp, 1.0, rng), (Cell{1, 1}));
  EXPECT_EQ(maze_step(easy, {3, 2}, kDown, 1.0, rng), (Cell{4, 1}));
  EXPECT_EQ(maze_step(easy, {0, 0}, kDown, 1.0, rng), (Cell{1, 0}));  // floor blocks the move
}

TEST(MazeStep, GoalAbsorbs) {
  const MazeLayout& easy = maze_layout(kEasyMaze, RewardMode::kSparse);
  Rng rng(2);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(maze_step(easy, easy.goal, i % 2, 0.6, rng), easy.goal);
}

TEST(MazeStep, VerticalFrequencies) {
  const MazeLayout& easy = maze_layout(kEasyMaze, RewardMode::kDense);
  Rng rng(3);
  const int n = 100000;
  std::map<int, int> dy;
  int right = 0;
  for (int i = 0; i < n; ++i) {
    const Cell c = maze_step(easy, {2, 1}, kUp, 0.6, rng);
    ++dy[c.y - 1];
    right += c.x - 2;
  }
  EXPECT_NEAR(dy[1] / double(n), 0.6, 0.01);
  EXPECT_NEAR(dy[0] / double(n), 0.2, 0.01);
  EXPECT_NEAR(dy[-1] / double(n), 0.2, 0.01);
  EXPECT_NEAR(right / double(n), 0.6, 0.01);
}

TEST(MazeStep, BlockedMassBecomesStay) {
  const MazeLayout& easy = maze_layout(kEasyMaze, RewardMode::kDense);
  double stay = 0.0, total = 0.0;
  for (const auto& o : step_distribution(easy, {2, 3}, kUp, 0.6)) {
    total += o.prob;
    if (o.cell.y == 3) stay += o.prob;
  }
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_NEAR(stay, 0.8, 1e-15);
}

TEST(MazeReward, ScoreDifferences) {
  const MazeLayout& easy = maze_layout(kEasyMaze, RewardMode::kDense);
  const MazeLayout& hard = maze_layout(kHardMaze, RewardMode::kDense);
  EXPECT_EQ(maze_reward(easy, {0, 0}, {0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(maze_reward(hard, {4, 0}, {5, 0}), 1.2);
  EXPECT_DOUBLE_EQ(maze_reward(easy, {1, 0}, {3, 0}), 2.0);
}

TEST(MazeLayoutChecks, StatedGeometry) {
  for (RewardMode mode : {RewardMode::kDense, RewardMode::kSparse}) {
    const MazeLayout& hard = maze_layout(kHardMaze, mode);
    EXPECT_TRUE(hard.blocked({3, 2}));
    EXPECT_TRUE(hard.blocked({4, 3}));
    EXPECT_FALSE(hard.blocked({3, 3}));
    EXPECT_FALSE(hard.blocked(hard.start));
    EXPECT_FALSE(hard.blocked(hard.goal));
    EXPECT_DOUBLE_EQ(hard.multiplier, 1.2);
    EXPECT_TRUE(check_layout(hard, 7).empty());
    EXPECT_TRUE(check_layout(maze_layout(kEasyMaze, mode), 7).empty());
  }
  int top = 0, bottom = 99;
  for (const MazeLayout* l : {&maze_layout(kEasyMaze, RewardMode::kDense), &maze_layout(kHardMaze, RewardMode::kDense)})
    for (int i = 0; i < l->cells(); ++i) {
      top = std::max(top, l->score[static_cast<std::size_t>(i)]);
      bottom = std::min(bottom, l->score[static_cast<std::size_t>(i)]);
    }
  EXPECT_EQ(bottom, 0);
  EXPECT_EQ(top, 4);
}

TEST(MazeLayoutChecks, BrokenLayoutIsReported) {
  MazeLayout l = easy_maze(RewardMode::kDense);
  for (int y = 0; y < l.rows; ++y) l.obstacle[static_cast<std::size_t>(l.cell_index({4, y}))] = true;
  EXPECT_FALSE(check_layout(l, 7).empty());
  MazeLayout m = easy_maze(RewardMode::kDense);
  m.score[static_cast<std::size_t>(m.cell_index({5, 0}))] = 0;
  EXPECT_FALSE(check_layout(m, 7).empty());
}

TEST(MazeLayoutChecks, DumpShowsMarkers) {
  const std::string s = dump_layout(maze_layout(kHardMaze, RewardMode::kSparse));
  EXPECT_NE(s.find('S'), std::string::npos);
  EXPECT_NE(s.find('G'), std::string::npos);
  EXPECT_NE(s.find('#'), std::string::npos);
  EXPECT_EQ(s.rfind("S", s.find('\n', s.find('S'))), s.find('S'));
}

TEST(ResetBlock, Examples) {
  MazeEnvConfig cfg = maze_config(MazeVariant::kToy1);
  cfg.bad_weather_prob = 0.0;
  Rng rng(4);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(reset_block(cfg, rng, {}).weather, kGoodWeather);
  EXPECT_EQ(reset_block(cfg, rng, {}).tiredness, 0.0);
  cfg.bad_weather_prob = 0.5;
  Rng a(5), b(5);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(reset_block(cfg, a, {}).weather, reset_block(cfg, b, {}).weather);
}

TEST(MazeEnv, VariantsMatchTable) {
  EXPECT_EQ(maze_config(MazeVariant::kToy1).reward_mode, RewardMode::kDense);
  EXPECT_EQ(maze_config(MazeVariant::kToy1).tau_delayed, 0.0);
  EXPECT_EQ(maze_config(MazeVariant::kToy2).reward_mode, RewardMode::kSparse);
  EXPECT_DOUBLE_EQ(maze_config(MazeVariant::kToy3).tau_delayed, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(maze_config(MazeVariant::kToy4).tau_delayed, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(maze_config(MazeVariant::kToy5).tau_delayed, 1.0);
  EXPECT_EQ(maze_config(MazeVariant::kToy5).reward_mode, RewardMode::kSparse);
  EXPECT_EQ(parse_maze_variant("toy4"), MazeVariant::kToy4);
  EXPECT_FALSE(parse_maze_variant("toy9").has_value());
}

TEST(MazeEnv, FiveTupleLifecycle) {
  MazeEnvironment env(maze_config(MazeVariant::kToy2));
  Rng rng(6);
  env.begin_episode(rng);
  const auto high = env.begin_block(rng);
  FiveTuple t = env.tuple();
  EXPECT_EQ(t.block, 0);
  EXPECT_EQ(t.period, 0);
  EXPECT_EQ(t.high, static_cast<int>(high[0]));
  EXPECT_EQ(t.high_action, kNoAction);
  EXPECT_EQ(env.position(), (Cell{0, 0}));
  EXPECT_THROW(env.step(kUp, rng), InvalidInput);
  env.set_high_action(kHardMaze);
  EXPECT_EQ(env.tuple().period, 1);
  for (int h = 0; h < 7; ++h) env.step(kUp, rng);
  EXPECT_THROW(env.step(kUp, rng), InvalidInput);
  EXPECT_EQ(env.tuple().high_action, kHardMaze);
  EXPECT_THROW(env.set_high_action(2), InvalidInput);
}

TEST(MazeEnv, TirednessFollowsHighActions) {
  MazeEnvironment env(maze_config(MazeVariant::kToy5));
  Rng rng(7);
  env.begin_episode(rng);
  const int choices[] = {1, 1, 0};
  for (int c : choices) {
    env.begin_block(rng);
    env.set_high_action(c);
    for (int h = 0; h < 7; ++h) env.step(kUp, rng);
  }
  env.begin_block(rng);
  EXPECT_DOUBLE_EQ(env.current_tiredness(), 0.125 + 0.25);
  env.set_high_action(0);
  const double base = env.weather() == kGoodWeather ? 1.0 : 0.7;
  EXPECT_DOUBLE_EQ(env.current_move_prob(), base - 0.3 * 0.375);
}

TEST(Validator, ZeroRolloutsClaimsNothing) {
  MazeEnvironment env(maze_config(MazeVariant::kToy1));
  Rng rng(1);
  const ValidationReport r = validate_dyadic_transitions(env, 0, rng);
  EXPECT_FALSE(r.checked());
  EXPECT_FALSE(r.exit_vs_actions.has_value());
  EXPECT_FALSE(r.homogeneity.has_value());
  EXPECT_THROW(validate_dyadic_transitions(env, -1, rng), InvalidInput);
}

TEST(Validator, Toy1PassesToy5FailsHomogeneity) {
  Rng rng(2024);
  MazeEnvironment toy1(maze_config(MazeVariant::kToy1));
  const ValidationReport a = validate_dyadic_transitions(toy1, 10000, rng);
  EXPECT_TRUE(a.structural_ok);
  EXPECT_GT(a.exit_vs_actions->p_value, 0.01);
  EXPECT_GT(a.exit_vs_position->p_value, 0.01);
  EXPECT_GT(a.homogeneity->p_value, 0.01);
  MazeEnvironment toy5(maze_config(MazeVariant::kToy5));
  const ValidationReport b = validate_dyadic_transitions(toy5, 10000, rng);
  EXPECT_TRUE(b.structural_ok);
  EXPECT_LT(b.homogeneity->p_value, 0.01);
}
