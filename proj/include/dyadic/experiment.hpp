#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dyadic/agents.hpp"
#include "dyadic/testbed.hpp"

namespace dyadic {

// Streams of the master seed reserved for shared inputs; repetitions use
// streams 0..reps-1.
inline constexpr std::uint64_t kModelStream = 0xD7AD0000ULL;

// Thresholds are b(k) for k = 1..8; b(8) is out of reach within a 7-day week.
inline constexpr int kMaxBurdenK = 8;

struct ExperimentConfig {
  std::string env = "toy1";  // toy1..toy5 or testbed
  Algorithm algo = Algorithm::kDyadic;
  int episodes = 100;
  int blocks = 15;
  int periods = 7;
  int reps = 1;
  std::uint64_t seed = 0;
  HyperMode hyper = HyperMode::kFixed;
  int warm_start_episodes = 1;
  std::filesystem::path out;
  int threads = 0;  // 0: hardware concurrency
  // Test bed only.
  EffectConfig effect{};
  int synthetic_dyads = 49;
  std::optional<std::filesystem::path> models;
};

// Throws ConfigError on unknown names or nonpositive counts.
void validate_config(const ExperimentConfig& config);

struct RepResult {
  std::vector<double> block_reward;  // episode-major, K*W entries
  std::vector<double> gap;           // same shape; empty without an oracle
};

struct SimulationResult {
  ExperimentConfig config;
  std::vector<RepResult> reps;
  bool has_regret() const { return !reps.empty() && !reps.front().gap.empty(); }
};

// Seed of repetition r is derive_seed(config.seed, r); every algorithm sees
// the same environment noise for the same repetition.
SimulationResult simulate(const ExperimentConfig& config);

// Per-block CSV (rep, episode, block, algo, env, block_reward,
// regret_or_blank) and, next to it, <stem>_summary.csv with per-block means
// and standard errors of block reward and cumulative regret.
void write_simulation(const SimulationResult& result, const std::filesystem::path& out);

struct SweepConfig {
  std::vector<int> b1 = {1};
  std::vector<int> b2 = {2};
  MoodEffect mood_effect = MoodEffect::kNone;
  int trials = 10;
  std::uint64_t seed = 0;
  int dyads = 100;
  int blocks = 14;
  int periods = 7;
  std::vector<Algorithm> baselines = {Algorithm::kFull, Algorithm::kStationary, Algorithm::kBandit};
  int synthetic_dyads = 49;
  std::optional<std::filesystem::path> models;
  std::filesystem::path out;
  int threads = 0;
};

struct SweepCell {
  int b1_k = 0;
  int b2_k = 0;
  // Average per-dyad total reward of each trial, dyadic RL first, then the
  // baselines in SweepConfig order.
  std::vector<Algorithm> algos;
  std::vector<std::vector<double>> trial_means;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepCell> cells;
};

void validate_config(const SweepConfig& config);
SweepResult sweep_testbed(const SweepConfig& config);
// Columns: b1_k, b2_k, mood_effect, algo, mean_total_reward_diff_vs_dyadic,
// std_error, trials. The difference is baseline minus dyadic RL per trial
// (same seed), so std_error is that of the paired difference.
void write_sweep(const SweepResult& result, const std::filesystem::path& out);

std::vector<DyadModel> load_or_synthesize_models(const std::optional<std::filesystem::path>& path, int n,
                                                 std::uint64_t seed);

// Runs task(i) for i in [0, n) on up to `threads` workers. Results must be
// written to per-index slots; the schedule does not affect them.
void parallel_for(int n, int threads, const std::function<void(int)>& task);

// printf("%.17g")
std::string format_double(double v);

}  // namespace dyadic
