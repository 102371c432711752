#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dyadic/bayes_linear.hpp"
#include "dyadic/environment.hpp"
#include "dyadic/random.hpp"

namespace dyadic {

struct Transition {
  CompositeState state;
  JointAction action;
  double reward = 0.0;
};

// H chained transitions. state.high and state.high_action are constant across
// a block; for the episodic baselines an "episode" spans W blocks.
using LowEpisode = std::vector<Transition>;

struct HighRecord {
  std::vector<double> high_state;
  int high_action = kNoAction;
  double r_tilde = 0.0;
  std::vector<double> first_low_state;
};

struct ActionSpace {
  int high = 1;
  int low = 1;
};

// ---------------------------------------------------------------------------
// Greedy action selection

// Indices attaining the maximum score (exact comparison).
std::vector<int> argmax_set(std::span<const double> scores);
// Uniform over argmax_set; draws from rng only when there is a tie.
int sample_argmax(std::span<const double> scores, Rng& rng);

// Candidate actions at a state. When `joint` the high action is chosen too,
// enumerated high-major; otherwise it is taken from s.high_action.
std::vector<JointAction> candidate_actions(const CompositeState& s, bool joint, ActionSpace space);
std::vector<double> q_scores(std::span<const double> theta, const FeatureSpace& fs,
                             const CompositeState& s, bool joint, ActionSpace space);
double max_q(std::span<const double> theta, const FeatureSpace& fs, const CompositeState& s,
             bool joint, ActionSpace space);
JointAction select_action(std::span<const double> theta, const FeatureSpace& fs,
                          const CompositeState& s, bool joint, ActionSpace space, Rng& rng);
// Block-level action from a draw of the psi weights.
int select_high_action(std::span<const double> beta, const FeatureSpace& fs,
                       std::span<const double> s_high, int high_actions, Rng& rng);

// ---------------------------------------------------------------------------
// Fitting

using ThetaSchedule = std::vector<std::vector<double>>;

// Per-period RLSVI over a fixed horizon. Keeps one Gram matrix per period,
// updated as episodes are appended; targets are rebuilt on every fit because
// they depend on the freshly drawn next-period weights.
class RlsviLearner {
 public:
  // joint[h]: period h also picks the high action (affects the max in the
  // target of period h-1).
  RlsviLearner(const FeatureSpace& fs, ActionSpace space, std::vector<bool> joint);

  int horizon() const { return static_cast<int>(joint_.size()); }
  void add_episode(LowEpisode episode);
  const std::vector<LowEpisode>& episodes() const { return episodes_; }

  ThetaSchedule fit(double lambda, double sigma, Rng& rng) const;
  // Regression problem of period h given the next period's weights (ignored
  // at h = H-1).
  RegressionData regression(int h, std::span<const double> theta_next) const;

 private:
  const FeatureSpace* fs_;
  ActionSpace space_;
  std::vector<bool> joint_;
  std::vector<LowEpisode> episodes_;
  std::vector<Gram> grams_;
  // Features cached at insertion: rows_[h][e] is episode e's period-h row,
  // next_[h] holds the candidate features of its period-(h+1) state,
  // next_width_[h] per episode.
  std::vector<std::vector<FeatureVector>> rows_;
  std::vector<std::vector<FeatureVector>> next_;
  std::vector<std::size_t> next_width_;
};

ThetaSchedule rlsvi_fit(const std::vector<LowEpisode>& episodes, const FeatureSpace& fs,
                        ActionSpace space, const std::vector<bool>& joint, double lambda,
                        double sigma, Rng& rng);

RegressionData ts_regression(const std::vector<HighRecord>& records, const FeatureSpace& fs);
std::vector<double> ts_fit(const std::vector<HighRecord>& records, const FeatureSpace& fs,
                           double lambda, double sigma, Rng& rng);

// r_tilde <- max over low actions of theta_1^T phi(s_high, a_high, s_low_1, .)
void relabel_high_rewards(std::vector<HighRecord>& records, std::span<const double> theta_1,
                          const FeatureSpace& fs, int low_actions);
double reconstructed_reward(const HighRecord& record, std::span<const double> theta_1,
                            const FeatureSpace& fs, int low_actions);

// One stacked regression over every period of every episode with a single
// shared weight vector.
class StationaryLearner {
 public:
  StationaryLearner(const FeatureSpace& fs, ActionSpace space, std::vector<bool> joint);

  void add_episode(LowEpisode episode);
  const std::vector<LowEpisode>& episodes() const { return episodes_; }

  RegressionData regression(std::span<const double> theta_prev, double gamma) const;
  std::vector<double> fit(std::span<const double> theta_prev, double lambda, double sigma,
                          double gamma, Rng& rng) const;

 private:
  const FeatureSpace* fs_;
  ActionSpace space_;
  std::vector<bool> joint_;
  std::vector<LowEpisode> episodes_;
  Gram gram_;
  std::vector<std::vector<FeatureVector>> rows_;
  std::vector<std::vector<FeatureVector>> next_;
  std::vector<std::size_t> next_width_;
};

std::vector<double> stationary_rlsvi_fit(const std::vector<LowEpisode>& episodes,
                                         const FeatureSpace& fs, ActionSpace space,
                                         const std::vector<bool>& joint,
                                         std::span<const double> theta_prev, double lambda,
                                         double sigma, double gamma, Rng& rng);

// ---------------------------------------------------------------------------
// Agents

enum class Algorithm { kDyadic, kFull, kStationary, kBandit };

std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

enum class HyperMode { kFixed, kTheory };

struct TheorySizes {
  int horizon = 0;      // H of the block MDP
  int states = 0;       // |S|
  int actions = 0;      // |A|
};

struct AgentConfig {
  HyperMode mode = HyperMode::kFixed;
  double lambda = 1.0;
  double sigma = 1.0;
  double lambda_ts = 1.0;
  double sigma_ts = 1.0;
  int warm_start_episodes = 1;
  // Stationary RLSVI discount; defaults to 1 - 1/(HW).
  std::optional<double> gamma;
  // Required in theory mode.
  std::optional<TheorySizes> theory;
};

struct Hyper {
  double lambda;
  double sigma;
};

// The policy an agent followed in one block, in a form the exact evaluator
// can replay on every state: a distribution over the high action at the
// block's opening state, then per-period greedy weights (uniform ties).
struct BlockPolicy {
  bool uniform = false;
  std::vector<double> high_probs;
  ThetaSchedule theta;
};

class Agent {
 public:
  virtual ~Agent() = default;

  virtual void begin_episode(int k, Rng& rng) = 0;
  virtual void begin_block(int k, int w, std::span<const double> s_high, Rng& rng) = 0;
  // At h = 0, s.high_action is kNoAction and the returned high action is the
  // agent's choice for the block.
  virtual JointAction act(int h, const CompositeState& s, Rng& rng) = 0;
  virtual void observe(int h, const CompositeState& s, JointAction a, double reward) = 0;
  virtual void end_block(Rng& rng) = 0;
  virtual void end_episode(Rng& rng) = 0;

  // Valid between the last observe() of a block and end_block().
  virtual BlockPolicy block_policy() const = 0;
  // Scores the current weights give to the candidate actions at s in period h
  // (joint candidates when s.high_action is kNoAction).
  virtual std::vector<double> scores(int h, const CompositeState& s) const = 0;
};

std::unique_ptr<Agent> make_agent(Algorithm algo, const DyadicEnvironment& env,
                                  const AgentConfig& config);

// Diagnostics of the dyadic agent used by the invariant tests.
class DyadicAgentView {
 public:
  virtual ~DyadicAgentView() = default;
  virtual const std::vector<HighRecord>& high_records() const = 0;
  virtual const std::vector<LowEpisode>& low_episodes() const = 0;
  // Number of high-level records present at each high-level fit, in order.
  virtual const std::vector<std::size_t>& high_fit_sizes() const = 0;
  virtual const ThetaSchedule& current_theta() const = 0;
};

// ---------------------------------------------------------------------------
// Running

struct OracleValues {
  double optimal = 0.0;
  double policy = 0.0;
  double gap() const { return optimal - policy; }
};

struct BlockRecord {
  int episode = 0;
  int block = 0;
  bool warm = false;
  std::vector<double> high_state;
  int high_action = kNoAction;
  std::vector<Transition> periods;  // empty unless RunOptions::keep_periods
  double reward = 0.0;
  std::optional<OracleValues> oracle;
};

struct RunHistory {
  int episodes = 0;
  int blocks = 0;
  int periods = 0;
  std::vector<BlockRecord> records;
};

using BlockOracle =
    std::function<std::optional<OracleValues>(const BlockRecord& block, const BlockPolicy& policy)>;

struct RunOptions {
  bool keep_periods = true;
  BlockOracle oracle;
  // Called with the live agent after every block (tests).
  std::function<void(const Agent&, const BlockRecord&)> after_block;
};

// Seed streams: environment, agent, warm start. Environment noise therefore
// lines up across algorithms for the same seed.
RunHistory run_algorithm(Algorithm algo, DyadicEnvironment& env, int K, int W, int H,
                         const AgentConfig& config, std::uint64_t seed,
                         const RunOptions& options = {});

}  // namespace dyadic
