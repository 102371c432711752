#include <cmath>
#include <string>

#include "dyadic/agents.hpp"
#include "dyadic/errors.hpp"
#include "dyadic/theory.hpp"

namespace dyadic {

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kDyadic: return "dyadic";
    case Algorithm::kFull: return "full";
    case Algorithm::kStationary: return "stationary";
    case Algorithm::kBandit: return "bandit";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kDyadic, Algorithm::kFull, Algorithm::kStationary, Algorithm::kBandit})
    if (algorithm_name(a) == name) return a;
  return std::nullopt;
}

namespace {

CompositeState with_high_action(const CompositeState& s, int a_high) {
  CompositeState out = s;
  out.high_action = a_high;
  return out;
}

// Marginal of the uniform distribution over the joint argmax set.
std::vector<double> joint_high_probs(std::span<const double> scores, ActionSpace space) {
  std::vector<double> probs(static_cast<std::size_t>(space.high), 0.0);
  const auto best = argmax_set(scores);
  for (int i : best) probs[static_cast<std::size_t>(i / space.low)] += 1.0;
  for (double& p : probs) p /= static_cast<double>(best.size());
  return probs;
}

std::vector<double> uniform_over(const std::vector<int>& set, int n) {
  std::vector<double> probs(static_cast<std::size_t>(n), 0.0);
  for (int i : set) probs[static_cast<std::size_t>(i)] = 1.0 / static_cast<double>(set.size());
  return probs;
}

class HyperSchedule {
 public:
  explicit HyperSchedule(const AgentConfig& c) : c_(c) {
    if (c.mode == HyperMode::kTheory && !c.theory)
      throw ConfigError("theory-mode hyperparameters need a tabular environment");
    if (c.mode == HyperMode::kFixed) {
      for (double v : {c.lambda, c.sigma, c.lambda_ts, c.sigma_ts})
        if (!(v > 0.0) || !std::isfinite(v))
          throw ConfigError("hyperparameters must be positive and finite");
    }
  }
  Hyper low(std::int64_t visits) const {
    if (c_.mode == HyperMode::kFixed) return {c_.lambda, c_.sigma};
    return theory_hyperparams(c_.theory->horizon, c_.theory->states, c_.theory->actions, visits);
  }
  Hyper ts(std::int64_t visits) const {
    if (c_.mode == HyperMode::kFixed) return {c_.lambda_ts, c_.sigma_ts};
    return theory_hyperparams(c_.theory->horizon, c_.theory->states, c_.theory->actions, visits);
  }

 private:
  AgentConfig c_;
};

class DyadicAgent final : public Agent, public DyadicAgentView {
 public:
  DyadicAgent(const DyadicEnvironment& env, const AgentConfig& config)
      : fs_(env.features()),
        space_{env.high_actions(), env.low_actions()},
        hyper_(config),
        low_(env.features(), space_, std::vector<bool>(static_cast<std::size_t>(env.periods()), false)) {}

  void begin_episode(int, Rng&) override {}

  void begin_block(int, int, std::span<const double> s_high, Rng& rng) override {
    s_high_.assign(s_high.begin(), s_high.end());
    std::int64_t& n = visits_[s_high_];
    const Hyper hts = hyper_.ts(n);
    const Hyper hlow = hyper_.low(n);
    ++n;
    fit_sizes_.push_back(records_.size());
    beta_ = ts_fit(records_, fs_, hts.lambda, hts.sigma, rng);
    std::vector<double> q(static_cast<std::size_t>(space_.high));
    for (int a = 0; a < space_.high; ++a) q[static_cast<std::size_t>(a)] = fs_.psi(s_high_, a).dot(beta_);
    high_probs_ = uniform_over(argmax_set(q), space_.high);
    a_high_ = sample_argmax(q, rng);
    theta_ = low_.fit(hlow.lambda, hlow.sigma, rng);
    current_.clear();
  }

  JointAction act(int h, const CompositeState& s, Rng& rng) override {
    if (h == 0) {
      const JointAction a = select_action(theta_[0], fs_, with_high_action(s, a_high_), false, space_, rng);
      return {a_high_, a.low};
    }
    return select_action(theta_[static_cast<std::size_t>(h)], fs_, s, false, space_, rng);
  }

  void observe(int, const CompositeState& s, JointAction a, double reward) override {
    current_.push_back({s, a, reward});
  }

  void end_block(Rng&) override {
    low_.add_episode(current_);
    relabel_high_rewards(records_, theta_[0], fs_, space_.low);
    HighRecord rec{s_high_, current_.front().action.high, 0.0, current_.front().state.low};
    rec.r_tilde = reconstructed_reward(rec, theta_[0], fs_, space_.low);
    records_.push_back(std::move(rec));
  }

  void end_episode(Rng&) override {}

  BlockPolicy block_policy() const override { return {false, high_probs_, theta_}; }

  std::vector<double> scores(int h, const CompositeState& s) const override {
    return q_scores(theta_[static_cast<std::size_t>(h)], fs_, s, s.high_action == kNoAction, space_);
  }

  const std::vector<HighRecord>& high_records() const override { return records_; }
  const std::vector<LowEpisode>& low_episodes() const override { return low_.episodes(); }
  const std::vector<std::size_t>& high_fit_sizes() const override { return fit_sizes_; }
  const ThetaSchedule& current_theta() const override { return theta_; }

 private:
  const FeatureSpace& fs_;
  ActionSpace space_;
  HyperSchedule hyper_;
  RlsviLearner low_;
  std::vector<HighRecord> records_;
  std::vector<std::size_t> fit_sizes_;
  std::map<std::vector<double>, std::int64_t> visits_;

  std::vector<double> s_high_;
  std::vector<double> beta_;
  std::vector<double> high_probs_;
  int a_high_ = kNoAction;
  ThetaSchedule theta_;
  LowEpisode current_;
};

// Shared plumbing of the three baselines: one episode = W blocks of H
// periods, joint (high, low) choice at the first period of every block.
class EpisodicBaseline : public Agent {
 public:
  EpisodicBaseline(const DyadicEnvironment& env, const AgentConfig& config)
      : fs_(env.features()),
        space_{env.high_actions(), env.low_actions()},
        hyper_(config),
        W_(env.blocks()),
        H_(env.periods()) {}

  std::vector<bool> joint_pattern() const {
    std::vector<bool> j(static_cast<std::size_t>(W_ * H_), false);
    for (int w = 0; w < W_; ++w) j[static_cast<std::size_t>(w * H_)] = true;
    return j;
  }

  void begin_block(int k, int w, std::span<const double>, Rng&) override {
    k_ = k;
    w_ = w;
  }

  JointAction act(int h, const CompositeState& s, Rng& rng) override {
    const std::vector<double>& theta = theta_for(h, rng);
    if (h == 0) {
      const auto q = q_scores(theta, fs_, s, true, space_);
      high_probs_ = joint_high_probs(q, space_);
      return candidate_actions(s, true, space_)[static_cast<std::size_t>(sample_argmax(q, rng))];
    }
    return select_action(theta, fs_, s, false, space_, rng);
  }

  void observe(int, const CompositeState& s, JointAction a, double reward) override {
    current_.push_back({s, a, reward});
  }

  void end_block(Rng&) override {}

 protected:
  virtual const std::vector<double>& theta_for(int h, Rng& rng) = 0;

  const FeatureSpace& fs_;
  ActionSpace space_;
  HyperSchedule hyper_;
  int W_;
  int H_;
  int k_ = 0;
  int w_ = 0;
  std::vector<double> high_probs_;
  LowEpisode current_;
};

class FullRlAgent final : public EpisodicBaseline {
 public:
  FullRlAgent(const DyadicEnvironment& env, const AgentConfig& config)
      : EpisodicBaseline(env, config), learner_(env.features(), space_, joint_pattern()) {}

  void begin_episode(int k, Rng& rng) override {
    const Hyper hp = hyper_.low(static_cast<std::int64_t>(k) * W_);
    theta_ = learner_.fit(hp.lambda, hp.sigma, rng);
    current_.clear();
  }

  void end_episode(Rng&) override { learner_.add_episode(current_); }

  BlockPolicy block_policy() const override {
    BlockPolicy p{false, high_probs_, {}};
    for (int h = 0; h < H_; ++h) p.theta.push_back(theta_[static_cast<std::size_t>(w_ * H_ + h)]);
    return p;
  }

  std::vector<double> scores(int h, const CompositeState& s) const override {
    return q_scores(theta_[static_cast<std::size_t>(w_ * H_ + h)], fs_, s, s.high_action == kNoAction,
                    space_);
  }

 private:
  const std::vector<double>& theta_for(int h, Rng&) override {
    return theta_[static_cast<std::size_t>(w_ * H_ + h)];
  }

  RlsviLearner learner_;
  ThetaSchedule theta_;
};

class StationaryAgent final : public EpisodicBaseline {
 public:
  StationaryAgent(const DyadicEnvironment& env, const AgentConfig& config)
      : EpisodicBaseline(env, config),
        learner_(env.features(), space_, joint_pattern()),
        gamma_(config.gamma.value_or(1.0 - 1.0 / static_cast<double>(W_ * H_))),
        theta_(env.features().phi_dimension(), 0.0) {
    if (!(gamma_ >= 0.0 && gamma_ <= 1.0)) throw ConfigError("gamma must be in [0,1]");
  }

  void begin_episode(int k, Rng& rng) override {
    const Hyper hp = hyper_.low(static_cast<std::int64_t>(k) * W_);
    // theta_ still holds the previous episode's draw (zero before the first).
    theta_ = learner_.fit(theta_, hp.lambda, hp.sigma, gamma_, rng);
    current_.clear();
  }

  void end_episode(Rng&) override { learner_.add_episode(current_); }

  BlockPolicy block_policy() const override {
    return {false, high_probs_, ThetaSchedule(static_cast<std::size_t>(H_), theta_)};
  }

  std::vector<double> scores(int, const CompositeState& s) const override {
    return q_scores(theta_, fs_, s, s.high_action == kNoAction, space_);
  }

 private:
  const std::vector<double>& theta_for(int, Rng&) override { return theta_; }

  StationaryLearner learner_;
  double gamma_;
  std::vector<double> theta_;
};

class BanditAgent final : public EpisodicBaseline {
 public:
  BanditAgent(const DyadicEnvironment& env, const AgentConfig& config)
      : EpisodicBaseline(env, config),
        gram_(env.features().phi_dimension()),
        xty_(env.features().phi_dimension(), 0.0),
        theta_(env.features().phi_dimension(), 0.0),
        block_theta_(static_cast<std::size_t>(env.periods())) {}

  void begin_episode(int, Rng&) override { current_.clear(); }

  void observe(int h, const CompositeState& s, JointAction a, double reward) override {
    EpisodicBaseline::observe(h, s, a, reward);
    const FeatureVector x = fs_.phi(s, a.high, a.low);
    gram_.add(x);
    accumulate_xty(x, reward, xty_);
  }

  void end_episode(Rng&) override {}

  BlockPolicy block_policy() const override { return {false, high_probs_, block_theta_}; }

  std::vector<double> scores(int, const CompositeState& s) const override {
    return q_scores(theta_, fs_, s, s.high_action == kNoAction, space_);
  }

 private:
  const std::vector<double>& theta_for(int h, Rng& rng) override {
    const Hyper hp = hyper_.ts(static_cast<std::int64_t>(k_) * W_ + w_);
    theta_ = sample_weights(posterior(gram_, xty_, hp.lambda, hp.sigma), rng);
    block_theta_[static_cast<std::size_t>(h)] = theta_;
    return theta_;
  }

  Gram gram_;
  std::vector<double> xty_;
  std::vector<double> theta_;
  ThetaSchedule block_theta_;
};

}  // namespace

std::unique_ptr<Agent> make_agent(Algorithm algo, const DyadicEnvironment& env,
                                  const AgentConfig& config) {
  if (config.warm_start_episodes < 0) throw ConfigError("warm_start_episodes must be >= 0");
  switch (algo) {
    case Algorithm::kDyadic: return std::make_unique<DyadicAgent>(env, config);
    case Algorithm::kFull: return std::make_unique<FullRlAgent>(env, config);
    case Algorithm::kStationary: return std::make_unique<StationaryAgent>(env, config);
    case Algorithm::kBandit: return std::make_unique<BanditAgent>(env, config);
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace dyadic
