#include <algorithm>
#include <cmath>
#include <string>

#include "dyadic/agents.hpp"
#include "dyadic/errors.hpp"

namespace dyadic {

std::vector<int> argmax_set(std::span<const double> scores) {
  std::vector<int> best;
  double top = -INFINITY;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > top) {
      top = scores[i];
      best.assign(1, static_cast<int>(i));
    } else if (scores[i] == top) {
      best.push_back(static_cast<int>(i));
    }
  }
  return best;
}

int sample_argmax(std::span<const double> scores, Rng& rng) {
  if (scores.empty()) throw InvalidInput("argmax over an empty action set");
  const std::vector<int> best = argmax_set(scores);
  if (best.empty()) throw InvalidInput("argmax: no finite scores");
  if (best.size() == 1) return best[0];
  std::uniform_int_distribution<std::size_t> pick(0, best.size() - 1);
  return best[pick(rng)];
}

std::vector<JointAction> candidate_actions(const CompositeState& s, bool joint, ActionSpace space) {
  std::vector<JointAction> out;
  if (space.low < 1 || space.high < 1) return out;
  if (joint) {
    out.reserve(static_cast<std::size_t>(space.high * space.low));
    for (int ah = 0; ah < space.high; ++ah)
      for (int al = 0; al < space.low; ++al) out.push_back({ah, al});
  } else {
    out.reserve(static_cast<std::size_t>(space.low));
    for (int al = 0; al < space.low; ++al) out.push_back({s.high_action, al});
  }
  return out;
}

std::vector<double> q_scores(std::span<const double> theta, const FeatureSpace& fs,
                             const CompositeState& s, bool joint, ActionSpace space) {
  const auto cands = candidate_actions(s, joint, space);
  std::vector<double> out(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i)
    out[i] = fs.phi(s.high, cands[i].high, s.low, cands[i].low).dot(theta);
  return out;
}

double max_q(std::span<const double> theta, const FeatureSpace& fs, const CompositeState& s,
             bool joint, ActionSpace space) {
  // Hot path of every fit: no temporaries beyond the feature vector.
  if (space.low < 1 || space.high < 1) throw InvalidInput("max over an empty action set");
  double best = -INFINITY;
  const int h_lo = joint ? 0 : s.high_action;
  const int h_hi = joint ? space.high : s.high_action + 1;
  for (int ah = h_lo; ah < h_hi; ++ah)
    for (int al = 0; al < space.low; ++al)
      best = std::max(best, fs.phi(s.high, ah, s.low, al).dot(theta));
  return best;
}

namespace {

// Candidate features at s in the order max_q visits them, so a max over
// cached dots is bitwise the same as max_q.
void append_candidates(const FeatureSpace& fs, const CompositeState& s, bool joint, ActionSpace space,
                       std::vector<FeatureVector>& out) {
  const int h_lo = joint ? 0 : s.high_action;
  const int h_hi = joint ? space.high : s.high_action + 1;
  for (int ah = h_lo; ah < h_hi; ++ah)
    for (int al = 0; al < space.low; ++al) out.push_back(fs.phi(s.high, ah, s.low, al));
}

std::size_t candidate_count(bool joint, ActionSpace space) {
  return static_cast<std::size_t>(joint ? space.high * space.low : space.low);
}

double cached_max(const FeatureVector* cands, std::size_t n, std::span<const double> theta) {
  double best = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, cands[i].dot(theta));
  return best;
}

}  // namespace

JointAction select_action(std::span<const double> theta, const FeatureSpace& fs,
                          const CompositeState& s, bool joint, ActionSpace space, Rng& rng) {
  const auto cands = candidate_actions(s, joint, space);
  if (cands.empty()) throw InvalidInput("select_action: empty action set");
  const auto q = q_scores(theta, fs, s, joint, space);
  return cands[static_cast<std::size_t>(sample_argmax(q, rng))];
}

int select_high_action(std::span<const double> beta, const FeatureSpace& fs,
                       std::span<const double> s_high, int high_actions, Rng& rng) {
  if (high_actions < 1) throw InvalidInput("select_high_action: empty action set");
  std::vector<double> q(static_cast<std::size_t>(high_actions));
  for (int a = 0; a < high_actions; ++a) q[static_cast<std::size_t>(a)] = fs.psi(s_high, a).dot(beta);
  return sample_argmax(q, rng);
}

// ---------------------------------------------------------------------------

RlsviLearner::RlsviLearner(const FeatureSpace& fs, ActionSpace space, std::vector<bool> joint)
    : fs_(&fs), space_(space), joint_(std::move(joint)) {
  if (joint_.empty()) throw InvalidInput("RLSVI horizon must be >= 1");
  if (space_.low < 1 || space_.high < 1) throw InvalidInput("RLSVI needs nonempty action sets");
  grams_.assign(joint_.size(), Gram(fs.phi_dimension()));
  rows_.resize(joint_.size());
  next_.resize(joint_.size());
  next_width_.assign(joint_.size(), 0);
  for (std::size_t h = 0; h + 1 < joint_.size(); ++h) next_width_[h] = candidate_count(joint_[h + 1], space_);
}

void RlsviLearner::add_episode(LowEpisode episode) {
  if (episode.size() != joint_.size())
    throw InvalidInput("RLSVI episode has " + std::to_string(episode.size()) + " periods, expected " +
                       std::to_string(joint_.size()));
  for (std::size_t h = 0; h < episode.size(); ++h) {
    const Transition& t = episode[h];
    rows_[h].push_back(fs_->phi(t.state, t.action.high, t.action.low));
    grams_[h].add(rows_[h].back());
    if (h + 1 < episode.size()) append_candidates(*fs_, episode[h + 1].state, joint_[h + 1], space_, next_[h]);
  }
  episodes_.push_back(std::move(episode));
}

RegressionData RlsviLearner::regression(int h, std::span<const double> theta_next) const {
  const std::size_t H = joint_.size();
  const auto hh = static_cast<std::size_t>(h);
  RegressionData data(fs_->phi_dimension());
  for (const LowEpisode& ep : episodes_) {
    const Transition& t = ep[hh];
    double y = t.reward;
    if (hh + 1 < H) y += max_q(theta_next, *fs_, ep[hh + 1].state, joint_[hh + 1], space_);
    data.add(fs_->phi(t.state, t.action.high, t.action.low), y);
  }
  return data;
}

ThetaSchedule RlsviLearner::fit(double lambda, double sigma, Rng& rng) const {
  const std::size_t H = joint_.size();
  const std::size_t p = fs_->phi_dimension();
  ThetaSchedule theta(H);
  std::vector<double> xty(p);
  for (std::size_t hh = H; hh-- > 0;) {
    std::fill(xty.begin(), xty.end(), 0.0);
    const std::size_t width = next_width_[hh];
    for (std::size_t e = 0; e < episodes_.size(); ++e) {
      double y = episodes_[e][hh].reward;
      if (hh + 1 < H) y += cached_max(next_[hh].data() + e * width, width, theta[hh + 1]);
      accumulate_xty(rows_[hh][e], y, xty);
    }
    theta[hh] = sample_weights(posterior(grams_[hh], xty, lambda, sigma), rng);
  }
  return theta;
}

ThetaSchedule rlsvi_fit(const std::vector<LowEpisode>& episodes, const FeatureSpace& fs,
                        ActionSpace space, const std::vector<bool>& joint, double lambda,
                        double sigma, Rng& rng) {
  RlsviLearner learner(fs, space, joint);
  for (const LowEpisode& ep : episodes) learner.add_episode(ep);
  return learner.fit(lambda, sigma, rng);
}

// ---------------------------------------------------------------------------

RegressionData ts_regression(const std::vector<HighRecord>& records, const FeatureSpace& fs) {
  RegressionData data(fs.psi_dimension());
  for (const HighRecord& r : records) {
    if (!std::isfinite(r.r_tilde)) throw InvalidInput("high-level record has a non-finite reward");
    data.add(fs.psi(r.high_state, r.high_action), r.r_tilde);
  }
  return data;
}

std::vector<double> ts_fit(const std::vector<HighRecord>& records, const FeatureSpace& fs,
                           double lambda, double sigma, Rng& rng) {
  return sample_weights(posterior(ts_regression(records, fs), lambda, sigma), rng);
}

double reconstructed_reward(const HighRecord& record, std::span<const double> theta_1,
                            const FeatureSpace& fs, int low_actions) {
  if (low_actions < 1) throw InvalidInput("relabel: empty low action set");
  double best = -INFINITY;
  for (int a = 0; a < low_actions; ++a)
    best = std::max(best, fs.phi(record.high_state, record.high_action, record.first_low_state, a)
                              .dot(theta_1));
  return best;
}

void relabel_high_rewards(std::vector<HighRecord>& records, std::span<const double> theta_1,
                          const FeatureSpace& fs, int low_actions) {
  for (HighRecord& r : records) r.r_tilde = reconstructed_reward(r, theta_1, fs, low_actions);
}

// ---------------------------------------------------------------------------

StationaryLearner::StationaryLearner(const FeatureSpace& fs, ActionSpace space,
                                     std::vector<bool> joint)
    : fs_(&fs), space_(space), joint_(std::move(joint)), gram_(fs.phi_dimension()) {
  if (joint_.empty()) throw InvalidInput("stationary RLSVI horizon must be >= 1");
  if (space_.low < 1 || space_.high < 1) throw InvalidInput("RLSVI needs nonempty action sets");
  rows_.resize(joint_.size());
  next_.resize(joint_.size());
  next_width_.assign(joint_.size(), 0);
  for (std::size_t h = 0; h + 1 < joint_.size(); ++h) next_width_[h] = candidate_count(joint_[h + 1], space_);
}

void StationaryLearner::add_episode(LowEpisode episode) {
  if (episode.size() != joint_.size())
    throw InvalidInput("stationary RLSVI episode has " + std::to_string(episode.size()) +
                       " periods, expected " + std::to_string(joint_.size()));
  for (std::size_t h = 0; h < episode.size(); ++h) {
    const Transition& t = episode[h];
    rows_[h].push_back(fs_->phi(t.state, t.action.high, t.action.low));
    gram_.add(rows_[h].back());
    if (h + 1 < episode.size()) append_candidates(*fs_, episode[h + 1].state, joint_[h + 1], space_, next_[h]);
  }
  episodes_.push_back(std::move(episode));
}

RegressionData StationaryLearner::regression(std::span<const double> theta_prev, double gamma) const {
  RegressionData data(fs_->phi_dimension());
  const std::size_t H = joint_.size();
  for (const LowEpisode& ep : episodes_)
    for (std::size_t h = 0; h < H; ++h) {
      const Transition& t = ep[h];
      double y = t.reward;
      if (h + 1 < H) y += gamma * max_q(theta_prev, *fs_, ep[h + 1].state, joint_[h + 1], space_);
      data.add(fs_->phi(t.state, t.action.high, t.action.low), y);
    }
  return data;
}

std::vector<double> StationaryLearner::fit(std::span<const double> theta_prev, double lambda,
                                           double sigma, double gamma, Rng& rng) const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidInput("stationary RLSVI: gamma must be in [0,1]");
  if (theta_prev.size() != fs_->phi_dimension())
    throw InvalidInput("stationary RLSVI: previous estimate has the wrong dimension");
  const std::size_t H = joint_.size();
  std::vector<double> xty(fs_->phi_dimension(), 0.0);
  for (std::size_t e = 0; e < episodes_.size(); ++e)
    for (std::size_t h = 0; h < H; ++h) {
      double y = episodes_[e][h].reward;
      if (h + 1 < H) {
        const std::size_t width = next_width_[h];
        y += gamma * cached_max(next_[h].data() + e * width, width, theta_prev);
      }
      accumulate_xty(rows_[h][e], y, xty);
    }
  return sample_weights(posterior(gram_, xty, lambda, sigma), rng);
}

std::vector<double> stationary_rlsvi_fit(const std::vector<LowEpisode>& episodes,
                                         const FeatureSpace& fs, ActionSpace space,
                                         const std::vector<bool>& joint,
                                         std::span<const double> theta_prev, double lambda,
                                         double sigma, double gamma, Rng& rng) {
  StationaryLearner learner(fs, space, joint);
  for (const LowEpisode& ep : episodes) learner.add_episode(ep);
  return learner.fit(theta_prev, lambda, sigma, gamma, rng);
}

}  // namespace dyadic
