#include "dyadic/block_mdp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dyadic/errors.hpp"

namespace dyadic {
namespace {

std::string where(int h, int s, int a) {
  return "(period " + std::to_string(h) + ", state " + std::to_string(s) + ", action " + std::to_string(a) + ")";
}

double expected_next(const BlockMDP& mdp, int h, int s, int a, const std::vector<double>* next_v) {
  double q = mdp.reward(h, s, a);
  if (next_v)
    for (const Successor& n : mdp.next(h, s, a)) q += n.prob * (*next_v)[static_cast<std::size_t>(n.state)];
  return q;
}

}  // namespace

BlockMDP::BlockMDP(int horizon, int states, int actions)
    : horizon_(horizon), states_(states), actions_(actions) {
  if (horizon < 1 || states < 1 || actions < 1) throw InvalidInput("block MDP sizes must be >= 1");
  const std::size_t n = static_cast<std::size_t>(horizon) * states * actions;
  reward_.assign(n, 0.0);
  next_.resize(n);
}

void BlockMDP::set(int h, int s, int a, double reward, std::vector<Successor> next) {
  if (h < 0 || h >= horizon_ || s < 0 || s >= states_ || a < 0 || a >= actions_)
    throw InvalidInput("block MDP index out of range " + where(h, s, a));
  reward_[index(h, s, a)] = reward;
  next_[index(h, s, a)] = std::move(next);
}

void BlockMDP::validate() const {
  for (int h = 0; h < horizon_; ++h)
    for (int s = 0; s < states_; ++s)
      for (int a = 0; a < actions_; ++a) {
        if (!std::isfinite(reward(h, s, a))) throw InvalidInput("non-finite reward at " + where(h, s, a));
        const auto nx = next(h, s, a);
        if (nx.empty()) throw InvalidInput("no transition defined at " + where(h, s, a));
        double total = 0.0;
        for (const Successor& n : nx) {
          if (n.state < 0 || n.state >= states_) throw InvalidInput("successor out of range at " + where(h, s, a));
          if (!(n.prob >= 0.0)) throw InvalidInput("negative probability at " + where(h, s, a));
          total += n.prob;
        }
        if (std::abs(total - 1.0) > 1e-12)
          throw InvalidInput("transition row sums to " + std::to_string(total) + " at " + where(h, s, a));
      }
}

ValueTable optimal_values(const BlockMDP& mdp) {
  mdp.validate();
  ValueTable v(static_cast<std::size_t>(mdp.horizon()), std::vector<double>(static_cast<std::size_t>(mdp.states())));
  for (int h = mdp.horizon() - 1; h >= 0; --h) {
    const std::vector<double>* next_v = h + 1 < mdp.horizon() ? &v[static_cast<std::size_t>(h + 1)] : nullptr;
    for (int s = 0; s < mdp.states(); ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < mdp.actions(); ++a) best = std::max(best, expected_next(mdp, h, s, a, next_v));
      v[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)] = best;
    }
  }
  return v;
}

std::vector<double> optimal_block_values(const BlockMDP& mdp) { return optimal_values(mdp).front(); }

DeterministicPolicy greedy_policy(const BlockMDP& mdp) {
  const ValueTable v = optimal_values(mdp);
  DeterministicPolicy pi(static_cast<std::size_t>(mdp.horizon()), std::vector<int>(static_cast<std::size_t>(mdp.states())));
  for (int h = 0; h < mdp.horizon(); ++h) {
    const std::vector<double>* next_v = h + 1 < mdp.horizon() ? &v[static_cast<std::size_t>(h + 1)] : nullptr;
    for (int s = 0; s < mdp.states(); ++s) {
      int best = 0;
      double best_q = expected_next(mdp, h, s, 0, next_v);
      for (int a = 1; a < mdp.actions(); ++a) {
        const double q = expected_next(mdp, h, s, a, next_v);
        if (q > best_q) best = a, best_q = q;
      }
      pi[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)] = best;
    }
  }
  return pi;
}

std::vector<double> policy_block_value(const BlockMDP& mdp, const PolicyFn& policy) {
  mdp.validate();
  const std::size_t S = static_cast<std::size_t>(mdp.states());
  std::vector<double> next_v, v(S, 0.0), probs(static_cast<std::size_t>(mdp.actions()));
  for (int h = mdp.horizon() - 1; h >= 0; --h) {
    next_v.swap(v);
    v.assign(S, 0.0);
    for (int s = 0; s < mdp.states(); ++s) {
      std::fill(probs.begin(), probs.end(), 0.0);
      policy(h, s, probs);
      double total = 0.0;
      for (double p : probs) {
        if (!(p >= 0.0)) throw InvalidInput("policy probabilities must be >= 0 at " + where(h, s, 0));
        total += p;
      }
      if (std::abs(total - 1.0) > 1e-9) throw InvalidInput("policy undefined at " + where(h, s, 0));
      double value = 0.0;
      for (int a = 0; a < mdp.actions(); ++a)
        if (probs[static_cast<std::size_t>(a)] > 0.0)
          value += probs[static_cast<std::size_t>(a)] *
                   expected_next(mdp, h, s, a, h + 1 < mdp.horizon() ? &next_v : nullptr);
      v[static_cast<std::size_t>(s)] = value;
    }
  }
  return v;
}

double policy_value_from(const BlockMDP& mdp, int start, const PolicyFn& policy) {
  if (start < 0 || start >= mdp.states()) throw InvalidInput("start state out of range");
  const std::size_t S = static_cast<std::size_t>(mdp.states());
  std::vector<double> dist(S, 0.0), next(S, 0.0), probs(static_cast<std::size_t>(mdp.actions()));
  std::vector<int> live{start}, next_live;
  dist[static_cast<std::size_t>(start)] = 1.0;
  double value = 0.0;
  for (int h = 0; h < mdp.horizon(); ++h) {
    next_live.clear();
    for (int s : live) {
      const double mass = dist[static_cast<std::size_t>(s)];
      dist[static_cast<std::size_t>(s)] = 0.0;
      std::fill(probs.begin(), probs.end(), 0.0);
      policy(h, s, probs);
      for (int a = 0; a < mdp.actions(); ++a) {
        const double pa = probs[static_cast<std::size_t>(a)];
        if (pa <= 0.0) continue;
        value += mass * pa * mdp.reward(h, s, a);
        for (const Successor& n : mdp.next(h, s, a)) {
          double& slot = next[static_cast<std::size_t>(n.state)];
          if (slot == 0.0) next_live.push_back(n.state);
          slot += mass * pa * n.prob;
        }
      }
    }
    dist.swap(next);
    live.swap(next_live);
  }
  return value;
}

std::vector<double> policy_block_value(const BlockMDP& mdp, const DeterministicPolicy& policy) {
  if (policy.size() != static_cast<std::size_t>(mdp.horizon()))
    throw InvalidInput("policy covers " + std::to_string(policy.size()) + " periods, MDP has " +
                       std::to_string(mdp.horizon()));
  for (const auto& row : policy)
    if (row.size() != static_cast<std::size_t>(mdp.states())) throw InvalidInput("policy misses states");
  return policy_block_value(mdp, PolicyFn([&](int h, int s, std::span<double> probs) {
    const int a = policy[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)];
    if (a < 0 || a >= mdp.actions()) throw InvalidInput("policy action out of range at " + where(h, s, a));
    probs[static_cast<std::size_t>(a)] = 1.0;
  }));
}

std::vector<double> policy_block_value(const BlockMDP& mdp, const StochasticPolicy& policy) {
  if (policy.size() != static_cast<std::size_t>(mdp.horizon()))
    throw InvalidInput("policy covers " + std::to_string(policy.size()) + " periods, MDP has " +
                       std::to_string(mdp.horizon()));
  for (const auto& row : policy) {
    if (row.size() != static_cast<std::size_t>(mdp.states())) throw InvalidInput("policy misses states");
    for (const auto& p : row)
      if (p.size() != static_cast<std::size_t>(mdp.actions())) throw InvalidInput("policy misses actions");
  }
  return policy_block_value(mdp, PolicyFn([&](int h, int s, std::span<double> probs) {
    const auto& p = policy[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)];
    std::copy(p.begin(), p.end(), probs.begin());
  }));
}

MazeBlockMDP build_maze_block_mdp(const MazeEnvConfig& config) {
  if (config.variant != MazeVariant::kToy1 && config.variant != MazeVariant::kToy2)
    throw ConfigError("exact block MDP exists only for toy1 and toy2 (no tiredness)");
  const MazeLayout& easy = maze_layout(kEasyMaze, config.reward_mode);
  const int cells = easy.cells();
  const int H = config.periods;
  MazeBlockMDP out{BlockMDP(H + 1, 2 + 4 * cells, 2), cells};
  BlockMDP& mdp = out.mdp;
  for (int h = 0; h <= H; ++h)
    for (int s = 0; s < mdp.states(); ++s)
      for (int a = 0; a < 2; ++a) mdp.set(h, s, a, 0.0, {{s, 1.0}});
  for (int weather : {kGoodWeather, kBadWeather})
    for (int maze : {kEasyMaze, kHardMaze}) {
      const MazeLayout& l = maze_layout(maze, config.reward_mode);
      mdp.set(0, MazeBlockMDP::opening_state(weather), maze, 0.0,
              {{out.composite_state(weather, maze, l.cell_index(l.start)), 1.0}});
      const double p = move_prob(config.variant, weather, 0.0);
      for (int h = 1; h <= H; ++h)
        for (int cell = 0; cell < cells; ++cell) {
          const Cell c = l.cell_at(cell);
          if (l.blocked(c)) continue;
          for (int a : {kUp, kDown}) {
            std::vector<Successor> next;
            double r = 0.0;
            for (const StepOutcome& o : step_distribution(l, c, a, p)) {
              next.push_back({out.composite_state(weather, maze, l.cell_index(o.cell)), o.prob});
              r += o.prob * maze_reward(l, c, o.cell);
            }
            mdp.set(h, out.composite_state(weather, maze, cell), a, r, std::move(next));
          }
        }
    }
  mdp.validate();
  return out;
}

}  // namespace dyadic
