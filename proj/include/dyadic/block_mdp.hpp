#pragma once

#include <functional>
#include <span>
#include <vector>

#include "dyadic/maze.hpp"

namespace dyadic {

struct Successor {
  int state;
  double prob;
};

// Finite-horizon MDP over one block: periods 0..horizon-1, each with the same
// state and action index sets. Transitions are stored sparsely.
class BlockMDP {
 public:
  BlockMDP(int horizon, int states, int actions);

  int horizon() const { return horizon_; }
  int states() const { return states_; }
  int actions() const { return actions_; }

  void set(int h, int s, int a, double reward, std::vector<Successor> next);
  double reward(int h, int s, int a) const { return reward_[index(h, s, a)]; }
  std::span<const Successor> next(int h, int s, int a) const { return next_[index(h, s, a)]; }

  // Throws InvalidInput naming the first bad (h, s, a): missing or
  // out-of-range successors, negative probabilities, rows not summing to 1
  // within 1e-12, non-finite rewards.
  void validate() const;

 private:
  std::size_t index(int h, int s, int a) const {
    return (static_cast<std::size_t>(h) * states_ + s) * actions_ + a;
  }

  int horizon_, states_, actions_;
  std::vector<double> reward_;
  std::vector<std::vector<Successor>> next_;
};

// Per period, per state.
using ValueTable = std::vector<std::vector<double>>;
using DeterministicPolicy = std::vector<std::vector<int>>;
using StochasticPolicy = std::vector<std::vector<std::vector<double>>>;
// Fills probs (length = actions) for period h, state s.
using PolicyFn = std::function<void(int h, int s, std::span<double> probs)>;

// Backward induction; row h holds V*_h, with V*_horizon = 0 implicit.
ValueTable optimal_values(const BlockMDP& mdp);
std::vector<double> optimal_block_values(const BlockMDP& mdp);

std::vector<double> policy_block_value(const BlockMDP& mdp, const DeterministicPolicy& policy);
std::vector<double> policy_block_value(const BlockMDP& mdp, const StochasticPolicy& policy);
std::vector<double> policy_block_value(const BlockMDP& mdp, const PolicyFn& policy);

// V^pi_0 at a single opening state by pushing the state distribution
// forward; touches only reachable states. Agrees with policy_block_value up
// to summation order.
double policy_value_from(const BlockMDP& mdp, int start, const PolicyFn& policy);

// Greedy deterministic policy w.r.t. optimal values (lowest action on ties).
DeterministicPolicy greedy_policy(const BlockMDP& mdp);

// Exact enumeration of one maze block (toy1/toy2: no tiredness). Period 0
// picks the maze from the weather state; periods 1..H move through it.
// States: [0, 2) weather at block start, then 2 + (weather*2 + maze)*cells
// + cell.
struct MazeBlockMDP {
  BlockMDP mdp;
  int cells;
  static int opening_state(int weather) { return weather; }
  int composite_state(int weather, int maze, int cell) const { return 2 + (weather * 2 + maze) * cells + cell; }
};

MazeBlockMDP build_maze_block_mdp(const MazeEnvConfig& config);

}  // namespace dyadic
