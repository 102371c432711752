#pragma once

#include <vector>

#include "dyadic/agents.hpp"
#include "dyadic/block_mdp.hpp"
#include "dyadic/stats.hpp"
#include "dyadic/theory.hpp"

namespace dyadic {

// Exact regret oracle for toy1/toy2: V*_0 at the block's weather against the
// value of the policy the agent followed in that block (greedy on each
// period's weights, uniform over ties; uniform everywhere in warm blocks).
class MazeOracle {
 public:
  MazeOracle(const MazeEnvConfig& config, const FeatureSpace& features);

  OracleValues evaluate(int weather, const BlockPolicy& policy) const;
  double optimal(int weather) const { return optimal_[static_cast<std::size_t>(weather)]; }
  const MazeBlockMDP& block_mdp() const { return mdp_; }

  BlockOracle as_function() const;

 private:
  MazeBlockMDP mdp_;
  const FeatureSpace& features_;
  std::vector<double> optimal_;
};

// Running sum of per-block gaps in record order; every record needs oracle
// values.
std::vector<double> cumulative_regret(const RunHistory& history);

// Pointwise mean and standard error across repetitions (equal lengths).
std::vector<MeanSe> aggregate(const std::vector<std::vector<double>>& curves);

}  // namespace dyadic
