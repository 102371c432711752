#include "dyadic/evaluation.hpp"

#include <cmath>
#include <string>

#include "dyadic/errors.hpp"

namespace dyadic {

Hyper theory_hyperparams(int horizon, int states, int actions, std::int64_t visits) {
  if (horizon < 1 || states < 1 || actions < 1)
    throw InvalidInput("theory hyperparameters need H, |S|, |A| >= 1");
  const double n = static_cast<double>(std::max<std::int64_t>(visits, 1));
  const double H = horizon, S = states, A = actions;
  const double lambda = 0.5 * H * H * H * S * std::log(2.0 * H * S * A * n);
  return {lambda, 1.0 / std::sqrt(lambda)};
}

MazeOracle::MazeOracle(const MazeEnvConfig& config, const FeatureSpace& features)
    : mdp_(build_maze_block_mdp(config)), features_(features), optimal_(optimal_block_values(mdp_.mdp)) {}

OracleValues MazeOracle::evaluate(int weather, const BlockPolicy& policy) const {
  if (weather != kGoodWeather && weather != kBadWeather) throw InvalidInput("weather must be 0 or 1");
  const BlockMDP& mdp = mdp_.mdp;
  const int cells = mdp_.cells;
  if (!policy.uniform) {
    if (policy.high_probs.size() != 2) throw InvalidInput("block policy needs two high-action probabilities");
    if (policy.theta.size() + 1 != static_cast<std::size_t>(mdp.horizon()))
      throw InvalidInput("block policy covers " + std::to_string(policy.theta.size()) + " periods");
  }
  const MazeLayout& layout = maze_layout(kEasyMaze, RewardMode::kDense);
  auto fn = [&](int h, int s, std::span<double> probs) {
    const int composite = s - 2;
    const bool opening = composite < 0;
    if (policy.uniform || (h == 0) != opening) {
      probs[0] = probs[1] = 0.5;
      return;
    }
    if (h == 0) {
      probs[0] = policy.high_probs[0];
      probs[1] = policy.high_probs[1];
      return;
    }
    const double high[1] = {static_cast<double>(composite / (2 * cells) )};
    const int maze = (composite / cells) % 2;
    const Cell c = layout.cell_at(composite % cells);
    const double low[2] = {static_cast<double>(c.x), static_cast<double>(c.y)};
    const auto& theta = policy.theta[static_cast<std::size_t>(h - 1)];
    const double q0 = features_.phi(high, maze, low, 0).dot(theta);
    const double q1 = features_.phi(high, maze, low, 1).dot(theta);
    if (q0 > q1) probs[0] = 1.0;
    else if (q1 > q0) probs[1] = 1.0;
    else probs[0] = probs[1] = 0.5;
  };
  return {optimal(weather), policy_value_from(mdp, MazeBlockMDP::opening_state(weather), PolicyFn(fn))};
}

BlockOracle MazeOracle::as_function() const {
  return [this](const BlockRecord& record, const BlockPolicy& policy) -> std::optional<OracleValues> {
    if (record.high_state.size() != 1) throw InvalidInput("maze oracle expects a one-component high state");
    return evaluate(static_cast<int>(record.high_state[0]), policy);
  };
}

std::vector<double> cumulative_regret(const RunHistory& history) {
  std::vector<double> curve;
  curve.reserve(history.records.size());
  double total = 0.0;
  for (const BlockRecord& r : history.records) {
    if (!r.oracle)
      throw InvalidInput("no oracle values for episode " + std::to_string(r.episode) + ", block " +
                         std::to_string(r.block));
    total += r.oracle->gap();
    curve.push_back(total);
  }
  return curve;
}

std::vector<MeanSe> aggregate(const std::vector<std::vector<double>>& curves) {
  if (curves.empty()) throw InvalidInput("aggregate: no repetitions");
  const std::size_t n = curves.front().size();
  for (const auto& c : curves)
    if (c.size() != n) throw InvalidInput("aggregate: curves differ in length");
  std::vector<MeanSe> out(n);
  std::vector<double> column(curves.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < curves.size(); ++r) column[r] = curves[r][i];
    out[i] = mean_se(column);
  }
  return out;
}

}  // namespace dyadic
