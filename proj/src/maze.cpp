#include "dyadic/maze.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "dyadic/errors.hpp"

namespace dyadic {
namespace {

// Column score profiles; see the layout notes in the README.
constexpr std::array<int, 8> kHardDense{0, 0, 0, 0, 1, 2, 3, 4};
constexpr std::array<int, 8> kHardSparse{0, 0, 0, 0, 1, 2, 2, 2};
constexpr std::array<int, 8> kEasyDense{0, 0, 1, 2, 2, 2, 3, 4};
constexpr std::array<int, 8> kEasySparse{0, 0, 1, 1, 2, 2, 2, 2};

MazeLayout base_layout(const std::array<int, 8>& columns, double multiplier) {
  MazeLayout l;
  l.obstacle.assign(static_cast<std::size_t>(l.cells()), false);
  l.score.assign(static_cast<std::size_t>(l.cells()), 0);
  for (int x = 0; x < l.columns; ++x)
    for (int y = 0; y < l.rows; ++y) l.score[static_cast<std::size_t>(l.cell_index({x, y}))] = columns[x];
  l.multiplier = multiplier;
  return l;
}

int direction(int action) {
  if (action == kUp) return 1;
  if (action == kDown) return -1;
  throw InvalidInput("maze action must be 0 (up) or 1 (down)");
}

Cell after_vertical(const MazeLayout& l, Cell pos, int dy) {
  const Cell next{pos.x, pos.y + dy};
  return l.blocked(next) ? pos : next;
}

Cell after_horizontal(const MazeLayout& l, Cell pos, bool moves) {
  const Cell next{pos.x + 1, pos.y};
  return (!moves || l.blocked(next)) ? pos : next;
}

void check_position(const MazeLayout& l, Cell pos) {
  if (l.blocked(pos))
    throw InvalidInput("maze position (" + std::to_string(pos.x) + "," + std::to_string(pos.y) +
                       ") is outside the grid or on an obstacle");
}

}  // namespace

MazeLayout easy_maze(RewardMode mode) {
  return base_layout(mode == RewardMode::kDense ? kEasyDense : kEasySparse, 1.0);
}

MazeLayout hard_maze(RewardMode mode) {
  MazeLayout l = base_layout(mode == RewardMode::kDense ? kHardDense : kHardSparse, 1.2);
  // (3,3) becomes a dead end: walled in below by (3,2) and to the right by
  // (4,3); (3,1) additionally splits the middle rows.
  for (Cell c : {Cell{3, 2}, Cell{4, 3}, Cell{3, 1}}) l.obstacle[static_cast<std::size_t>(l.cell_index(c))] = true;
  l.score[static_cast<std::size_t>(l.cell_index({3, 3}))] = 1;
  return l;
}

const MazeLayout& maze_layout(int choice, RewardMode mode) {
  static const MazeLayout layouts[2][2] = {
      {easy_maze(RewardMode::kDense), easy_maze(RewardMode::kSparse)},
      {hard_maze(RewardMode::kDense), hard_maze(RewardMode::kSparse)}};
  if (choice != kEasyMaze && choice != kHardMaze) throw InvalidInput("maze choice must be 0 or 1");
  return layouts[choice][mode == RewardMode::kDense ? 0 : 1];
}

std::string dump_layout(const MazeLayout& l) {
  std::ostringstream os;
  for (int y = l.rows - 1; y >= 0; --y) {
    for (int x = 0; x < l.columns; ++x) {
      const Cell c{x, y};
      char ch = '.';
      if (l.obstacle[static_cast<std::size_t>(l.cell_index(c))]) ch = '#';
      else if (c == l.start) ch = 'S';
      else if (c == l.goal) ch = 'G';
      os << ch;
    }
    os << '\n';
  }
  os << '\n';
  for (int y = l.rows - 1; y >= 0; --y) {
    for (int x = 0; x < l.columns; ++x) {
      const Cell c{x, y};
      if (l.obstacle[static_cast<std::size_t>(l.cell_index(c))]) os << '#';
      else os << l.score_at(c);
    }
    os << '\n';
  }
  return os.str();
}

std::vector<std::string> check_layout(const MazeLayout& l, int periods) {
  std::vector<std::string> bad;
  if (static_cast<int>(l.obstacle.size()) != l.cells() || static_cast<int>(l.score.size()) != l.cells()) {
    bad.push_back("obstacle/score grids have the wrong size");
    return bad;
  }
  if (l.blocked(l.start)) bad.push_back("start is blocked");
  if (l.blocked(l.goal)) bad.push_back("goal is blocked");
  if (!bad.empty()) return bad;
  // Reachability with p = 1: each step moves vertically as chosen then right.
  std::vector<int> dist(static_cast<std::size_t>(l.cells()), -1);
  std::deque<Cell> queue{l.start};
  dist[static_cast<std::size_t>(l.cell_index(l.start))] = 0;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    if (c == l.goal) continue;
    for (int a : {kUp, kDown}) {
      const Cell n = after_horizontal(l, after_vertical(l, c, direction(a)), true);
      int& d = dist[static_cast<std::size_t>(l.cell_index(n))];
      if (d < 0) {
        d = dist[static_cast<std::size_t>(l.cell_index(c))] + 1;
        queue.push_back(n);
      }
    }
  }
  const int goal_dist = dist[static_cast<std::size_t>(l.cell_index(l.goal))];
  if (goal_dist < 0 || goal_dist > periods)
    bad.push_back("goal not reachable within " + std::to_string(periods) + " steps");
  // Scores: nonnegative and never decreasing over any transition with
  // positive probability for some p in (0, 1).
  for (int i = 0; i < l.cells(); ++i) {
    const Cell c = l.cell_at(i);
    if (l.blocked(c)) continue;
    if (l.score_at(c) < 0) bad.push_back("negative score at cell " + std::to_string(i));
    for (int a : {kUp, kDown})
      for (const StepOutcome& o : step_distribution(l, c, a, 0.5))
        if (l.score_at(o.cell) < l.score_at(c))
          bad.push_back("score decreases from cell " + std::to_string(i) + " to cell " +
                        std::to_string(l.cell_index(o.cell)));
  }
  return bad;
}

MazeEnvConfig maze_config(MazeVariant variant) {
  MazeEnvConfig c;
  c.variant = variant;
  switch (variant) {
    case MazeVariant::kToy1: c.reward_mode = RewardMode::kDense; c.tau_delayed = 0.0; break;
    case MazeVariant::kToy2: c.reward_mode = RewardMode::kSparse; c.tau_delayed = 0.0; break;
    case MazeVariant::kToy3: c.reward_mode = RewardMode::kSparse; c.tau_delayed = 1.0 / 3.0; break;
    case MazeVariant::kToy4: c.reward_mode = RewardMode::kSparse; c.tau_delayed = 2.0 / 3.0; break;
    case MazeVariant::kToy5: c.reward_mode = RewardMode::kSparse; c.tau_delayed = 1.0; break;
  }
  return c;
}

std::string_view maze_variant_name(MazeVariant v) {
  switch (v) {
    case MazeVariant::kToy1: return "toy1";
    case MazeVariant::kToy2: return "toy2";
    case MazeVariant::kToy3: return "toy3";
    case MazeVariant::kToy4: return "toy4";
    case MazeVariant::kToy5: return "toy5";
  }
  return "unknown";
}

std::optional<MazeVariant> parse_maze_variant(std::string_view name) {
  for (MazeVariant v : {MazeVariant::kToy1, MazeVariant::kToy2, MazeVariant::kToy3, MazeVariant::kToy4,
                        MazeVariant::kToy5})
    if (maze_variant_name(v) == name) return v;
  return std::nullopt;
}

double tiredness(std::span<const int> past) {
  const std::size_t w = past.size() + 1;
  double t = 0.0;
  for (std::size_t l = 1; l < w; ++l)
    if (past[l - 1] != 0) t += std::pow(0.5, static_cast<double>(w - l));
  return t;
}

double move_prob(MazeVariant variant, int weather, double tiredness_value) {
  const bool good = weather == kGoodWeather;
  double p = 0.0;
  switch (variant) {
    case MazeVariant::kToy1:
    case MazeVariant::kToy2: p = good ? 0.9 : 0.6; break;
    case MazeVariant::kToy3: p = (good ? 1.0 : 0.7) - 0.1 * tiredness_value; break;
    case MazeVariant::kToy4: p = (good ? 1.0 : 0.7) - 0.2 * tiredness_value; break;
    case MazeVariant::kToy5: p = (good ? 1.0 : 0.7) - 0.3 * tiredness_value; break;
  }
  return std::clamp(p, 0.0, 1.0);
}

std::vector<StepOutcome> step_distribution(const MazeLayout& l, Cell pos, int action, double p) {
  check_position(l, pos);
  const int dy = direction(action);
  if (pos == l.goal) return {{pos, 1.0}};
  std::vector<StepOutcome> out;
  auto add = [&](Cell c, double pr) {
    if (pr <= 0.0) return;
    for (StepOutcome& o : out)
      if (o.cell == c) {
        o.prob += pr;
        return;
      }
    out.push_back({c, pr});
  };
  const double off = (1.0 - p) / 2.0;
  const std::array<std::pair<int, double>, 3> vertical{{{dy, p}, {0, off}, {-dy, off}}};
  for (const auto& [vy, pv] : vertical) {
    const Cell v = after_vertical(l, pos, vy);
    add(after_horizontal(l, v, true), pv * p);
    add(after_horizontal(l, v, false), pv * (1.0 - p));
  }
  return out;
}

Cell maze_step(const MazeLayout& l, Cell pos, int action, double p, Rng& rng) {
  check_position(l, pos);
  const int dy = direction(action);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u_vertical = unif(rng);
  const double u_right = unif(rng);
  if (pos == l.goal) return pos;
  int vy = 0;
  if (u_vertical < p) vy = dy;
  else if (u_vertical < p + (1.0 - p) / 2.0) vy = 0;
  else vy = -dy;
  return after_horizontal(l, after_vertical(l, pos, vy), u_right < p);
}

double maze_reward(const MazeLayout& l, Cell from, Cell to) {
  check_position(l, from);
  check_position(l, to);
  return l.multiplier * static_cast<double>(l.score_at(to) - l.score_at(from));
}

BlockStart reset_block(const MazeEnvConfig& config, Rng& rng, std::span<const int> past) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int weather = unif(rng) < config.bad_weather_prob ? kBadWeather : kGoodWeather;
  return {weather, tiredness(past)};
}

// ---------------------------------------------------------------------------

std::size_t MazeFeatures::phi_dimension() const {
  return phi_spec_.dimension();
}

FeatureVector MazeFeatures::phi(std::span<const double> high, int a_high, std::span<const double> low,
                                int a_low) const {
  if (high.size() != 1 || low.size() != 2) throw InvalidInput("maze features: malformed state");
  const int cell = static_cast<int>(low[0]) * rows_ + static_cast<int>(low[1]);
  const int idx[4] = {static_cast<int>(high[0]), a_high, cell, a_low};
  return one_hot(phi_spec_, idx);
}

FeatureVector MazeFeatures::psi(std::span<const double> high, int a_high) const {
  if (high.size() != 1) throw InvalidInput("maze features: malformed high state");
  const int idx[2] = {static_cast<int>(high[0]), a_high};
  return one_hot(psi_spec_, idx);
}

MazeEnvironment::MazeEnvironment(MazeEnvConfig config)
    : config_(config), features_(8, 4), layout_cells_(32) {
  if (config_.blocks < 1 || config_.periods < 1) throw ConfigError("maze needs W >= 1 and H >= 1");
  if (!(config_.bad_weather_prob >= 0.0 && config_.bad_weather_prob <= 1.0))
    throw ConfigError("weather probability must be in [0,1]");
}

void MazeEnvironment::begin_episode(Rng&) {
  past_high_.clear();
  block_ = -1;
  period_ = 0;
  choice_ = kNoAction;
}

std::vector<double> MazeEnvironment::begin_block(Rng& rng) {
  const BlockStart b = reset_block(config_, rng, past_high_);
  ++block_;
  period_ = 0;
  weather_ = b.weather;
  tiredness_ = b.tiredness;
  choice_ = kNoAction;
  steps_ = 0;
  pos_ = maze_layout(kEasyMaze, config_.reward_mode).start;
  return {static_cast<double>(weather_)};
}

void MazeEnvironment::set_high_action(int a_high) {
  if (a_high != kEasyMaze && a_high != kHardMaze) throw InvalidInput("maze choice must be 0 or 1");
  if (period_ != 0 || choice_ != kNoAction) throw InvalidInput("maze choice is made once, at block start");
  choice_ = a_high;
  past_high_.push_back(a_high);
  period_ = 1;
  pos_ = maze_layout(choice_, config_.reward_mode).start;
}

std::vector<double> MazeEnvironment::low_state() const {
  return {static_cast<double>(pos_.x), static_cast<double>(pos_.y)};
}

double MazeEnvironment::current_move_prob() const {
  const double t = config_.tau_delayed > 0.0 ? tiredness_ : 0.0;
  return move_prob(config_.variant, weather_, t);
}

double MazeEnvironment::step(int a_low, Rng& rng) {
  if (choice_ == kNoAction) throw InvalidInput("maze step before the maze was chosen");
  if (steps_ >= config_.periods) throw InvalidInput("maze step past the end of the block");
  ++steps_;
  const MazeLayout& l = maze_layout(choice_, config_.reward_mode);
  const Cell next = maze_step(l, pos_, a_low, current_move_prob(), rng);
  const double r = maze_reward(l, pos_, next);
  pos_ = next;
  // Period H is the last one; the next state is the following block's
  // period 0, which begin_block reports.
  if (period_ < config_.periods) ++period_;
  return r;
}

FiveTuple MazeEnvironment::tuple() const {
  if (period_ == 0) return {block_, 0, weather_, kNoAction, kNoAction};
  return {block_, period_, weather_, choice_, pos_.x * 4 + pos_.y};
}

}  // namespace dyadic
