#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dyadic/environment.hpp"
#include "dyadic/random.hpp"

namespace dyadic {

enum class MazeVariant { kToy1, kToy2, kToy3, kToy4, kToy5 };
enum class RewardMode { kDense, kSparse };

// High state: 0 good weather, 1 bad. High action: 0 easy maze, 1 hard.
// Low action: 0 up, 1 down.
inline constexpr int kGoodWeather = 0;
inline constexpr int kBadWeather = 1;
inline constexpr int kEasyMaze = 0;
inline constexpr int kHardMaze = 1;
inline constexpr int kUp = 0;
inline constexpr int kDown = 1;

struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
};

struct MazeLayout {
  int columns = 8;
  int rows = 4;
  std::vector<bool> obstacle;  // indexed by cell_index
  Cell start{0, 0};
  Cell goal{7, 3};
  std::vector<int> score;  // indexed by cell_index; unused on obstacles
  double multiplier = 1.0;

  int cells() const { return columns * rows; }
  int cell_index(Cell c) const { return c.x * rows + c.y; }
  Cell cell_at(int index) const { return {index / rows, index % rows}; }
  bool inside(Cell c) const { return c.x >= 0 && c.x < columns && c.y >= 0 && c.y < rows; }
  bool blocked(Cell c) const { return !inside(c) || obstacle[static_cast<std::size_t>(cell_index(c))]; }
  int score_at(Cell c) const { return score[static_cast<std::size_t>(cell_index(c))]; }
};

MazeLayout easy_maze(RewardMode mode);
MazeLayout hard_maze(RewardMode mode);
const MazeLayout& maze_layout(int choice, RewardMode mode);

// Rows top to bottom: '#' obstacle, 'S' start, 'G' goal, '.' open; a blank
// line; then the score of every open cell ('#' on obstacles).
std::string dump_layout(const MazeLayout& layout);

// Checks the layout invariants for blocks of `periods` steps; returns the
// list of violations (empty when valid).
std::vector<std::string> check_layout(const MazeLayout& layout, int periods);

struct MazeEnvConfig {
  MazeVariant variant = MazeVariant::kToy1;
  RewardMode reward_mode = RewardMode::kDense;
  double tau_delayed = 0.0;
  double bad_weather_prob = 0.5;
  int blocks = 15;
  int periods = 7;
};

MazeEnvConfig maze_config(MazeVariant variant);
std::optional<MazeVariant> parse_maze_variant(std::string_view name);
std::string_view maze_variant_name(MazeVariant v);

// sum_{l=1}^{w-1} 0.5^{w-l} A_l with w - 1 = past.size().
double tiredness(std::span<const int> past_high_actions);
double move_prob(MazeVariant variant, int weather, double tiredness_value);

struct StepOutcome {
  Cell cell;
  double prob;
};

// Exact next-cell distribution (distinct cells, positive probabilities).
std::vector<StepOutcome> step_distribution(const MazeLayout& layout, Cell pos, int action, double p);
// Samples the same kernel; always consumes exactly two uniforms.
Cell maze_step(const MazeLayout& layout, Cell pos, int action, double p, Rng& rng);
double maze_reward(const MazeLayout& layout, Cell from, Cell to);

struct BlockStart {
  int weather;
  double tiredness;
};
BlockStart reset_block(const MazeEnvConfig& config, Rng& rng, std::span<const int> past_high_actions);

// The five-tuple (block, period, high state, high action, low state) with
// kNoAction standing in for NA.
struct FiveTuple {
  int block = 0;
  int period = 0;
  int high = 0;
  int high_action = kNoAction;
  int low = kNoAction;
  bool operator==(const FiveTuple&) const = default;
};

class TabularEnvironment : public DyadicEnvironment {
 public:
  virtual int high_state_count() const = 0;
  virtual int low_state_count() const = 0;
  virtual FiveTuple tuple() const = 0;
};

class MazeFeatures final : public FeatureSpace {
 public:
  MazeFeatures(int columns, int rows)
      : rows_(rows), phi_spec_{{2, 2, columns * rows, 2}}, psi_spec_{{2, 2}} {}
  std::size_t phi_dimension() const override;
  FeatureVector phi(std::span<const double> high, int a_high, std::span<const double> low,
                    int a_low) const override;
  std::size_t psi_dimension() const override { return 4; }
  FeatureVector psi(std::span<const double> high, int a_high) const override;

 private:
  int rows_;
  SpaceSpec phi_spec_;
  SpaceSpec psi_spec_;
};

class MazeEnvironment final : public TabularEnvironment {
 public:
  explicit MazeEnvironment(MazeEnvConfig config);

  int blocks() const override { return config_.blocks; }
  int periods() const override { return config_.periods; }
  int high_actions() const override { return 2; }
  int low_actions() const override { return 2; }
  const FeatureSpace& features() const override { return features_; }

  void begin_episode(Rng& rng) override;
  std::vector<double> begin_block(Rng& rng) override;
  void set_high_action(int a_high) override;
  std::vector<double> low_state() const override;
  double step(int a_low, Rng& rng) override;

  int high_state_count() const override { return 2; }
  int low_state_count() const override { return layout_cells_; }
  FiveTuple tuple() const override;

  const MazeEnvConfig& config() const { return config_; }
  int weather() const { return weather_; }
  double current_tiredness() const { return tiredness_; }
  double current_move_prob() const;
  Cell position() const { return pos_; }

 private:
  MazeEnvConfig config_;
  MazeFeatures features_;
  int layout_cells_;
  std::vector<int> past_high_;
  int block_ = -1;
  int period_ = 0;
  int steps_ = 0;
  int weather_ = kGoodWeather;
  double tiredness_ = 0.0;
  int choice_ = kNoAction;
  Cell pos_{};
};

}  // namespace dyadic
