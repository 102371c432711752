#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dyadic/agents.hpp"
#include "dyadic/environment.hpp"

namespace dyadic {

inline constexpr double kBurdenGamma = 6.0 / 7.0;

// Variables in the order used by every per-variable array below.
enum TestbedVar { kHeart = 0, kSleep = 1, kSqrtStep = 2, kMoodTarget = 3, kMoodPartner = 4 };
inline constexpr int kTestbedVars = 5;

struct Range {
  double lo, hi;
};
// Raw-unit truncation bounds; both moods share the mood range.
Range testbed_range(int var);

struct VariableStats {
  double mean = 0.0;
  double std = 1.0;
};

struct ResidualModel {
  double rho = 0.0;           // AR(1) coefficient
  double innovation_sd = 1.0;
};

// Coefficients act on standardized values. Daily 6-vectors:
// (intercept, heart, sleep, sqrtstep, target mood, partner mood). Mood
// 3-vectors: (intercept, target mood, partner mood).
struct DyadModel {
  std::array<double, 6> beta_heart{};
  std::array<double, 6> beta_sleep{};
  std::array<double, 6> beta_sqrtstep{};
  std::array<double, 3> theta_mood_target{};
  std::array<double, 3> theta_mood_partner{};
  std::array<ResidualModel, kTestbedVars> residual{};
  double tau0 = 0.0;
  double tau1 = 0.0;
  double tau_high = 0.0;
  // heart, sleep, sqrtstep, mood (shared by both members).
  std::array<VariableStats, 4> stats{};

  bool operator==(const DyadModel&) const;
};

// Sets tau0, tau1, tau_high from beta_sqrtstep.
void derive_effects(DyadModel& model);

// Throws InvalidInput naming the offending field.
void check_model(const DyadModel& model);

enum class MoodEffect { kNone, kWeak, kStrong, kExtreme };
std::string_view mood_effect_name(MoodEffect e);
std::optional<MoodEffect> parse_mood_effect(std::string_view name);
double tau_mood(const DyadModel& model, MoodEffect effect);

struct EffectConfig {
  int b1_k = 1;
  int b2_k = 2;
  MoodEffect mood_effect = MoodEffect::kNone;
};

// b(k) = (1 - gamma) sum_{i=1..k} gamma^(k-i).
double b_threshold(int k, double gamma = kBurdenGamma);
// (1 - gamma) sum_s A_s gamma^(h-s) over the week's actions so far.
double burden(std::span<const int> week_actions, double gamma = kBurdenGamma);
// Burdens of every day so far this week (current day last).
double effective_low_effect(const DyadModel& model, std::span<const double> week_burdens, double b1,
                            double b2);

// Standardized dyad state.
struct DyadState {
  std::array<double, kTestbedVars> z{};
  std::array<double, kTestbedVars> residual{};
};

double to_raw(const DyadModel& m, int var, double z);
double to_standard(const DyadModel& m, int var, double raw);
// Clamps var to its raw range (in standardized units).
double truncate_standard(const DyadModel& m, int var, double z);

// Advances heart/sleep/sqrtstep one day. Draws three normals.
void daily_transition(const DyadModel& m, DyadState& s, int a_high, int a_low, double low_effect,
                      Rng& rng);
// Advances both moods one week. Draws two normals.
void weekly_transition(const DyadModel& m, DyadState& s, int a_high, double mood_tau, Rng& rng);

struct GeneratorConfig {
  Range daily_ar{0.2, 0.6};
  Range daily_cross{-0.1, 0.1};
  Range intercept{-0.3, 0.3};
  Range mood_ar{0.3, 0.7};
  Range mood_cross{-0.1, 0.1};
  Range residual_rho{0.2, 0.5};
  std::array<VariableStats, 4> stats{{{80.0, 10.0}, {25200.0, 3600.0}, {90.0, 30.0}, {6.0, 1.5}}};
  int max_redraws = 1000;
};

std::vector<DyadModel> synth_dyad_models(int n, Rng& rng, const GeneratorConfig& config = {});

class TestbedFeatures final : public FeatureSpace {
 public:
  std::size_t phi_dimension() const override;
  FeatureVector phi(std::span<const double> high, int a_high, std::span<const double> low,
                    int a_low) const override;
  std::size_t psi_dimension() const override;
  FeatureVector psi(std::span<const double> high, int a_high) const override;
};

// Each episode samples one dyad uniformly (with replacement) from the model
// list. High state: standardized moods (target, partner); low state:
// standardized (heart, sleep, sqrtstep); reward: next day's standardized
// sqrtstep.
class TestbedEnvironment final : public DyadicEnvironment {
 public:
  TestbedEnvironment(std::shared_ptr<const std::vector<DyadModel>> models, EffectConfig effect, int blocks = 14,
                     int periods = 7);

  int blocks() const override { return W_; }
  int periods() const override { return H_; }
  int high_actions() const override { return 2; }
  int low_actions() const override { return 2; }
  const FeatureSpace& features() const override { return features_; }

  void begin_episode(Rng& rng) override;
  std::vector<double> begin_block(Rng& rng) override;
  void set_high_action(int a_high) override;
  std::vector<double> low_state() const override;
  double step(int a_low, Rng& rng) override;

  std::size_t dyad() const { return dyad_; }
  const DyadState& state() const { return state_; }
  double current_burden() const { return burdens_.empty() ? 0.0 : burdens_.back(); }

 private:
  const DyadModel& model() const { return (*models_)[dyad_]; }

  std::shared_ptr<const std::vector<DyadModel>> models_;
  EffectConfig effect_;
  double b1_, b2_;
  int W_, H_;
  TestbedFeatures features_;
  std::size_t dyad_ = 0;
  DyadState state_;
  int block_ = -1;
  int a_high_ = kNoAction;
  std::vector<int> week_actions_;
  std::vector<double> burdens_;
};

struct TrialResult {
  std::vector<double> dyad_totals;
  double total = 0.0;
  RunHistory history;
};

TrialResult run_trial(std::shared_ptr<const std::vector<DyadModel>> models, Algorithm algo, int n_dyads, int W,
                      int H, const EffectConfig& effect, const AgentConfig& config, std::uint64_t seed,
                      bool keep_periods = false);

}  // namespace dyadic
