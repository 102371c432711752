#include "dyadic/testbed.hpp"

#include <cmath>
#include <string>

#include "dyadic/errors.hpp"

namespace dyadic {
namespace {

constexpr std::array<const char*, kTestbedVars> kResidualNames{"heart", "sleep", "sqrtstep", "mood_target",
                                                               "mood_partner"};

int stats_slot(int var) { return var >= kMoodTarget ? 3 : var; }

template <std::size_t N>
double linear(const std::array<double, N>& coef, const std::array<double, N>& x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) sum += coef[i] * x[i];
  return sum;
}

template <std::size_t N>
void check_finite(const std::array<double, N>& v, const std::string& name) {
  for (std::size_t i = 0; i < N; ++i)
    if (!std::isfinite(v[i])) throw InvalidInput(name + "[" + std::to_string(i) + "] is not finite");
}

double draw(const Range& r, Rng& rng) { return std::uniform_real_distribution<double>(r.lo, r.hi)(rng); }

}  // namespace

Range testbed_range(int var) {
  switch (var) {
    case kHeart: return {55.0, 120.0};
    case kSleep: return {0.0, 43200.0};
    case kSqrtStep: return {0.0, 200.0};
    case kMoodTarget:
    case kMoodPartner: return {0.0, 10.0};
  }
  throw InvalidInput("unknown test-bed variable " + std::to_string(var));
}

bool DyadModel::operator==(const DyadModel& o) const {
  auto same_res = [](const ResidualModel& a, const ResidualModel& b) {
    return a.rho == b.rho && a.innovation_sd == b.innovation_sd;
  };
  for (int i = 0; i < kTestbedVars; ++i)
    if (!same_res(residual[static_cast<std::size_t>(i)], o.residual[static_cast<std::size_t>(i)])) return false;
  for (std::size_t i = 0; i < stats.size(); ++i)
    if (stats[i].mean != o.stats[i].mean || stats[i].std != o.stats[i].std) return false;
  return beta_heart == o.beta_heart && beta_sleep == o.beta_sleep && beta_sqrtstep == o.beta_sqrtstep &&
         theta_mood_target == o.theta_mood_target && theta_mood_partner == o.theta_mood_partner &&
         tau0 == o.tau0 && tau1 == o.tau1 && tau_high == o.tau_high;
}

void derive_effects(DyadModel& m) {
  const double slope = m.beta_sqrtstep[3];
  m.tau0 = slope / 5.0;
  m.tau1 = slope / 10.0;
  m.tau_high = slope / 25.0;
}

void check_model(const DyadModel& m) {
  check_finite(m.beta_heart, "beta_heart");
  check_finite(m.beta_sleep, "beta_sleep");
  check_finite(m.beta_sqrtstep, "beta_sqrtstep");
  check_finite(m.theta_mood_target, "theta_mood_target");
  check_finite(m.theta_mood_partner, "theta_mood_partner");
  for (int i = 0; i < kTestbedVars; ++i) {
    const ResidualModel& r = m.residual[static_cast<std::size_t>(i)];
    const std::string name = std::string("residual.") + kResidualNames[static_cast<std::size_t>(i)];
    if (!(std::abs(r.rho) < 1.0)) throw InvalidInput(name + ".rho must satisfy |rho| < 1");
    if (!(r.innovation_sd > 0.0) || !std::isfinite(r.innovation_sd))
      throw InvalidInput(name + ".innovation_sd must be positive");
  }
  static constexpr std::array<const char*, 4> kStatNames{"heart", "sleep", "sqrtstep", "mood"};
  for (std::size_t i = 0; i < m.stats.size(); ++i)
    if (!std::isfinite(m.stats[i].mean) || !(m.stats[i].std > 0.0) || !std::isfinite(m.stats[i].std))
      throw InvalidInput(std::string("stats.") + kStatNames[i] + " needs a finite mean and positive std");
  DyadModel expect = m;
  derive_effects(expect);
  if (m.tau0 != expect.tau0) throw InvalidInput("tau0 must equal beta_sqrtstep[3] / 5");
  if (m.tau1 != expect.tau1) throw InvalidInput("tau1 must equal beta_sqrtstep[3] / 10");
  if (m.tau_high != expect.tau_high) throw InvalidInput("tau_high must equal beta_sqrtstep[3] / 25");
}

std::string_view mood_effect_name(MoodEffect e) {
  switch (e) {
    case MoodEffect::kNone: return "none";
    case MoodEffect::kWeak: return "weak";
    case MoodEffect::kStrong: return "strong";
    case MoodEffect::kExtreme: return "extreme";
  }
  return "unknown";
}

std::optional<MoodEffect> parse_mood_effect(std::string_view name) {
  for (MoodEffect e : {MoodEffect::kNone, MoodEffect::kWeak, MoodEffect::kStrong, MoodEffect::kExtreme})
    if (mood_effect_name(e) == name) return e;
  return std::nullopt;
}

double tau_mood(const DyadModel& m, MoodEffect effect) {
  const double theta = m.theta_mood_target[1];
  switch (effect) {
    case MoodEffect::kNone: return 0.0;
    case MoodEffect::kWeak: return theta / 50.0;
    case MoodEffect::kStrong: return theta / 25.0;
    case MoodEffect::kExtreme: return 2.0 * theta / 25.0;
  }
  return 0.0;
}

// Both helpers run the same Horner recursion, so b(k) and the burden of k
// trailing treatments on day k are the same double.
double b_threshold(int k, double gamma) {
  if (k < 1) throw InvalidInput("b(k) needs k >= 1, got " + std::to_string(k));
  double acc = 0.0;
  for (int i = 0; i < k; ++i) acc = acc * gamma + 1.0;
  return (1.0 - gamma) * acc;
}

double burden(std::span<const int> week_actions, double gamma) {
  double acc = 0.0;
  for (int a : week_actions) acc = acc * gamma + (a != 0 ? 1.0 : 0.0);
  return (1.0 - gamma) * acc;
}

double effective_low_effect(const DyadModel& m, std::span<const double> week_burdens, double b1, double b2) {
  for (double b : week_burdens)
    if (b > b2) return 0.0;
  const double current = week_burdens.empty() ? 0.0 : week_burdens.back();
  return current >= b1 ? m.tau0 - m.tau1 : m.tau0;
}

double to_raw(const DyadModel& m, int var, double z) {
  const VariableStats& s = m.stats[static_cast<std::size_t>(stats_slot(var))];
  return s.mean + s.std * z;
}

double to_standard(const DyadModel& m, int var, double raw) {
  const VariableStats& s = m.stats[static_cast<std::size_t>(stats_slot(var))];
  return (raw - s.mean) / s.std;
}

double truncate_standard(const DyadModel& m, int var, double z) {
  const Range r = testbed_range(var);
  const double raw = to_raw(m, var, z);
  if (raw < r.lo) return to_standard(m, var, r.lo);
  if (raw > r.hi) return to_standard(m, var, r.hi);
  return z;
}

void daily_transition(const DyadModel& m, DyadState& s, int a_high, int a_low, double low_effect, Rng& rng) {
  std::normal_distribution<double> normal;
  const std::array<double, 6> x{1.0, s.z[kHeart], s.z[kSleep], s.z[kSqrtStep], s.z[kMoodTarget],
                                s.z[kMoodPartner]};
  const std::array<const std::array<double, 6>*, 3> beta{&m.beta_heart, &m.beta_sleep, &m.beta_sqrtstep};
  std::array<double, 3> next{};
  for (int v = 0; v < 3; ++v) {
    const ResidualModel& rm = m.residual[static_cast<std::size_t>(v)];
    double& res = s.residual[static_cast<std::size_t>(v)];
    res = rm.rho * res + rm.innovation_sd * normal(rng);
    double pred = linear(*beta[static_cast<std::size_t>(v)], x);
    if (v == kSqrtStep) pred += m.tau_high * a_high + low_effect * a_low;
    next[static_cast<std::size_t>(v)] = truncate_standard(m, v, pred + res);
  }
  for (int v = 0; v < 3; ++v) s.z[static_cast<std::size_t>(v)] = next[static_cast<std::size_t>(v)];
}

void weekly_transition(const DyadModel& m, DyadState& s, int a_high, double mood_tau, Rng& rng) {
  std::normal_distribution<double> normal;
  const std::array<double, 3> x{1.0, s.z[kMoodTarget], s.z[kMoodPartner]};
  const std::array<const std::array<double, 3>*, 2> theta{&m.theta_mood_target, &m.theta_mood_partner};
  std::array<double, 2> next{};
  for (int i = 0; i < 2; ++i) {
    const int v = kMoodTarget + i;
    const ResidualModel& rm = m.residual[static_cast<std::size_t>(v)];
    double& res = s.residual[static_cast<std::size_t>(v)];
    res = rm.rho * res + rm.innovation_sd * normal(rng);
    const double pred = linear(*theta[static_cast<std::size_t>(i)], x) + mood_tau * a_high;
    next[static_cast<std::size_t>(i)] = truncate_standard(m, v, pred + res);
  }
  s.z[kMoodTarget] = next[0];
  s.z[kMoodPartner] = next[1];
}

std::vector<DyadModel> synth_dyad_models(int n, Rng& rng, const GeneratorConfig& g) {
  if (n < 0) throw InvalidInput("model count must be >= 0");
  std::vector<DyadModel> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) {
    DyadModel m;
    int attempts = 0;
    for (;;) {
      if (++attempts > g.max_redraws)
        throw ConfigError("generator produced unstable dynamics " + std::to_string(g.max_redraws) + " times");
      std::array<std::array<double, 6>*, 3> betas{&m.beta_heart, &m.beta_sleep, &m.beta_sqrtstep};
      double daily_norm = 0.0;
      for (int v = 0; v < 3; ++v) {
        auto& b = *betas[static_cast<std::size_t>(v)];
        b[0] = draw(g.intercept, rng);
        for (int j = 0; j < 3; ++j) b[static_cast<std::size_t>(1 + j)] = j == v ? draw(g.daily_ar, rng) : draw(g.daily_cross, rng);
        b[4] = draw(g.daily_cross, rng);
        b[5] = draw(g.daily_cross, rng);
        daily_norm = std::max(daily_norm, std::abs(b[1]) + std::abs(b[2]) + std::abs(b[3]));
      }
      std::array<std::array<double, 3>*, 2> thetas{&m.theta_mood_target, &m.theta_mood_partner};
      double mood_norm = 0.0;
      for (int i = 0; i < 2; ++i) {
        auto& t = *thetas[static_cast<std::size_t>(i)];
        t[0] = draw(g.intercept, rng);
        t[1] = i == 0 ? draw(g.mood_ar, rng) : draw(g.mood_cross, rng);
        t[2] = i == 1 ? draw(g.mood_ar, rng) : draw(g.mood_cross, rng);
        mood_norm = std::max(mood_norm, std::abs(t[1]) + std::abs(t[2]));
      }
      for (auto& r : m.residual) {
        r.rho = draw(g.residual_rho, rng);
        r.innovation_sd = std::sqrt(1.0 - r.rho * r.rho);
      }
      // Row-sum norm below 1 keeps both autoregressions contractive.
      if (daily_norm < 1.0 && mood_norm < 1.0) break;
    }
    m.stats = g.stats;
    derive_effects(m);
    check_model(m);
    out.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::size_t TestbedFeatures::phi_dimension() const { return linear_dimension(6, 2); }
std::size_t TestbedFeatures::psi_dimension() const { return linear_dimension(2, 2); }

FeatureVector TestbedFeatures::phi(std::span<const double> high, int a_high, std::span<const double> low,
                                   int a_low) const {
  if (high.size() != 2 || low.size() != 3) throw InvalidInput("test-bed features: malformed state");
  const double x[6] = {high[0], high[1], static_cast<double>(a_high), low[0], low[1], low[2]};
  return linear_features(x, 2, a_low);
}

FeatureVector TestbedFeatures::psi(std::span<const double> high, int a_high) const {
  if (high.size() != 2) throw InvalidInput("test-bed features: malformed high state");
  return linear_features(high, 2, a_high);
}

TestbedEnvironment::TestbedEnvironment(std::shared_ptr<const std::vector<DyadModel>> models, EffectConfig effect,
                                       int blocks, int periods)
    : models_(std::move(models)), effect_(effect), W_(blocks), H_(periods) {
  if (!models_ || models_->empty()) throw InvalidInput("test bed needs at least one dyad model");
  if (W_ < 1 || H_ < 1) throw ConfigError("test bed needs W >= 1 and H >= 1");
  b1_ = b_threshold(effect_.b1_k);
  b2_ = b_threshold(effect_.b2_k);
  for (const DyadModel& m : *models_) check_model(m);
}

void TestbedEnvironment::begin_episode(Rng& rng) {
  dyad_ = std::uniform_int_distribution<std::size_t>(0, models_->size() - 1)(rng);
  std::normal_distribution<double> normal;
  state_ = DyadState{};
  for (int v = 0; v < kTestbedVars; ++v)
    state_.z[static_cast<std::size_t>(v)] = truncate_standard(model(), v, normal(rng));
  block_ = -1;
  a_high_ = kNoAction;
}

std::vector<double> TestbedEnvironment::begin_block(Rng& rng) {
  if (block_ >= 0) weekly_transition(model(), state_, a_high_, tau_mood(model(), effect_.mood_effect), rng);
  ++block_;
  a_high_ = kNoAction;
  week_actions_.clear();
  burdens_.clear();
  return {state_.z[kMoodTarget], state_.z[kMoodPartner]};
}

void TestbedEnvironment::set_high_action(int a_high) {
  if (a_high != 0 && a_high != 1) throw InvalidInput("test-bed high action must be 0 or 1");
  a_high_ = a_high;
}

std::vector<double> TestbedEnvironment::low_state() const {
  return {state_.z[kHeart], state_.z[kSleep], state_.z[kSqrtStep]};
}

double TestbedEnvironment::step(int a_low, Rng& rng) {
  if (a_low != 0 && a_low != 1) throw InvalidInput("test-bed low action must be 0 or 1");
  if (a_high_ == kNoAction) throw InvalidInput("test-bed step before the weekly action");
  week_actions_.push_back(a_low);
  burdens_.push_back(burden(week_actions_));
  const double effect = effective_low_effect(model(), burdens_, b1_, b2_);
  daily_transition(model(), state_, a_high_, a_low, effect, rng);
  return state_.z[kSqrtStep];
}

TrialResult run_trial(std::shared_ptr<const std::vector<DyadModel>> models, Algorithm algo, int n_dyads, int W,
                      int H, const EffectConfig& effect, const AgentConfig& config, std::uint64_t seed,
                      bool keep_periods) {
  if (!models || models->empty()) throw InvalidInput("run_trial needs at least one dyad model");
  if (n_dyads < 0) throw InvalidInput("n_dyads must be >= 0");
  TestbedEnvironment env(std::move(models), effect, W, H);
  RunOptions options;
  options.keep_periods = keep_periods;
  TrialResult out;
  out.history = run_algorithm(algo, env, n_dyads, W, H, config, seed, options);
  out.dyad_totals.assign(static_cast<std::size_t>(n_dyads), 0.0);
  for (const BlockRecord& r : out.history.records) out.dyad_totals[static_cast<std::size_t>(r.episode)] += r.reward;
  for (double t : out.dyad_totals) out.total += t;
  return out;
}

}  // namespace dyadic
