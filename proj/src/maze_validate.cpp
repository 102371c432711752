#include <map>
#include <random>
#include <sstream>

#include "dyadic/errors.hpp"
#include "dyadic/validate.hpp"

namespace dyadic {
namespace {

constexpr std::size_t kKeptViolations = 20;

std::string describe(const FiveTuple& t) {
  std::ostringstream os;
  os << "(block " << t.block << ", period " << t.period << ", high " << t.high << ", action "
     << t.high_action << ", low " << t.low << ")";
  return os.str();
}

class Checker {
 public:
  Checker(int periods, ValidationReport& report) : periods_(periods), report_(report) {}

  void reset() { prev_.reset(); }

  void observe(const FiveTuple& cur) {
    if (prev_) check(*prev_, cur);
    prev_ = cur;
  }

 private:
  void fail(const FiveTuple& a, const FiveTuple& b, const char* what) {
    ++report_.violation_count;
    report_.structural_ok = false;
    if (report_.violations.size() < kKeptViolations)
      report_.violations.push_back(std::string(what) + ": " + describe(a) + " -> " + describe(b));
  }

  void check(const FiveTuple& p, const FiveTuple& c) {
    if (p.period < periods_) {
      if (c.block != p.block || c.period != p.period + 1) fail(p, c, "period order");
      if (c.high != p.high) fail(p, c, "high state changed within block");
      if (p.period > 0 && c.high_action != p.high_action) fail(p, c, "high action changed within block");
      if (c.high_action == kNoAction) fail(p, c, "missing high action after period 0");
    } else {
      if (c.block != p.block + 1 || c.period != 0) fail(p, c, "block order");
      if (c.high_action != kNoAction || c.low != kNoAction) fail(p, c, "block start carries actions");
    }
  }

  int periods_;
  ValidationReport& report_;
  std::optional<FiveTuple> prev_;
};

void check_range(const TabularEnvironment& env, const FiveTuple& t) {
  const bool ok = t.block >= 0 && t.block < env.blocks() && t.period >= 0 && t.period <= env.periods() &&
                  t.high >= 0 && t.high < env.high_state_count() &&
                  (t.high_action == kNoAction || (t.high_action >= 0 && t.high_action < env.high_actions())) &&
                  (t.low == kNoAction || (t.low >= 0 && t.low < env.low_state_count()));
  if (!ok) throw InvalidInput("environment reported " + describe(t) + " outside its declared sizes");
}

}  // namespace

bool ValidationReport::independence_ok(double alpha) const {
  return exit_vs_actions && exit_vs_position && exit_vs_actions->p_value > alpha &&
         exit_vs_position->p_value > alpha;
}

bool ValidationReport::homogeneous(double alpha) const {
  return homogeneity && homogeneity->p_value > alpha;
}

ValidationReport validate_dyadic_transitions(TabularEnvironment& env, int rollouts, Rng& rng) {
  if (rollouts < 0) throw InvalidInput("rollouts must be >= 0");
  ValidationReport report;
  if (rollouts == 0) return report;
  const int W = env.blocks(), H = env.periods();
  if (W < 1 || H < 1) throw InvalidInput("environment must declare blocks >= 1 and periods >= 1");
  const int A_high = env.high_actions(), A_low = env.low_actions();
  const int S_high = env.high_state_count(), S_low = env.low_state_count();
  if (A_high < 1 || A_low < 1 || S_high < 1 || S_low < 1)
    throw InvalidInput("environment must declare nonempty state and action sets");

  report.rollouts = rollouts;
  Checker checker(H, report);
  std::vector<std::vector<double>> by_actions(static_cast<std::size_t>(A_high * A_low),
                                              std::vector<double>(static_cast<std::size_t>(S_high), 0.0));
  std::vector<std::vector<double>> by_position(static_cast<std::size_t>(S_low),
                                               std::vector<double>(static_cast<std::size_t>(S_high), 0.0));
  std::map<std::vector<double>, std::size_t> outcome_ids;
  std::vector<std::vector<double>> by_block(static_cast<std::size_t>(W));

  std::uniform_int_distribution<int> pick_high(0, A_high - 1), pick_low(0, A_low - 1);
  for (int r = 0; r < rollouts; ++r) {
    env.begin_episode(rng);
    checker.reset();
    int last_row = -1, last_cell = -1;
    for (int w = 0; w < W; ++w) {
      const std::vector<double> s_high = env.begin_block(rng);
      FiveTuple t = env.tuple();
      check_range(env, t);
      checker.observe(t);
      if (last_row >= 0) {
        by_actions[static_cast<std::size_t>(last_row)][static_cast<std::size_t>(t.high)] += 1.0;
        by_position[static_cast<std::size_t>(last_cell)][static_cast<std::size_t>(t.high)] += 1.0;
      }
      const int a_high = pick_high(rng);
      env.set_high_action(a_high);
      int a_low = 0;
      for (int h = 0; h < H; ++h) {
        t = env.tuple();
        check_range(env, t);
        checker.observe(t);
        const std::vector<double> before = env.low_state();
        a_low = pick_low(rng);
        env.step(a_low, rng);
        if (h == 0) {
          const std::vector<double> after = env.low_state();
          std::vector<double> delta(after.size());
          for (std::size_t i = 0; i < after.size(); ++i) delta[i] = after[i] - before[i];
          const auto [it, fresh] = outcome_ids.emplace(delta, outcome_ids.size());
          (void)fresh;
          auto& row = by_block[static_cast<std::size_t>(w)];
          if (row.size() <= it->second) row.resize(it->second + 1, 0.0);
          row[it->second] += 1.0;
        }
      }
      // The state after the last step is the next block's period 0.
      t = env.tuple();
      check_range(env, t);
      last_row = a_high * A_low + a_low;
      last_cell = t.low;
    }
  }

  if (W > 1) {
    report.exit_vs_actions = chi_square_independence(by_actions);
    report.exit_vs_position = chi_square_independence(pool_sparse_rows(by_position));
    for (auto& row : by_block) row.resize(outcome_ids.size(), 0.0);
    // Columns are outcomes here; pool rare outcomes by transposing.
    std::vector<std::vector<double>> by_outcome(outcome_ids.size(), std::vector<double>(by_block.size(), 0.0));
    for (std::size_t w = 0; w < by_block.size(); ++w)
      for (std::size_t o = 0; o < outcome_ids.size(); ++o) by_outcome[o][w] = by_block[w][o];
    report.homogeneity = chi_square_independence(pool_sparse_rows(by_outcome));
  }
  return report;
}

}  // namespace dyadic
