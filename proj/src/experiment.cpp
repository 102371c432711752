#include "dyadic/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "dyadic/dyad_io.hpp"
#include "dyadic/errors.hpp"
#include "dyadic/evaluation.hpp"
#include "dyadic/maze.hpp"

namespace dyadic {
namespace {

bool is_testbed(const std::string& env) { return env == "testbed"; }

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path() && !std::filesystem::is_directory(path.parent_path()))
    throw IoError("output directory " + path.parent_path().string() + " does not exist");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

void finish(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IoError("write to " + path.string() + " failed");
}

std::filesystem::path summary_path(const std::filesystem::path& out) {
  return out.parent_path() / (out.stem().string() + "_summary.csv");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void parallel_for(int n, int threads, const std::function<void(int)>& task) {
  if (n <= 0) return;
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, n);
  if (threads == 1) {
    for (int i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<DyadModel> load_or_synthesize_models(const std::optional<std::filesystem::path>& path, int n,
                                                 std::uint64_t seed) {
  if (path) return ingest_dyad_models(*path);
  Rng rng = make_rng(seed, kModelStream);
  return synth_dyad_models(n, rng);
}

void validate_config(const ExperimentConfig& c) {
  if (!is_testbed(c.env) && !parse_maze_variant(c.env))
    throw ConfigError("unknown environment '" + c.env + "' (expected toy1..toy5 or testbed)");
  if (c.episodes < 1 || c.blocks < 1 || c.periods < 1 || c.reps < 1)
    throw ConfigError("episodes, blocks, periods and reps must all be >= 1");
  if (c.warm_start_episodes < 0) throw ConfigError("warm start episodes must be >= 0");
  if (is_testbed(c.env)) {
    if (c.hyper == HyperMode::kTheory) throw ConfigError("theory-mode hyperparameters need a tabular environment");
    if (c.effect.b1_k < 1 || c.effect.b1_k > kMaxBurdenK || c.effect.b2_k < 1 || c.effect.b2_k > kMaxBurdenK)
      throw ConfigError("burden thresholds need k in 1..8");
    if (!c.models && c.synthetic_dyads < 1) throw ConfigError("need at least one synthetic dyad");
  }
}

SimulationResult simulate(const ExperimentConfig& config) {
  validate_config(config);
  SimulationResult result{config, std::vector<RepResult>(static_cast<std::size_t>(config.reps))};

  AgentConfig agent;
  agent.mode = config.hyper;
  agent.warm_start_episodes = config.warm_start_episodes;

  if (is_testbed(config.env)) {
    const auto models = std::make_shared<const std::vector<DyadModel>>(
        load_or_synthesize_models(config.models, config.synthetic_dyads, config.seed));
    parallel_for(config.reps, config.threads, [&](int r) {
      TestbedEnvironment env(models, config.effect, config.blocks, config.periods);
      RunOptions opt;
      opt.keep_periods = false;
      const RunHistory h = run_algorithm(config.algo, env, config.episodes, config.blocks, config.periods, agent,
                                         derive_seed(config.seed, static_cast<std::uint64_t>(r)), opt);
      RepResult& out = result.reps[static_cast<std::size_t>(r)];
      for (const BlockRecord& b : h.records) out.block_reward.push_back(b.reward);
    });
    return result;
  }

  MazeEnvConfig mc = maze_config(*parse_maze_variant(config.env));
  mc.blocks = config.blocks;
  mc.periods = config.periods;
  const MazeFeatures features(8, 4);
  std::optional<MazeOracle> oracle;
  if (mc.variant == MazeVariant::kToy1 || mc.variant == MazeVariant::kToy2) oracle.emplace(mc, features);
  // Block MDP: H + 1 periods (maze choice first), 2 + 4 * 32 states, 2 actions.
  agent.theory = TheorySizes{config.periods + 1, 2 + 4 * 32, 2};

  parallel_for(config.reps, config.threads, [&](int r) {
    MazeEnvironment env(mc);
    RunOptions opt;
    opt.keep_periods = false;
    if (oracle) opt.oracle = oracle->as_function();
    const RunHistory h = run_algorithm(config.algo, env, config.episodes, config.blocks, config.periods, agent,
                                       derive_seed(config.seed, static_cast<std::uint64_t>(r)), opt);
    RepResult& out = result.reps[static_cast<std::size_t>(r)];
    out.block_reward.reserve(h.records.size());
    for (const BlockRecord& b : h.records) {
      out.block_reward.push_back(b.reward);
      if (b.oracle) out.gap.push_back(b.oracle->gap());
    }
  });
  return result;
}

void write_simulation(const SimulationResult& result, const std::filesystem::path& out) {
  const ExperimentConfig& c = result.config;
  const std::string algo(algorithm_name(c.algo));
  {
    std::ofstream os = open_output(out);
    os << "rep,episode,block,algo,env,block_reward,regret_or_blank\n";
    for (std::size_t r = 0; r < result.reps.size(); ++r) {
      const RepResult& rep = result.reps[r];
      for (std::size_t i = 0; i < rep.block_reward.size(); ++i) {
        os << r << ',' << i / static_cast<std::size_t>(c.blocks) << ',' << i % static_cast<std::size_t>(c.blocks)
           << ',' << algo << ',' << c.env << ',' << format_double(rep.block_reward[i]) << ',';
        if (!rep.gap.empty()) os << format_double(rep.gap[i]);
        os << '\n';
      }
    }
    finish(os, out);
  }

  std::vector<std::vector<double>> rewards, regret;
  for (const RepResult& rep : result.reps) {
    rewards.push_back(rep.block_reward);
    if (!rep.gap.empty()) {
      std::vector<double> cum(rep.gap.size());
      double total = 0.0;
      for (std::size_t i = 0; i < rep.gap.size(); ++i) cum[i] = total += rep.gap[i];
      regret.push_back(std::move(cum));
    }
  }
  const auto reward_stats = aggregate(rewards);
  std::vector<MeanSe> regret_stats;
  if (result.has_regret()) regret_stats = aggregate(regret);

  const std::filesystem::path spath = summary_path(out);
  std::ofstream os = open_output(spath);
  os << "episode,block,algo,env,reps,mean_block_reward,se_block_reward,mean_cumulative_regret,se_cumulative_regret\n";
  for (std::size_t i = 0; i < reward_stats.size(); ++i) {
    os << i / static_cast<std::size_t>(c.blocks) << ',' << i % static_cast<std::size_t>(c.blocks) << ',' << algo
       << ',' << c.env << ',' << result.reps.size() << ',' << format_double(reward_stats[i].mean) << ','
       << format_double(reward_stats[i].se) << ',';
    if (!regret_stats.empty())
      os << format_double(regret_stats[i].mean) << ',' << format_double(regret_stats[i].se);
    else
      os << ',';
    os << '\n';
  }
  finish(os, spath);
}

void validate_config(const SweepConfig& c) {
  if (c.b1.empty() || c.b2.empty()) throw ConfigError("sweep needs at least one b1 and one b2 value");
  for (int k : c.b1)
    if (k < 1 || k > kMaxBurdenK) throw ConfigError("b1 values must be in 1..8, got " + std::to_string(k));
  for (int k : c.b2)
    if (k < 1 || k > kMaxBurdenK) throw ConfigError("b2 values must be in 1..8, got " + std::to_string(k));
  if (c.trials < 1 || c.dyads < 1 || c.blocks < 1 || c.periods < 1)
    throw ConfigError("trials, dyads, blocks and periods must all be >= 1");
  for (Algorithm a : c.baselines)
    if (a == Algorithm::kDyadic) throw ConfigError("dyadic RL is the reference, not a baseline");
  if (!c.models && c.synthetic_dyads < 1) throw ConfigError("need at least one synthetic dyad");
}

SweepResult sweep_testbed(const SweepConfig& config) {
  validate_config(config);
  const auto models = std::make_shared<const std::vector<DyadModel>>(
      load_or_synthesize_models(config.models, config.synthetic_dyads, config.seed));
  SweepResult result{config, {}};
  std::vector<Algorithm> algos{Algorithm::kDyadic};
  algos.insert(algos.end(), config.baselines.begin(), config.baselines.end());
  for (int b1 : config.b1)
    for (int b2 : config.b2)
      result.cells.push_back(
          {b1, b2, algos, std::vector<std::vector<double>>(algos.size(), std::vector<double>(config.trials))});

  const int tasks = static_cast<int>(result.cells.size()) * config.trials;
  parallel_for(tasks, config.threads, [&](int i) {
    SweepCell& cell = result.cells[static_cast<std::size_t>(i / config.trials)];
    const int t = i % config.trials;
    const EffectConfig effect{cell.b1_k, cell.b2_k, config.mood_effect};
    const std::uint64_t seed = derive_seed(config.seed, static_cast<std::uint64_t>(t));
    for (std::size_t a = 0; a < algos.size(); ++a) {
      const TrialResult tr =
          run_trial(models, algos[a], config.dyads, config.blocks, config.periods, effect, AgentConfig{}, seed);
      cell.trial_means[a][static_cast<std::size_t>(t)] = tr.total / config.dyads;
    }
  });
  return result;
}

void write_sweep(const SweepResult& result, const std::filesystem::path& out) {
  std::ofstream os = open_output(out);
  os << "b1_k,b2_k,mood_effect,algo,mean_total_reward_diff_vs_dyadic,std_error,trials\n";
  for (const SweepCell& cell : result.cells)
    for (std::size_t a = 1; a < cell.algos.size(); ++a) {
      std::vector<double> diff(cell.trial_means[a].size());
      for (std::size_t t = 0; t < diff.size(); ++t) diff[t] = cell.trial_means[a][t] - cell.trial_means[0][t];
      const MeanSe s = mean_se(diff);
      os << cell.b1_k << ',' << cell.b2_k << ',' << mood_effect_name(result.config.mood_effect) << ','
         << algorithm_name(cell.algos[a]) << ',' << format_double(s.mean) << ',' << format_double(s.se) << ','
         << diff.size() << '\n';
    }
  finish(os, out);
}

}  // namespace dyadic
