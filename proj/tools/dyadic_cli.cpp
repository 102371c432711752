// dyadic: run simulations, test-bed sweeps and environment checks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dyadic/dyad_io.hpp"
#include "dyadic/errors.hpp"
#include "dyadic/experiment.hpp"
#include "dyadic/maze.hpp"
#include "dyadic/validate.hpp"

using namespace dyadic;
using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
}

// Copies key from the JSON config unless the option was given explicitly.
template <class T>
void take(const json& j, const char* key, const CLI::Option* opt, T& field) {
  if (opt->count() > 0 || !j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

Algorithm algo_or_throw(const std::string& name) {
  const auto a = parse_algorithm(name);
  if (!a) throw ConfigError("unknown algorithm '" + name + "' (expected dyadic, full, stationary or bandit)");
  return *a;
}

HyperMode hyper_or_throw(const std::string& name) {
  if (name == "fixed1") return HyperMode::kFixed;
  if (name == "theory") return HyperMode::kTheory;
  throw ConfigError("unknown hyperparameter mode '" + name + "' (expected fixed1 or theory)");
}

MoodEffect mood_or_throw(const std::string& name) {
  const auto e = parse_mood_effect(name);
  if (!e) throw ConfigError("unknown mood effect '" + name + "'");
  return *e;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical RLSVI agents, toy mazes and a dyadic mobile-health test bed"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run one algorithm on one environment, write per-block CSV");
  std::string sim_config, env = "toy1", algo = "dyadic", hyper = "fixed1", sim_out, mood = "none", sim_models;
  int episodes = 100, blocks = 15, periods = 7, reps = 1, threads = 0, warm = 1, b1 = 1, b2 = 2;
  std::uint64_t seed = 0;
  sim->add_option("--config", sim_config, "JSON file with any of the options below");
  auto* o_env = sim->add_option("--env", env, "toy1..toy5 or testbed");
  auto* o_algo = sim->add_option("--algo", algo, "dyadic, full, stationary or bandit");
  auto* o_k = sim->add_option("--episodes", episodes, "K");
  auto* o_w = sim->add_option("--blocks", blocks, "W");
  auto* o_h = sim->add_option("--periods", periods, "H");
  auto* o_reps = sim->add_option("--reps", reps, "Repetitions");
  auto* o_seed = sim->add_option("--seed", seed, "Master seed");
  auto* o_hyper = sim->add_option("--hyper", hyper, "fixed1 or theory");
  auto* o_out = sim->add_option("--out", sim_out, "Per-block CSV path");
  auto* o_threads = sim->add_option("--threads", threads, "Worker threads (0 = all cores)");
  auto* o_warm = sim->add_option("--warm-start", warm, "Warm-start episodes");
  auto* o_b1 = sim->add_option("--b1", b1, "Test bed: burden threshold k");
  auto* o_b2 = sim->add_option("--b2", b2, "Test bed: disengagement threshold k");
  auto* o_mood = sim->add_option("--mood-effect", mood, "Test bed: none, weak, strong or extreme");
  auto* o_models = sim->add_option("--models", sim_models, "Test bed: dyad-model JSON (default: synthetic)");

  // sweep-testbed
  auto* sweep = app.add_subcommand("sweep-testbed", "Baseline-minus-dyadic reward differences over a b1 x b2 grid");
  std::string sweep_config, sweep_mood = "none", sweep_out, sweep_models;
  std::vector<int> b1_list{1}, b2_list{2};
  int trials = 10, dyads = 100, sweep_threads = 0;
  std::uint64_t sweep_seed = 0;
  sweep->add_option("--config", sweep_config, "JSON file with any of the options below");
  auto* s_b1 = sweep->add_option("--b1", b1_list, "Burden threshold k values")->delimiter(',');
  auto* s_b2 = sweep->add_option("--b2", b2_list, "Disengagement threshold k values")->delimiter(',');
  auto* s_mood = sweep->add_option("--mood-effect", sweep_mood, "none, weak, strong or extreme");
  auto* s_trials = sweep->add_option("--trials", trials, "Trials per cell");
  auto* s_dyads = sweep->add_option("--dyads", dyads, "Dyads per trial");
  auto* s_seed = sweep->add_option("--seed", sweep_seed, "Master seed");
  auto* s_out = sweep->add_option("--out", sweep_out, "Sweep CSV path");
  auto* s_threads = sweep->add_option("--threads", sweep_threads, "Worker threads (0 = all cores)");
  auto* s_models = sweep->add_option("--models", sweep_models, "Dyad-model JSON (default: synthetic)");

  // validate
  auto* val = app.add_subcommand("validate", "Check the block/period structure of a maze environment");
  std::string val_env = "toy1";
  int rollouts = 10000;
  std::uint64_t val_seed = 0;
  val->add_option("--env", val_env, "toy1..toy5")->required();
  val->add_option("--rollouts", rollouts, "Episodes to roll out");
  val->add_option("--seed", val_seed, "Seed");

  // small utilities
  auto* layout = app.add_subcommand("layout", "Print the maze layouts and score maps");
  std::string layout_mode = "dense";
  layout->add_option("--rewards", layout_mode, "dense or sparse");
  auto* models_cmd = app.add_subcommand("synth-models", "Write synthetic dyad models as JSON");
  int n_models = 49;
  std::uint64_t models_seed = 0;
  std::string models_out;
  models_cmd->add_option("--count", n_models, "Number of dyads");
  models_cmd->add_option("--seed", models_seed, "Seed");
  models_cmd->add_option("--out", models_out, "Output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      if (!sim_config.empty()) {
        const json j = read_json(sim_config);
        take(j, "env", o_env, env);
        take(j, "algo", o_algo, algo);
        take(j, "episodes", o_k, episodes);
        take(j, "blocks", o_w, blocks);
        take(j, "periods", o_h, periods);
        take(j, "reps", o_reps, reps);
        take(j, "seed", o_seed, seed);
        take(j, "hyper", o_hyper, hyper);
        take(j, "out", o_out, sim_out);
        take(j, "threads", o_threads, threads);
        take(j, "warm_start", o_warm, warm);
        take(j, "b1", o_b1, b1);
        take(j, "b2", o_b2, b2);
        take(j, "mood_effect", o_mood, mood);
        take(j, "models", o_models, sim_models);
      }
      ExperimentConfig c;
      c.env = env;
      c.algo = algo_or_throw(algo);
      c.episodes = episodes;
      c.blocks = blocks;
      c.periods = periods;
      c.reps = reps;
      c.seed = seed;
      c.hyper = hyper_or_throw(hyper);
      c.threads = threads;
      c.warm_start_episodes = warm;
      c.effect = {b1, b2, mood_or_throw(mood)};
      if (!sim_models.empty()) c.models = sim_models;
      if (sim_out.empty()) throw ConfigError("--out is required");
      validate_config(c);
      const SimulationResult r = simulate(c);
      write_simulation(r, sim_out);
      std::cout << "wrote " << sim_out << " (" << c.reps * c.episodes * c.blocks << " rows)\n";
    } else if (sweep->parsed()) {
      if (!sweep_config.empty()) {
        const json j = read_json(sweep_config);
        take(j, "b1", s_b1, b1_list);
        take(j, "b2", s_b2, b2_list);
        take(j, "mood_effect", s_mood, sweep_mood);
        take(j, "trials", s_trials, trials);
        take(j, "dyads", s_dyads, dyads);
        take(j, "seed", s_seed, sweep_seed);
        take(j, "out", s_out, sweep_out);
        take(j, "threads", s_threads, sweep_threads);
        take(j, "models", s_models, sweep_models);
      }
      SweepConfig c;
      c.b1 = b1_list;
      c.b2 = b2_list;
      c.mood_effect = mood_or_throw(sweep_mood);
      c.trials = trials;
      c.dyads = dyads;
      c.seed = sweep_seed;
      c.threads = sweep_threads;
      if (!sweep_models.empty()) c.models = sweep_models;
      if (sweep_out.empty()) throw ConfigError("--out is required");
      validate_config(c);
      write_sweep(sweep_testbed(c), sweep_out);
      std::cout << "wrote " << sweep_out << "\n";
    } else if (val->parsed()) {
      const auto variant = parse_maze_variant(val_env);
      if (!variant) throw ConfigError("validate needs a maze environment (toy1..toy5), got '" + val_env + "'");
      MazeEnvironment e(maze_config(*variant));
      Rng rng = make_rng(val_seed, 0);
      const ValidationReport rep = validate_dyadic_transitions(e, rollouts, rng);
      std::cout << "env " << val_env << ", rollouts " << rep.rollouts << "\n";
      if (!rep.checked()) {
        std::cout << "no rollouts: nothing checked\n";
        return 0;
      }
      std::cout << "structural constraints: " << (rep.structural_ok ? "ok" : "VIOLATED") << " ("
                << rep.violation_count << " violations)\n";
      for (const auto& v : rep.violations) std::cout << "  " << v << "\n";
      auto line = [](const char* name, const std::optional<ChiSquareResult>& r) {
        if (!r) return;
        std::printf("%-28s chi2 %.3f  dof %d  p %.4g\n", name, r->statistic, r->dof, r->p_value);
      };
      line("exit state vs actions:", rep.exit_vs_actions);
      line("exit state vs final cell:", rep.exit_vs_position);
      line("first step vs block index:", rep.homogeneity);
      std::cout << "property 1 (exit independence): " << (rep.independence_ok() ? "pass" : "fail") << "\n"
                << "property 2 (block homogeneity): " << (rep.homogeneous() ? "pass" : "fail") << "\n";
    } else if (layout->parsed()) {
      const RewardMode mode = layout_mode == "sparse" ? RewardMode::kSparse : RewardMode::kDense;
      if (layout_mode != "sparse" && layout_mode != "dense") throw ConfigError("--rewards must be dense or sparse");
      std::cout << "easy maze\n" << dump_layout(easy_maze(mode)) << "\nhard maze\n" << dump_layout(hard_maze(mode));
    } else if (models_cmd->parsed()) {
      Rng rng = make_rng(models_seed, kModelStream);
      write_dyad_models(models_out, synth_dyad_models(n_models, rng));
      std::cout << "wrote " << n_models << " models to " << models_out << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
