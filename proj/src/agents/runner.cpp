#include <string>

#include "dyadic/agents.hpp"
#include "dyadic/errors.hpp"

namespace dyadic {

RunHistory run_algorithm(Algorithm algo, DyadicEnvironment& env, int K, int W, int H,
                         const AgentConfig& config, std::uint64_t seed, const RunOptions& options) {
  if (K < 0) throw InvalidInput("episode count must be >= 0");
  if (W != env.blocks() || H != env.periods())
    throw InvalidInput("environment has W=" + std::to_string(env.blocks()) + ", H=" +
                       std::to_string(env.periods()) + " but the run asked for W=" + std::to_string(W) +
                       ", H=" + std::to_string(H));
  Rng env_rng = make_rng(seed, 0);
  Rng agent_rng = make_rng(seed, 1);
  Rng warm_rng = make_rng(seed, 2);

  auto agent = make_agent(algo, env, config);
  RunHistory hist{K, W, H, {}};
  hist.records.reserve(static_cast<std::size_t>(K) * static_cast<std::size_t>(W));
  const BlockPolicy uniform{true, std::vector<double>(static_cast<std::size_t>(env.high_actions()),
                                                      1.0 / env.high_actions()),
                            {}};

  for (int k = 0; k < K; ++k) {
    const bool warm = k < config.warm_start_episodes;
    env.begin_episode(env_rng);
    agent->begin_episode(k, agent_rng);
    for (int w = 0; w < W; ++w) {
      BlockRecord rec;
      rec.episode = k;
      rec.block = w;
      rec.warm = warm;
      rec.high_state = env.begin_block(env_rng);
      agent->begin_block(k, w, rec.high_state, agent_rng);
      CompositeState s{rec.high_state, kNoAction, {}};
      for (int h = 0; h < H; ++h) {
        s.low = env.low_state();
        JointAction a = agent->act(h, s, agent_rng);
        if (h == 0) {
          if (warm) a.high = bernoulli_half(warm_rng);
          env.set_high_action(a.high);
          rec.high_action = a.high;
        } else {
          a.high = rec.high_action;
        }
        if (warm) a.low = bernoulli_half(warm_rng);
        s.high_action = rec.high_action;
        const double r = env.step(a.low, env_rng);
        agent->observe(h, s, a, r);
        rec.reward += r;
        if (options.keep_periods) rec.periods.push_back({s, a, r});
      }
      if (options.oracle) rec.oracle = options.oracle(rec, warm ? uniform : agent->block_policy());
      agent->end_block(agent_rng);
      if (options.after_block) options.after_block(*agent, rec);
      hist.records.push_back(std::move(rec));
    }
    agent->end_episode(agent_rng);
  }
  return hist;
}

}  // namespace dyadic
