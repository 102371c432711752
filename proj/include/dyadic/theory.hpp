#pragma once

#include <cstdint>

#include "dyadic/agents.hpp"

namespace dyadic {

// lambda = H^3 |S| log(2 H |S| |A| max(N, 1)) / 2, sigma = 1 / sqrt(lambda).
Hyper theory_hyperparams(int horizon, int states, int actions, std::int64_t visits);

}  // namespace dyadic
