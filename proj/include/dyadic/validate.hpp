#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dyadic/maze.hpp"
#include "dyadic/stats.hpp"

namespace dyadic {

struct ValidationReport {
  int rollouts = 0;
  bool structural_ok = true;
  std::vector<std::string> violations;  // first few, for diagnostics
  std::size_t violation_count = 0;
  // Property 1: next block's high state vs. the previous block's
  // (high action, last low action), and vs. its final low state.
  std::optional<ChiSquareResult> exit_vs_actions;
  std::optional<ChiSquareResult> exit_vs_position;
  // Property 2: first-period low-state change vs. block index.
  std::optional<ChiSquareResult> homogeneity;

  bool checked() const { return rollouts > 0; }
  bool independence_ok(double alpha = 0.01) const;
  bool homogeneous(double alpha = 0.01) const;
};

// Rolls out `rollouts` episodes under uniformly random actions and checks the
// block/period transition constraints on the reported five-tuples plus the
// two statistical properties. Zero rollouts gives an empty report.
ValidationReport validate_dyadic_transitions(TabularEnvironment& env, int rollouts, Rng& rng);

}  // namespace dyadic
