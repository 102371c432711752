#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dyadic/features.hpp"
#include "dyadic/random.hpp"

namespace dyadic {

inline constexpr int kNoAction = -1;

// The part of the five-tuple state an agent sees at a period: block and
// period indices travel separately.
struct CompositeState {
  std::vector<double> high;
  int high_action = kNoAction;
  std::vector<double> low;

  bool operator==(const CompositeState&) const = default;
};

struct JointAction {
  int high = kNoAction;
  int low = kNoAction;

  bool operator==(const JointAction&) const = default;
};

// phi(s_high, a_high, s_low, a_low) for Q-functions and psi(s_high, a_high)
// for the block-level reward model.
class FeatureSpace {
 public:
  virtual ~FeatureSpace() = default;
  virtual std::size_t phi_dimension() const = 0;
  virtual FeatureVector phi(std::span<const double> high, int a_high, std::span<const double> low,
                            int a_low) const = 0;
  virtual std::size_t psi_dimension() const = 0;
  virtual FeatureVector psi(std::span<const double> high, int a_high) const = 0;

  FeatureVector phi(const CompositeState& s, int a_high, int a_low) const {
    return phi(s.high, a_high, s.low, a_low);
  }
};

// Episode -> W blocks -> H periods. Call order per episode:
//   begin_episode, then per block: begin_block, set_high_action, then H x
//   (low_state, step).
class DyadicEnvironment {
 public:
  virtual ~DyadicEnvironment() = default;

  virtual int blocks() const = 0;
  virtual int periods() const = 0;
  virtual int high_actions() const = 0;
  virtual int low_actions() const = 0;
  virtual const FeatureSpace& features() const = 0;

  virtual void begin_episode(Rng& rng) = 0;
  // Returns the observed high-level state of the new block.
  virtual std::vector<double> begin_block(Rng& rng) = 0;
  virtual void set_high_action(int a_high) = 0;
  virtual std::vector<double> low_state() const = 0;
  // Applies the low action of the current period and returns its reward.
  virtual double step(int a_low, Rng& rng) = 0;
};

}  // namespace dyadic
