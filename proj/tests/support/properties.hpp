#pragma once

// Randomized invariant checks (fixed seeds, hand-rolled generators). Shared by
// the gtest suite and the acceptance runner.

#include <functional>
#include <string>
#include <vector>

namespace dyadic::props {

struct Outcome {
  bool ok = true;
  int cases = 0;
  std::string detail;  // first failure
};

struct Property {
  std::string module;
  std::string name;
  std::function<Outcome()> check;
};

const std::vector<Property>& all_properties();

}  // namespace dyadic::props
