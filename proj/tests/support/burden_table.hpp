#pragma once

// Published day-6 burden values for ten intervention patterns (gamma = 6/7).

#include <array>

namespace dyadic::reference {

struct BurdenRow {
  std::array<int, 6> actions;
  double burden;
};

inline constexpr std::array<BurdenRow, 10> kDaySixBurdens{{
    {{0, 0, 1, 1, 1, 1}, 0.4602},
    {{0, 1, 1, 0, 1, 1}, 0.4324},
    {{1, 1, 0, 0, 1, 1}, 0.4085},
    {{0, 0, 0, 1, 1, 1}, 0.3702},
    {{1, 1, 1, 0, 1, 0}, 0.3556},
    {{0, 0, 1, 1, 1, 0}, 0.3174},
    {{0, 0, 0, 0, 1, 1}, 0.2653},
    {{1, 1, 0, 1, 0, 0}, 0.2482},
    {{0, 0, 1, 0, 0, 1}, 0.2328},
    {{0, 0, 0, 0, 0, 1}, 0.1429},
}};

// b(1)..b(4) as printed.
inline constexpr std::array<double, 4> kThresholds{0.1429, 0.2653, 0.3702, 0.4602};

}  // namespace dyadic::reference
