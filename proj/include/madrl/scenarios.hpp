#pragma once

// Analytic attractor scenarios.

#include <array>
#include <vector>

#include "madrl/mdp.hpp"
#include "madrl/pacboy.hpp"

namespace madrl::env {

/**
 * Three-state MDP: from x0, a0 loops on x0 for 0, a1 ends in x1 paying r1,
 * a2 ends in x2 paying r2. `advisors[j]` is the same MDP seeing only r_{j+1}.
 */
struct ToyAttractor {
  static constexpr mdp::StateId x0 = 0, x1 = 1, x2 = 2;
  static constexpr mdp::ActionId a0 = 0, a1 = 1, a2 = 2;

  mdp::TabularMDP global;
  std::array<mdp::TabularMDP, 2> advisors;
};

ToyAttractor toy_attractor_mdp(double r1, double r2, double gamma);

/// Open grid, no ghosts: three fruits two moves North, West and East of the
/// agent, wall directly South.
struct ThreeFruitScenario {
  MazeLayout layout;
  PacBoyState state;
  std::vector<CellId> fruit_cells;
};

ThreeFruitScenario three_fruit_scenario();

}  // namespace madrl::env
