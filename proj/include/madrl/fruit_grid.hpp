#pragma once

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "madrl/maze.hpp"
#include "madrl/rng.hpp"

namespace madrl::env {

// Open 5x5 fruit-collection grid used by the value-regression experiment.
inline constexpr int kGridSide = 5;
inline constexpr std::size_t kGridCells = 25;
inline constexpr std::size_t kGridFruits = 5;

using GridCell = std::size_t;  // row * 5 + col

struct FruitGridState {
  GridCell agent = 0;
  std::bitset<kGridCells> fruits;
  friend bool operator==(const FruitGridState&, const FruitGridState&) = default;
};

/// Agent uniform over the 25 cells; five distinct fruits among the other 24.
FruitGridState fruit_grid_reset(Rng& rng);
FruitGridState fruit_grid_reset(std::uint64_t seed);

inline int grid_row(GridCell c) { return static_cast<int>(c) / kGridSide; }
inline int grid_col(GridCell c) { return static_cast<int>(c) % kGridSide; }
inline GridCell grid_cell(int row, int col) { return static_cast<GridCell>(row * kGridSide + col); }

/// L1 distance on the open grid.
int grid_distance(GridCell a, GridCell b);

/// On-grid neighbours in N, W, S, E order.
std::vector<GridCell> grid_neighbors(GridCell c);

/// Moves the agent to `to` and eats the fruit there; returns fruits eaten.
int grid_visit(FruitGridState& state, GridCell to);

}  // namespace madrl::env
