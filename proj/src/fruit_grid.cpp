#include "madrl/fruit_grid.hpp"

#include <cstdlib>

namespace madrl::env {

FruitGridState fruit_grid_reset(Rng& rng) {
  FruitGridState s;
  s.agent = uniform_index(rng, kGridCells);
  // Partial Fisher-Yates over the 24 non-agent cells.
  std::vector<GridCell> free;
  free.reserve(kGridCells - 1);
  for (GridCell c = 0; c < kGridCells; ++c) {
    if (c != s.agent) free.push_back(c);
  }
  for (std::size_t i = 0; i < kGridFruits; ++i) {
    const std::size_t j = i + uniform_index(rng, free.size() - i);
    std::swap(free[i], free[j]);
    s.fruits.set(free[i]);
  }
  return s;
}

FruitGridState fruit_grid_reset(std::uint64_t seed) {
  Rng rng = make_rng({seed});
  return fruit_grid_reset(rng);
}

int grid_distance(GridCell a, GridCell b) {
  return std::abs(grid_row(a) - grid_row(b)) + std::abs(grid_col(a) - grid_col(b));
}

std::vector<GridCell> grid_neighbors(GridCell c) {
  std::vector<GridCell> out;
  const int r = grid_row(c);
  const int col = grid_col(c);
  if (r > 0) out.push_back(grid_cell(r - 1, col));
  if (col > 0) out.push_back(grid_cell(r, col - 1));
  if (r < kGridSide - 1) out.push_back(grid_cell(r + 1, col));
  if (col < kGridSide - 1) out.push_back(grid_cell(r, col + 1));
  return out;
}

int grid_visit(FruitGridState& state, GridCell to) {
  state.agent = to;
  if (state.fruits.test(to)) {
    state.fruits.reset(to);
    return 1;
  }
  return 0;
}

}  // namespace madrl::env
