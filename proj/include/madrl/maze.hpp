#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace madrl::env {

/// Index of a corridor cell (walls are not numbered).
using CellId = std::size_t;

enum class Action : std::size_t { North = 0, West = 1, South = 2, East = 3 };

inline constexpr std::size_t kActionCount = 4;
inline constexpr std::array<Action, kActionCount> kActions = {Action::North, Action::West,
                                                              Action::South, Action::East};

constexpr Action reverse(Action a) {
  return static_cast<Action>((static_cast<std::size_t>(a) + 2) % kActionCount);
}
char action_letter(Action a);

struct GridPos {
  int row;
  int col;
  friend bool operator==(const GridPos&, const GridPos&) = default;
};

/**
 * Wall-masked grid.
 *
 * Text format: one row per line, `#` wall, `.` corridor, `P` start cell,
 * `G` corridor cell where a ghost spawns. Corridor cells are numbered in
 * row-major order; fruit cells are all corridor cells except the start.
 */
class MazeLayout {
 public:
  static MazeLayout parse(std::string_view text);
  static MazeLayout load(const std::string& path);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t cell_count() const { return cells_.size(); }
  bool is_wall(GridPos p) const;

  CellId start() const { return start_; }
  const std::vector<CellId>& fruit_cells() const { return fruit_cells_; }
  const std::vector<CellId>& ghost_spawns() const { return ghost_spawns_; }

  GridPos position(CellId c) const { return cells_[c]; }
  /// Corridor id at `p`; throws if `p` is a wall or off-grid.
  CellId cell_at(GridPos p) const;
  /// Slot of `c` in fruit_cells(), or npos for the start cell.
  std::size_t fruit_slot(CellId c) const { return fruit_slot_[c]; }

  /// Destination of a move; blocked moves stay put.
  CellId move(CellId c, Action a) const { return moves_[c][static_cast<std::size_t>(a)]; }
  bool blocked(CellId c, Action a) const { return move(c, a) == c; }

  /// Shortest-path distances (moves) from `from` to every cell.
  std::vector<int> distances_from(CellId from) const;

  std::string to_text() const;
  std::string summary() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<bool> wall_;
  std::vector<GridPos> cells_;
  std::vector<std::size_t> grid_to_cell_;
  std::vector<std::array<CellId, kActionCount>> moves_;
  std::vector<CellId> fruit_cells_;
  std::vector<std::size_t> fruit_slot_;
  std::vector<CellId> ghost_spawns_;
  CellId start_ = 0;
};

/// Checked-in layouts: "pacboy11" (11x11, 76 corridor cells) and "pacboy7"
/// (7x7 desk-scale preset).
MazeLayout builtin_layout(std::string_view name);
std::string_view builtin_layout_text(std::string_view name);

/// Accepts "builtin:<name>" or a file path.
MazeLayout resolve_layout(const std::string& spec);

}  // namespace madrl::env
