#include "madrl/maze.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace madrl::env {

namespace {

constexpr std::array<GridPos, kActionCount> kOffsets = {
    GridPos{-1, 0}, GridPos{0, -1}, GridPos{1, 0}, GridPos{0, 1}};

// 11x11 with 76 corridor cells. From this start cell both the untrained greedy
// agent and a uniformly random one average about -80 per game.
constexpr std::string_view kPacBoy11 =
    "......#....\n"
    ".##.#.#.##.\n"
    ".#.......#.\n"
    "...##.##.#.\n"
    "##..P....#.\n"
    "#####G##.#.\n"
    "...#...#...\n"
    ".#.#.#.##.#\n"
    ".#...G.....\n"
    "##.###.##.#\n"
    "#....#....#\n";

constexpr std::string_view kPacBoy7 =
    "P......\n"
    ".#.#.#.\n"
    "...G...\n"
    ".#.#.#.\n"
    ".......\n"
    ".#.#G#.\n"
    ".......\n";

}  // namespace

char action_letter(Action a) {
  static constexpr std::array<char, kActionCount> letters = {'N', 'W', 'S', 'E'};
  return letters[static_cast<std::size_t>(a)];
}

MazeLayout MazeLayout::parse(std::string_view text) {
  std::vector<std::string> rows;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(line);
  }
  if (rows.empty()) throw std::invalid_argument("maze: empty layout");

  MazeLayout m;
  m.height_ = static_cast<int>(rows.size());
  m.width_ = static_cast<int>(rows.front().size());
  m.wall_.assign(static_cast<std::size_t>(m.width_ * m.height_), true);
  m.grid_to_cell_.assign(m.wall_.size(), npos);

  std::size_t starts = 0;
  std::vector<GridPos> spawns;
  for (int r = 0; r < m.height_; ++r) {
    if (static_cast<int>(rows[r].size()) != m.width_) {
      throw std::invalid_argument("maze: row " + std::to_string(r) + " has a different width");
    }
    for (int c = 0; c < m.width_; ++c) {
      const char ch = rows[r][c];
      const auto g = static_cast<std::size_t>(r * m.width_ + c);
      switch (ch) {
        case '#':
          continue;
        case 'P':
          ++starts;
          m.start_ = m.cells_.size();
          break;
        case 'G':
          spawns.push_back({r, c});
          break;
        case '.':
          break;
        default:
          throw std::invalid_argument(std::string("maze: unexpected character '") + ch + "'");
      }
      m.wall_[g] = false;
      m.grid_to_cell_[g] = m.cells_.size();
      m.cells_.push_back({r, c});
    }
  }
  if (starts != 1) throw std::invalid_argument("maze: expected exactly one 'P' start cell");
  if (spawns.size() > 2) throw std::invalid_argument("maze: at most two ghost spawn cells");

  m.moves_.resize(m.cells_.size());
  for (CellId id = 0; id < m.cells_.size(); ++id) {
    for (std::size_t a = 0; a < kActionCount; ++a) {
      const GridPos to{m.cells_[id].row + kOffsets[a].row, m.cells_[id].col + kOffsets[a].col};
      m.moves_[id][a] = m.is_wall(to) ? id : m.cell_at(to);
    }
  }

  const auto dist = m.distances_from(m.start_);
  if (std::any_of(dist.begin(), dist.end(), [](int d) { return d < 0; })) {
    throw std::invalid_argument("maze: corridor cells are not all reachable from the start");
  }

  m.fruit_slot_.assign(m.cells_.size(), npos);
  for (CellId id = 0; id < m.cells_.size(); ++id) {
    if (id == m.start_) continue;
    m.fruit_slot_[id] = m.fruit_cells_.size();
    m.fruit_cells_.push_back(id);
  }

  for (const auto& p : spawns) m.ghost_spawns_.push_back(m.cell_at(p));
  if (m.ghost_spawns_.empty() && m.cells_.size() > 2) {
    // Default: the two cells farthest from the start, lowest index first.
    std::vector<CellId> order(m.cells_.size());
    for (CellId i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](CellId a, CellId b) { return dist[a] > dist[b]; });
    m.ghost_spawns_ = {order[0], order[1]};
  }
  return m;
}

MazeLayout MazeLayout::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("maze: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool MazeLayout::is_wall(GridPos p) const {
  if (p.row < 0 || p.col < 0 || p.row >= height_ || p.col >= width_) return true;
  return wall_[static_cast<std::size_t>(p.row * width_ + p.col)];
}

CellId MazeLayout::cell_at(GridPos p) const {
  if (is_wall(p)) throw std::out_of_range("maze: position is not a corridor cell");
  return grid_to_cell_[static_cast<std::size_t>(p.row * width_ + p.col)];
}

std::vector<int> MazeLayout::distances_from(CellId from) const {
  std::vector<int> dist(cells_.size(), -1);
  std::deque<CellId> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    const CellId c = queue.front();
    queue.pop_front();
    for (Action a : kActions) {
      const CellId n = move(c, a);
      if (dist[n] < 0) {
        dist[n] = dist[c] + 1;
        queue.push_back(n);
      }
    }
  }
  return dist;
}

std::string MazeLayout::to_text() const {
  std::string out;
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      const GridPos p{r, c};
      if (is_wall(p)) {
        out += '#';
        continue;
      }
      const CellId id = cell_at(p);
      if (id == start_) {
        out += 'P';
      } else if (std::find(ghost_spawns_.begin(), ghost_spawns_.end(), id) != ghost_spawns_.end()) {
        out += 'G';
      } else {
        out += '.';
      }
    }
    out += '\n';
  }
  return out;
}

std::string MazeLayout::summary() const {
  std::ostringstream os;
  os << width_ << "x" << height_ << " maze: " << cell_count() << " corridor cells, "
     << fruit_cells_.size() << " fruit cells, " << ghost_spawns_.size() << " ghost spawns";
  return os.str();
}

std::string_view builtin_layout_text(std::string_view name) {
  if (name == "pacboy11") return kPacBoy11;
  if (name == "pacboy7") return kPacBoy7;
  throw std::invalid_argument("unknown builtin layout '" + std::string(name) + "'");
}

MazeLayout builtin_layout(std::string_view name) {
  return MazeLayout::parse(builtin_layout_text(name));
}

MazeLayout resolve_layout(const std::string& spec) {
  constexpr std::string_view prefix = "builtin:";
  if (spec.rfind(prefix, 0) == 0) return builtin_layout(spec.substr(prefix.size()));
  return MazeLayout::load(spec);
}

}  // namespace madrl::env
