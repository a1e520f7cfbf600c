#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "madrl/maze.hpp"
#include "madrl/rng.hpp"

namespace madrl::env {

inline constexpr int kMaxSteps = 300;
inline constexpr double kFruitReward = 1.0;
inline constexpr double kGhostPenalty = -10.0;
inline constexpr double kFruitProbability = 0.5;

/// Advisor ids: fruit slot j is advisor j; ghost g is advisor fruit_count + g.
using AdvisorId = std::size_t;

inline AdvisorId fruit_advisor_id(std::size_t slot) { return slot; }
inline AdvisorId ghost_advisor_id(const MazeLayout& layout, std::size_t ghost) {
  return layout.fruit_cells().size() + ghost;
}

struct PacBoyState {
  CellId agent = 0;
  std::vector<bool> fruits;  // one bit per slot of MazeLayout::fruit_cells()
  std::vector<CellId> ghosts;
  int step = 0;

  std::size_t fruit_count() const;
  bool has_fruit_at(const MazeLayout& layout, CellId c) const;
  friend bool operator==(const PacBoyState&, const PacBoyState&) = default;
};

struct StepEvents {
  std::vector<std::size_t> eaten_fruits;  // fruit slots
  std::vector<std::size_t> collisions;    // ghost indices
};

struct StepOutcome {
  PacBoyState next_state;
  double global_reward = 0.0;
  std::map<AdvisorId, double> advisor_rewards;  // non-zero rewards only
  bool done = false;
  StepEvents events;
};

PacBoyState pacboy_reset(const MazeLayout& layout, Rng& rng);
PacBoyState pacboy_reset(const MazeLayout& layout, std::uint64_t seed);

bool is_done(const PacBoyState& state);

/// Agent and ghosts move simultaneously; collisions are checked on the
/// post-move cells. Throws std::logic_error on a finished episode.
StepOutcome pacboy_step(const MazeLayout& layout, const PacBoyState& state, Action action,
                        Rng& rng);

/// Throws std::invalid_argument when `state` is inconsistent with `layout`.
void validate_state(const MazeLayout& layout, const PacBoyState& state);

/// ASCII frame: `#` wall, `o` fruit, `P` agent, `G` ghost, `X` agent caught.
std::string render(const MazeLayout& layout, const PacBoyState& state);

}  // namespace madrl::env
