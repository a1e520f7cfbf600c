#include "madrl/pacboy.hpp"

#include <algorithm>
#include <stdexcept>

namespace madrl::env {

std::size_t PacBoyState::fruit_count() const {
  return static_cast<std::size_t>(std::count(fruits.begin(), fruits.end(), true));
}

bool PacBoyState::has_fruit_at(const MazeLayout& layout, CellId c) const {
  const auto slot = layout.fruit_slot(c);
  return slot != MazeLayout::npos && fruits[slot];
}

PacBoyState pacboy_reset(const MazeLayout& layout, Rng& rng) {
  PacBoyState s;
  s.agent = layout.start();
  s.fruits.resize(layout.fruit_cells().size());
  for (std::size_t i = 0; i < s.fruits.size(); ++i) s.fruits[i] = bernoulli(rng, kFruitProbability);
  s.ghosts = layout.ghost_spawns();
  s.step = 0;
  return s;
}

PacBoyState pacboy_reset(const MazeLayout& layout, std::uint64_t seed) {
  Rng rng = make_rng({seed});
  return pacboy_reset(layout, rng);
}

bool is_done(const PacBoyState& state) {
  return state.step >= kMaxSteps ||
         std::none_of(state.fruits.begin(), state.fruits.end(), [](bool b) { return b; });
}

StepOutcome pacboy_step(const MazeLayout& layout, const PacBoyState& state, Action action,
                        Rng& rng) {
  if (is_done(state)) throw std::logic_error("pacboy_step called on a finished episode");

  StepOutcome out;
  PacBoyState& next = out.next_state;
  next = state;
  next.agent = layout.move(state.agent, action);
  for (auto& g : next.ghosts) g = layout.move(g, kActions[uniform_index(rng, kActionCount)]);
  next.step = state.step + 1;

  const auto slot = layout.fruit_slot(next.agent);
  if (slot != MazeLayout::npos && next.fruits[slot]) {
    next.fruits[slot] = false;
    out.events.eaten_fruits.push_back(slot);
    out.advisor_rewards[fruit_advisor_id(slot)] += kFruitReward;
  }
  for (std::size_t g = 0; g < next.ghosts.size(); ++g) {
    if (next.ghosts[g] == next.agent) {
      out.events.collisions.push_back(g);
      out.advisor_rewards[ghost_advisor_id(layout, g)] += kGhostPenalty;
    }
  }
  for (const auto& [id, r] : out.advisor_rewards) out.global_reward += r;
  out.done = is_done(next);
  return out;
}

void validate_state(const MazeLayout& layout, const PacBoyState& state) {
  if (state.agent >= layout.cell_count()) throw std::invalid_argument("agent off the corridor");
  if (state.fruits.size() != layout.fruit_cells().size()) {
    throw std::invalid_argument("fruit bitset size does not match the layout");
  }
  for (CellId g : state.ghosts) {
    if (g >= layout.cell_count()) throw std::invalid_argument("ghost off the corridor");
  }
  if (state.step < 0 || state.step > kMaxSteps) throw std::invalid_argument("step out of range");
}

std::string render(const MazeLayout& layout, const PacBoyState& state) {
  std::string out;
  for (int r = 0; r < layout.height(); ++r) {
    for (int c = 0; c < layout.width(); ++c) {
      const GridPos p{r, c};
      if (layout.is_wall(p)) {
        out += '#';
        continue;
      }
      const CellId id = layout.cell_at(p);
      const bool ghost = std::find(state.ghosts.begin(), state.ghosts.end(), id) != state.ghosts.end();
      if (id == state.agent) {
        out += ghost ? 'X' : 'P';
      } else if (ghost) {
        out += 'G';
      } else if (state.has_fruit_at(layout, id)) {
        out += 'o';
      } else {
        out += '.';
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace madrl::env
