#include <doctest.h>

#include <set>

#include "madrl/fruit_grid.hpp"
#include "madrl/pacboy.hpp"
#include "madrl/scenarios.hpp"

using namespace madrl;
using namespace madrl::env;

TEST_CASE("maze parsing numbers corridor cells row-major") {
  const auto m = MazeLayout::parse("P.#\n.G.\n");
  CHECK(m.width() == 3);
  CHECK(m.height() == 2);
  CHECK(m.cell_count() == 5);
  CHECK(m.start() == 0);
  CHECK(m.position(2) == GridPos{1, 0});
  CHECK(m.ghost_spawns() == std::vector<CellId>{3});
  CHECK(m.fruit_cells() == std::vector<CellId>{1, 2, 3, 4});
  CHECK(m.fruit_slot(0) == MazeLayout::npos);
  CHECK(m.is_wall({0, 2}));
  CHECK(m.is_wall({-1, 0}));
  CHECK_THROWS(m.cell_at({0, 2}));

  CHECK(m.move(0, Action::East) == 1);
  CHECK(m.blocked(1, Action::East));
  CHECK(m.blocked(0, Action::North));
  CHECK(m.move(0, Action::South) == 2);
  CHECK(m.distances_from(0) == std::vector<int>{0, 1, 1, 2, 3});
  CHECK(MazeLayout::parse(m.to_text()).to_text() == m.to_text());
}

TEST_CASE("maze parsing rejects bad layouts") {
  CHECK_THROWS(MazeLayout::parse("..\n..\n"));       // no start
  CHECK_THROWS(MazeLayout::parse("P.\nP.\n"));       // two starts
  CHECK_THROWS(MazeLayout::parse("P.\n...\n"));      // ragged
  CHECK_THROWS(MazeLayout::parse("P.x\n"));          // unknown glyph
  CHECK_THROWS(resolve_layout("builtin:nowhere"));
}

TEST_CASE("builtin layouts") {
  const auto big = builtin_layout("pacboy11");
  CHECK(big.width() == 11);
  CHECK(big.height() == 11);
  CHECK(big.cell_count() == 76);
  CHECK(big.fruit_cells().size() == 75);
  CHECK(big.ghost_spawns().size() == 2);
  // every corridor cell reachable
  for (int d : big.distances_from(big.start())) CHECK(d >= 0);

  const auto small = builtin_layout("pacboy7");
  CHECK(small.width() == 7);
  CHECK(small.ghost_spawns().size() == 2);
  for (int d : small.distances_from(small.start())) CHECK(d >= 0);
}

TEST_CASE("reset draws each fruit with probability one half") {
  const auto layout = builtin_layout("pacboy11");
  Rng rng = make_rng({5});
  double total = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto s = pacboy_reset(layout, rng);
    CHECK_FALSE(s.has_fruit_at(layout, layout.start()));
    total += static_cast<double>(s.fruit_count());
  }
  const double mean = total / n;
  CHECK(mean >= 36.5);
  CHECK(mean <= 38.5);
  CHECK(pacboy_reset(layout, 9u) == pacboy_reset(layout, 9u));
}

TEST_CASE("eating a fruit while colliding pays -9") {
  // The ghost at cell 1 stays put unless it draws West.
  const auto layout = MazeLayout::parse("PG\n");
  bool seen = false;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    PacBoyState s{0, {true}, {1}, 0};
    Rng rng = make_rng({seed});
    const auto out = pacboy_step(layout, s, Action::East, rng);
    CHECK(out.events.eaten_fruits == std::vector<std::size_t>{0});
    if (out.events.collisions.empty()) {
      CHECK(out.global_reward == 1.0);
      continue;
    }
    seen = true;
    CHECK(out.global_reward == -9.0);
    CHECK(out.advisor_rewards.at(fruit_advisor_id(0)) == 1.0);
    CHECK(out.advisor_rewards.at(ghost_advisor_id(layout, 0)) == -10.0);
    CHECK(out.done);  // last fruit eaten
  }
  CHECK(seen);
}

TEST_CASE("episodes end at the step cap or when the board is empty") {
  const auto layout = MazeLayout::parse("P..\n");
  PacBoyState s{0, {false, true}, {}, 0};
  Rng rng = make_rng({1});
  auto out = pacboy_step(layout, s, Action::West, rng);  // bump
  CHECK(out.global_reward == 0.0);
  CHECK(out.next_state.agent == 0);
  CHECK_FALSE(out.done);

  s.step = kMaxSteps - 1;
  out = pacboy_step(layout, s, Action::East, rng);
  CHECK(out.done);
  CHECK_THROWS_AS(pacboy_step(layout, out.next_state, Action::East, rng), std::logic_error);

  PacBoyState empty{0, {false, false}, {}, 0};
  CHECK(is_done(empty));
  CHECK_THROWS(validate_state(layout, PacBoyState{7, {false, false}, {}, 0}));
}

TEST_CASE("render marks fruit, agent and ghosts") {
  const auto layout = MazeLayout::parse("P.#\n..G\n");
  PacBoyState s{0, {true, false, false, true}, {4}, 0};
  CHECK(render(layout, s) == "Po#\n..G\n");
}

TEST_CASE("fruit grid reset places five fruits away from the agent") {
  Rng rng = make_rng({3});
  std::set<GridCell> agents;
  for (int i = 0; i < 2000; ++i) {
    const auto s = fruit_grid_reset(rng);
    CHECK(s.fruits.count() == kGridFruits);
    CHECK_FALSE(s.fruits.test(s.agent));
    agents.insert(s.agent);
  }
  CHECK(agents.size() == kGridCells);
}

TEST_CASE("fruit grid geometry") {
  CHECK(grid_distance(grid_cell(0, 0), grid_cell(4, 4)) == 8);
  CHECK(grid_neighbors(grid_cell(2, 2)) ==
        std::vector<GridCell>{grid_cell(1, 2), grid_cell(2, 1), grid_cell(3, 2), grid_cell(2, 3)});
  CHECK(grid_neighbors(0) == std::vector<GridCell>{grid_cell(1, 0), grid_cell(0, 1)});
  FruitGridState s;
  s.fruits.set(7);
  CHECK(grid_visit(s, 7) == 1);
  CHECK(grid_visit(s, 7) == 0);
  CHECK(s.agent == 7);
}

TEST_CASE("three-fruit scenario geometry") {
  const auto sc = three_fruit_scenario();
  CHECK(sc.state.fruit_count() == 3);
  const auto d = sc.layout.distances_from(sc.state.agent);
  for (CellId f : sc.fruit_cells) CHECK(d[f] == 2);
  CHECK(sc.layout.blocked(sc.state.agent, Action::South));
}
