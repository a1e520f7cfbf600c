#include "madrl/scenarios.hpp"

#include <stdexcept>

namespace madrl::env {

namespace {

mdp::TabularMDP toy_with_rewards(double r1, double r2, double gamma) {
  using T = ToyAttractor;
  mdp::TabularMDP m(3, 3, gamma);
  m.add_outcome(T::x0, T::a0, T::x0, 1.0, 0.0);
  m.add_outcome(T::x0, T::a1, T::x1, 1.0, r1);
  m.add_outcome(T::x0, T::a2, T::x2, 1.0, r2);
  m.set_terminal(T::x1);
  m.set_terminal(T::x2);
  return m;
}

}  // namespace

ToyAttractor toy_attractor_mdp(double r1, double r2, double gamma) {
  if (!(r1 > 0.0 && r2 > 0.0)) throw std::invalid_argument("toy attractor rewards must be positive");
  return ToyAttractor{toy_with_rewards(r1, r2, gamma),
                      {toy_with_rewards(r1, 0.0, gamma), toy_with_rewards(0.0, r2, gamma)}};
}

ThreeFruitScenario three_fruit_scenario() {
  ThreeFruitScenario s{MazeLayout::parse(".....\n"
                                         ".....\n"
                                         "..P..\n"
                                         "#####\n"),
                       {},
                       {}};
  s.fruit_cells = {s.layout.cell_at({0, 2}), s.layout.cell_at({2, 0}), s.layout.cell_at({2, 4})};
  s.state.agent = s.layout.start();
  s.state.fruits.assign(s.layout.fruit_cells().size(), false);
  for (CellId c : s.fruit_cells) s.state.fruits[s.layout.fruit_slot(c)] = true;
  s.state.step = 0;
  return s;
}

}  // namespace madrl::env
