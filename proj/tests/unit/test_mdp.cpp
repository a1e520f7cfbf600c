#include <doctest.h>

#include <cmath>

#include "madrl/mdp.hpp"
#include "oracles.hpp"

using namespace madrl;
using mdp::TabularMDP;

namespace {

std::vector<double> flat_policy(const mdp::Policy& p) {
  std::vector<double> out;
  for (std::size_t s = 0; s < p.state_count(); ++s) {
    for (double w : p.row(s)) out.push_back(w);
  }
  return out;
}

}  // namespace

TEST_CASE("two-state chain has the textbook optimal values") {
  // s0 --a1--> s1 pays 1; s1 is terminal. a0 loops on s0 for nothing.
  TabularMDP m(2, 2, 0.9);
  m.add_outcome(0, 0, 0, 1.0, 0.0);
  m.add_outcome(0, 1, 1, 1.0, 1.0);
  m.set_terminal(1);
  m.validate();
  const auto q = mdp::value_iteration(m);
  CHECK(q(0, 1) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(q(0, 0) == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(q(1, 0) == 0.0);
  CHECK(q(1, 1) == 0.0);
}

TEST_CASE("value iteration matches policy iteration on random MDPs") {
  Rng rng = make_rng({11});
  for (int i = 0; i < 30; ++i) {
    const std::size_t states = 2 + uniform_index(rng, 40);
    const std::size_t actions = 1 + uniform_index(rng, 4);
    const double gamma = 0.1 + 0.85 * uniform_real(rng);
    const auto m = testing::random_mdp(rng, states, actions, gamma);
    const auto q = mdp::value_iteration(m, 1e-12);
    const auto oracle = testing::policy_iteration_q(testing::to_dense(m));
    CHECK(testing::sup_diff(q.values(), oracle) < 1e-8);
    CHECK(mdp::bellman_residual(m, q) < 1e-10);
  }
}

TEST_CASE("policy evaluation matches the linear solve") {
  Rng rng = make_rng({12});
  for (int i = 0; i < 30; ++i) {
    const std::size_t states = 2 + uniform_index(rng, 40);
    const std::size_t actions = 1 + uniform_index(rng, 4);
    const auto m = testing::random_mdp(rng, states, actions, 0.9);
    mdp::Policy pi(states, actions);
    for (std::size_t s = 0; s < states; ++s) {
      double total = 0.0;
      std::vector<double> w(actions);
      for (auto& x : w) total += (x = uniform_real(rng) + 0.01);
      for (std::size_t a = 0; a < actions; ++a) pi(s, a) = w[a] / total;
    }
    const auto q = mdp::policy_evaluation(m, pi, 1e-12);
    const auto oracle = testing::exact_policy_q(testing::to_dense(m), flat_policy(pi));
    CHECK(testing::sup_diff(q.values(), oracle) < 1e-8);
  }
}

TEST_CASE("parallel sweeps are bit-identical to the serial reference") {
  Rng rng = make_rng({13});
  const auto m = testing::random_mdp(rng, 300, 4, 0.95);
  CHECK(mdp::value_iteration(m) == mdp::reference::value_iteration(m));
  const auto pi = mdp::Policy::uniform(300, 4);
  CHECK(mdp::policy_evaluation(m, pi) == mdp::reference::policy_evaluation(m, pi));
}

TEST_CASE("solvers report non-convergence instead of returning silently") {
  TabularMDP m(1, 1, 0.999999);
  m.add_outcome(0, 0, 0, 1.0, 1.0);
  CHECK_THROWS_AS(mdp::value_iteration(m, 1e-300), mdp::ConvergenceError);
  CHECK_THROWS_AS(mdp::value_iteration(m, 0.0), std::invalid_argument);
}

TEST_CASE("validate rejects malformed models") {
  TabularMDP m(2, 1, 0.5);
  CHECK_THROWS(m.validate());  // no outcomes yet
  m.add_outcome(0, 0, 1, 0.5, 0.0);
  m.add_outcome(1, 0, 1, 1.0, 0.0);
  CHECK_THROWS(m.validate());  // row sums to 0.5
  m.add_outcome(0, 0, 0, 0.5, 0.0);
  CHECK_NOTHROW(m.validate());
  CHECK_THROWS(TabularMDP(2, 1, 1.0));
  CHECK_THROWS(m.add_outcome(0, 0, 5, 1.0, 0.0));
}

TEST_CASE("stay detection and tie handling") {
  TabularMDP m(2, 3, 0.5);
  m.add_outcome(0, 0, 0, 1.0, 0.0);
  m.add_outcome(0, 1, 0, 1.0, 1.0);
  m.add_outcome(0, 2, 1, 1.0, 0.0);
  m.set_terminal(1);
  CHECK(m.is_stay(0, 0));
  CHECK_FALSE(m.is_stay(0, 1));
  CHECK_FALSE(m.is_stay(0, 2));

  const std::vector<double> v{1.0, 3.0, 3.0, 2.0};
  CHECK(mdp::argmax_set(v) == std::vector<mdp::ActionId>{1, 2});
  CHECK(mdp::argmax_lowest(v) == 1);

  mdp::QFunction q(1, 4);
  q.values() = v;
  const auto lowest = mdp::greedy_policy(q, mdp::TieRule::lowest_index);
  CHECK(lowest(0, 1) == 1.0);
  CHECK(lowest(0, 2) == 0.0);
  const auto split = mdp::greedy_policy(q, mdp::TieRule::uniform_random);
  CHECK(split(0, 1) == 0.5);
  CHECK(split(0, 2) == 0.5);
  CHECK(mdp::parse_tie_rule("uniform_random") == mdp::TieRule::uniform_random);
  CHECK_THROWS(mdp::parse_tie_rule("first"));
}
