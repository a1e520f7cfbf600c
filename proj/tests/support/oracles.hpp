#pragma once

// Test-side oracles, written independently of the library's solvers:
// dense models solved by exact linear algebra and policy iteration, a
// Held-Karp tour solver, and random instance generators.

#include <cstddef>
#include <vector>

#include "madrl/advisors.hpp"
#include "madrl/fruit_grid.hpp"
#include "madrl/mdp.hpp"
#include "madrl/rng.hpp"

namespace madrl::testing {

struct DenseMDP {
  std::size_t S = 0;
  std::size_t A = 0;
  double gamma = 0.0;
  std::vector<double> P;  // [s][a][s']
  std::vector<double> R;  // expected reward [s][a]

  double& p(std::size_t s, std::size_t a, std::size_t t) { return P[(s * A + a) * S + t]; }
  double p(std::size_t s, std::size_t a, std::size_t t) const { return P[(s * A + a) * S + t]; }
};

DenseMDP to_dense(const mdp::TabularMDP& m);

/// Q^pi by solving (I - gamma P_pi) V = R_pi directly; pi is [s][a].
std::vector<double> exact_policy_q(const DenseMDP& m, const std::vector<double>& pi);

/// Q* by Howard policy iteration with exact evaluation.
std::vector<double> policy_iteration_q(const DenseMDP& m);

double sup_diff(const std::vector<double>& a, const std::vector<double>& b);

struct RandomMDPOptions {
  std::size_t max_branching = 3;
  double reward_density = 0.5;
  double terminal_fraction = 0.1;
};

mdp::TabularMDP random_mdp(Rng& rng, std::size_t states, std::size_t actions, double gamma,
                           const RandomMDPOptions& opts = {});

/// Advisors share one random transition structure and differ in rewards; the
/// global MDP carries the weighted reward sum.
struct FullStateInstance {
  std::vector<mdp::TabularMDP> advisors;
  std::vector<double> weights;
  mdp::TabularMDP global{1, 1, 0.0};
};

FullStateInstance random_full_state(Rng& rng, std::size_t states, std::size_t actions,
                                    std::size_t advisors, double gamma);

/// Global state = tuple of per-advisor factors (product <= max_states).
/// Some advisors get action 0 as a zero-reward self-loop so stay actions occur.
advisors::Decomposition random_product_decomposition(Rng& rng, std::size_t max_states,
                                                     double gamma);

/// Shortest open tour from the agent over all fruits, by Held-Karp DP.
int held_karp_tour(const env::FruitGridState& state);

}  // namespace madrl::testing
