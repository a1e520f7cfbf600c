#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "madrl/mdp.hpp"
#include "madrl/rng.hpp"

namespace madrl::agg {

using mdp::ActionId;

struct Recommendation {
  std::size_t advisor_id = 0;
  std::vector<double> q;  // local Q-values at the advisor's current local state
  bool active = true;
};

/// q_sigma[a] = sum_j w_j q_j[a] over active recommendations; advisors without
/// an entry in `weights` get weight 1.
std::vector<double> aggregate(std::span<const Recommendation> recs,
                              const std::map<std::size_t, double>& weights,
                              std::size_t action_count);

/// q_sigma += weight * q (allocation-free inner step of aggregate()).
void accumulate(std::span<double> q_sigma, std::span<const double> q, double weight = 1.0);

/// Epsilon-greedy selection; the greedy branch breaks ties per `tie_rule`.
ActionId select_action(std::span<const double> q_sigma, double epsilon, mdp::TieRule tie_rule,
                       Rng& rng);

/// Greedy action only (no exploration draw).
ActionId greedy_action(std::span<const double> q_sigma, mdp::TieRule tie_rule, Rng& rng);

}  // namespace madrl::agg
