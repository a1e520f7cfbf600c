#include "madrl/aggregator.hpp"

#include <cmath>
#include <stdexcept>

namespace madrl::agg {

std::vector<double> aggregate(std::span<const Recommendation> recs,
                              const std::map<std::size_t, double>& weights,
                              std::size_t action_count) {
  std::vector<double> sigma(action_count, 0.0);
  for (const auto& rec : recs) {
    if (rec.q.size() != action_count) {
      throw std::invalid_argument("recommendation arity does not match the action count");
    }
    if (!rec.active) continue;
    const auto it = weights.find(rec.advisor_id);
    agg::accumulate(sigma, rec.q, it == weights.end() ? 1.0 : it->second);
  }
  return sigma;
}

void accumulate(std::span<double> q_sigma, std::span<const double> q, double weight) {
  for (std::size_t a = 0; a < q_sigma.size(); ++a) q_sigma[a] += weight * q[a];
}

ActionId greedy_action(std::span<const double> q_sigma, mdp::TieRule tie_rule, Rng& rng) {
  if (tie_rule == mdp::TieRule::lowest_index) return mdp::argmax_lowest(q_sigma);
  const auto best = mdp::argmax_set(q_sigma);
  if (best.empty()) throw std::invalid_argument("q_sigma must be finite");
  return best.size() == 1 ? best.front() : best[uniform_index(rng, best.size())];
}

ActionId select_action(std::span<const double> q_sigma, double epsilon, mdp::TieRule tie_rule,
                       Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  if (epsilon > 0.0 && uniform_real(rng) < epsilon) return uniform_index(rng, q_sigma.size());
  return greedy_action(q_sigma, tie_rule, rng);
}

}  // namespace madrl::agg
