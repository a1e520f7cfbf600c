#include "madrl/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace madrl::mdp {

TabularMDP::TabularMDP(std::size_t state_count, std::size_t action_count, double discount)
    : state_count_(state_count), action_count_(action_count), discount_(discount),
      outcomes_(state_count * action_count), terminal_(state_count, 0) {
  if (state_count == 0 || action_count == 0) {
    throw std::invalid_argument("TabularMDP needs at least one state and one action");
  }
  set_discount(discount);
}

void TabularMDP::set_discount(double discount) {
  if (!(discount >= 0.0 && discount < 1.0)) {
    throw std::invalid_argument("discount must lie in [0, 1)");
  }
  discount_ = discount;
}

void TabularMDP::check_pair(StateId s, ActionId a) const {
  if (s >= state_count_ || a >= action_count_) {
    throw std::out_of_range("state or action index out of range");
  }
}

void TabularMDP::add_outcome(StateId s, ActionId a, StateId next, double prob, double reward) {
  check_pair(s, a);
  if (next >= state_count_) throw std::out_of_range("next state out of range");
  auto& list = outcomes_[index(s, a)];
  for (auto& o : list) {
    if (o.next == next) {
      const double total = o.prob + prob;
      o.reward = total > 0.0 ? (o.prob * o.reward + prob * reward) / total : reward;
      o.prob = total;
      return;
    }
  }
  list.push_back({next, prob, reward});
}

void TabularMDP::set_outcomes(StateId s, ActionId a, std::vector<Outcome> outcomes) {
  check_pair(s, a);
  outcomes_[index(s, a)] = std::move(outcomes);
}

void TabularMDP::set_terminal(StateId s) {
  check_pair(s, 0);
  terminal_[s] = 1;
  for (ActionId a = 0; a < action_count_; ++a) {
    outcomes_[index(s, a)] = {{s, 1.0, 0.0}};
  }
}

double TabularMDP::expected_reward(StateId s, ActionId a) const {
  double r = 0.0;
  for (const auto& o : outcomes(s, a)) r += o.prob * o.reward;
  return r;
}

bool TabularMDP::is_stay(StateId s, ActionId a) const {
  const auto list = outcomes(s, a);
  return list.size() == 1 && list[0].next == s && list[0].prob == 1.0 && list[0].reward == 0.0;
}

void TabularMDP::validate() const {
  for (StateId s = 0; s < state_count_; ++s) {
    for (ActionId a = 0; a < action_count_; ++a) {
      const auto list = outcomes(s, a);
      std::ostringstream where;
      where << "(state " << s << ", action " << a << ")";
      if (list.empty()) throw std::invalid_argument("no outcomes for " + where.str());
      double total = 0.0;
      for (const auto& o : list) {
        if (!(o.prob >= 0.0 && o.prob <= 1.0)) {
          throw std::invalid_argument("probability outside [0,1] at " + where.str());
        }
        if (!std::isfinite(o.reward)) throw std::invalid_argument("non-finite reward at " + where.str());
        total += o.prob;
      }
      if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("transition distribution does not sum to 1 at " + where.str());
      }
      if (is_terminal(s) && !is_stay(s, a)) {
        throw std::invalid_argument("terminal state must self-loop with zero reward at " + where.str());
      }
    }
  }
}

double QFunction::max(StateId s) const {
  const auto r = row(s);
  return *std::max_element(r.begin(), r.end());
}

bool QFunction::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Policy Policy::uniform(std::size_t state_count, std::size_t action_count) {
  Policy p(state_count, action_count);
  std::fill(p.probs_.begin(), p.probs_.end(), 1.0 / static_cast<double>(action_count));
  return p;
}

void Policy::validate() const {
  for (StateId s = 0; s < state_count_; ++s) {
    double total = 0.0;
    for (double p : row(s)) {
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("policy probability outside [0,1]");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("policy row does not sum to 1");
  }
}

TieRule parse_tie_rule(const std::string& name) {
  if (name == "lowest_index") return TieRule::lowest_index;
  if (name == "uniform_random") return TieRule::uniform_random;
  throw std::invalid_argument("unknown tie rule '" + name + "'");
}

std::string to_string(TieRule rule) {
  return rule == TieRule::lowest_index ? "lowest_index" : "uniform_random";
}

std::vector<ActionId> argmax_set(std::span<const double> values) {
  std::vector<ActionId> best;
  double top = -INFINITY;
  for (ActionId a = 0; a < values.size(); ++a) {
    if (values[a] > top) {
      top = values[a];
      best.assign(1, a);
    } else if (values[a] == top) {
      best.push_back(a);
    }
  }
  return best;
}

ActionId argmax_lowest(std::span<const double> values) {
  ActionId best = 0;
  for (ActionId a = 1; a < values.size(); ++a) {
    if (values[a] > values[best]) best = a;
  }
  return best;
}

Policy greedy_policy(const QFunction& q, TieRule tie_rule) {
  Policy pi(q.state_count(), q.action_count());
  for (StateId s = 0; s < q.state_count(); ++s) {
    if (tie_rule == TieRule::lowest_index) {
      pi(s, argmax_lowest(q.row(s))) = 1.0;
    } else {
      const auto best = argmax_set(q.row(s));
      for (ActionId a : best) pi(s, a) = 1.0 / static_cast<double>(best.size());
    }
  }
  return pi;
}

double optimality_backup(const TabularMDP& mdp, const QFunction& q, StateId s, ActionId a) {
  double v = 0.0;
  for (const auto& o : mdp.outcomes(s, a)) {
    v += o.prob * (o.reward + mdp.discount() * q.max(o.next));
  }
  return v;
}

double bellman_residual(const TabularMDP& mdp, const QFunction& q) {
  double worst = 0.0;
  for (StateId s = 0; s < mdp.state_count(); ++s) {
    for (ActionId a = 0; a < mdp.action_count(); ++a) {
      worst = std::max(worst, std::abs(optimality_backup(mdp, q, s, a) - q(s, a)));
    }
  }
  return worst;
}

namespace {

// Shared Jacobi sweep. `state_value(q, s)` turns the current table into the
// bootstrap value of s; the Q update is then an exact expectation over the
// outcome list. Every entry is computed independently so the parallel and
// serial loops produce identical bits.
template <bool Parallel, class StateValue>
QFunction jacobi_iterate(const TabularMDP& mdp, double tol, StateValue state_value,
                         const char* what) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  mdp.validate();
  const std::size_t S = mdp.state_count();
  const std::size_t A = mdp.action_count();
  const double gamma = mdp.discount();
  QFunction q(S, A), next(S, A);
  std::vector<double> v(S, 0.0);
  const auto n_states = static_cast<std::ptrdiff_t>(S);
  const auto n_entries = static_cast<std::ptrdiff_t>(S * A);

  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double delta = 0.0;
    if constexpr (Parallel) {
#pragma omp parallel
      {
#pragma omp for schedule(static)
        for (std::ptrdiff_t s = 0; s < n_states; ++s) v[s] = state_value(q, s);
#pragma omp for schedule(static) reduction(max : delta)
        for (std::ptrdiff_t i = 0; i < n_entries; ++i) {
          const auto s = static_cast<StateId>(i) / A;
          const auto a = static_cast<ActionId>(i) % A;
          double value = 0.0;
          for (const auto& o : mdp.outcomes(s, a)) value += o.prob * (o.reward + gamma * v[o.next]);
          next.values()[i] = value;
          delta = std::max(delta, std::abs(value - q.values()[i]));
        }
      }
    } else {
      for (std::ptrdiff_t s = 0; s < n_states; ++s) v[s] = state_value(q, s);
      for (std::ptrdiff_t i = 0; i < n_entries; ++i) {
        const auto s = static_cast<StateId>(i) / A;
        const auto a = static_cast<ActionId>(i) % A;
        double value = 0.0;
        for (const auto& o : mdp.outcomes(s, a)) value += o.prob * (o.reward + gamma * v[o.next]);
        next.values()[i] = value;
        delta = std::max(delta, std::abs(value - q.values()[i]));
      }
    }
    std::swap(q, next);
    if (!std::isfinite(delta)) break;
    if (delta <= tol) return q;
  }
  throw ConvergenceError(std::string(what) + " did not converge within the sweep cap");
}

auto max_value() {
  return [](const QFunction& q, std::ptrdiff_t s) { return q.max(static_cast<StateId>(s)); };
}

auto policy_value(const Policy& policy) {
  return [&policy](const QFunction& q, std::ptrdiff_t s) {
    const auto st = static_cast<StateId>(s);
    double v = 0.0;
    const auto row = q.row(st);
    const auto probs = policy.row(st);
    for (std::size_t a = 0; a < row.size(); ++a) v += probs[a] * row[a];
    return v;
  };
}

void check_policy(const TabularMDP& mdp, const Policy& policy) {
  if (policy.state_count() != mdp.state_count() || policy.action_count() != mdp.action_count()) {
    throw std::invalid_argument("policy shape does not match the MDP");
  }
  policy.validate();
}

}  // namespace

QFunction value_iteration(const TabularMDP& mdp, double tol) {
  return jacobi_iterate<true>(mdp, tol, max_value(), "value iteration");
}

QFunction policy_evaluation(const TabularMDP& mdp, const Policy& policy, double tol) {
  check_policy(mdp, policy);
  return jacobi_iterate<true>(mdp, tol, policy_value(policy), "policy evaluation");
}

namespace reference {

QFunction value_iteration(const TabularMDP& mdp, double tol) {
  return jacobi_iterate<false>(mdp, tol, max_value(), "value iteration");
}

QFunction policy_evaluation(const TabularMDP& mdp, const Policy& policy, double tol) {
  check_policy(mdp, policy);
  return jacobi_iterate<false>(mdp, tol, policy_value(policy), "policy evaluation");
}

}  // namespace reference

}  // namespace madrl::mdp
