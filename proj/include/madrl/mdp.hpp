#pragma once

// Finite MDPs and the exact dynamic-programming oracles used as ground truth
// throughout the library.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace madrl::mdp {

using StateId = std::size_t;
using ActionId = std::size_t;

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr std::size_t kMaxSweeps = 1'000'000;

/// Raised when an iterative solver exhausts its sweep budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Outcome {
  StateId next;
  double prob;
  double reward;
};

/**
 * Finite MDP with sparse stochastic transitions.
 *
 * Rewards live on (state, action, next_state) triples; the R(x, a) form is the
 * expectation over the outcome list. Terminal states self-loop with
 * probability one and reward zero.
 */
class TabularMDP {
 public:
  TabularMDP(std::size_t state_count, std::size_t action_count, double discount);

  std::size_t state_count() const { return state_count_; }
  std::size_t action_count() const { return action_count_; }
  double discount() const { return discount_; }
  void set_discount(double discount);

  /// Appends an outcome; repeated next states are merged.
  void add_outcome(StateId s, ActionId a, StateId next, double prob, double reward);
  /// Replaces the outcome list of (s, a).
  void set_outcomes(StateId s, ActionId a, std::vector<Outcome> outcomes);
  void set_terminal(StateId s);

  bool is_terminal(StateId s) const { return terminal_[s] != 0; }
  std::span<const Outcome> outcomes(StateId s, ActionId a) const {
    return outcomes_[index(s, a)];
  }

  /// Expected immediate reward of (s, a).
  double expected_reward(StateId s, ActionId a) const;

  /// True when (s, a) keeps the system in s with probability one and pays zero.
  bool is_stay(StateId s, ActionId a) const;

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;

 private:
  std::size_t index(StateId s, ActionId a) const { return s * action_count_ + a; }
  void check_pair(StateId s, ActionId a) const;

  std::size_t state_count_;
  std::size_t action_count_;
  double discount_;
  std::vector<std::vector<Outcome>> outcomes_;
  std::vector<std::uint8_t> terminal_;
};

/// Dense (state, action) table of action values.
class QFunction {
 public:
  QFunction() = default;
  QFunction(std::size_t state_count, std::size_t action_count, double fill = 0.0)
      : state_count_(state_count), action_count_(action_count),
        values_(state_count * action_count, fill) {}

  std::size_t state_count() const { return state_count_; }
  std::size_t action_count() const { return action_count_; }

  double& operator()(StateId s, ActionId a) { return values_[s * action_count_ + a]; }
  double operator()(StateId s, ActionId a) const { return values_[s * action_count_ + a]; }

  std::span<double> row(StateId s) { return {values_.data() + s * action_count_, action_count_}; }
  std::span<const double> row(StateId s) const {
    return {values_.data() + s * action_count_, action_count_};
  }

  double max(StateId s) const;
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool all_finite() const;

  friend bool operator==(const QFunction&, const QFunction&) = default;

 private:
  std::size_t state_count_ = 0;
  std::size_t action_count_ = 0;
  std::vector<double> values_;
};

/// Stochastic policy: one distribution over actions per state.
class Policy {
 public:
  Policy(std::size_t state_count, std::size_t action_count)
      : state_count_(state_count), action_count_(action_count),
        probs_(state_count * action_count, 0.0) {}

  static Policy uniform(std::size_t state_count, std::size_t action_count);

  std::size_t state_count() const { return state_count_; }
  std::size_t action_count() const { return action_count_; }
  double& operator()(StateId s, ActionId a) { return probs_[s * action_count_ + a]; }
  double operator()(StateId s, ActionId a) const { return probs_[s * action_count_ + a]; }
  std::span<const double> row(StateId s) const {
    return {probs_.data() + s * action_count_, action_count_};
  }

  void validate() const;

 private:
  std::size_t state_count_;
  std::size_t action_count_;
  std::vector<double> probs_;
};

enum class TieRule { lowest_index, uniform_random };

TieRule parse_tie_rule(const std::string& name);
std::string to_string(TieRule rule);

/// Indices attaining the maximum of `values` (exact comparison).
std::vector<ActionId> argmax_set(std::span<const double> values);
ActionId argmax_lowest(std::span<const double> values);

/// Optimal action values by synchronous (Jacobi) value iteration.
QFunction value_iteration(const TabularMDP& mdp, double tol = kDefaultTolerance);

/// Action values of `policy` by synchronous iterative policy evaluation.
QFunction policy_evaluation(const TabularMDP& mdp, const Policy& policy,
                            double tol = kDefaultTolerance);

/// Greedy policy over `q`. With uniform_random the mass is split evenly
/// across tied maximizers; with lowest_index it goes to the first one.
Policy greedy_policy(const QFunction& q, TieRule tie_rule);

/// One optimality backup E[r + gamma * max_a' q(x', a')] of (s, a).
double optimality_backup(const TabularMDP& mdp, const QFunction& q, StateId s, ActionId a);

/// Largest |T q - q| over all entries for the optimality operator T.
double bellman_residual(const TabularMDP& mdp, const QFunction& q);

namespace reference {

// Single-threaded versions of the sweeps above. Same arithmetic in the same
// order per entry, so results are bit-identical to the OpenMP kernels.
QFunction value_iteration(const TabularMDP& mdp, double tol = kDefaultTolerance);
QFunction policy_evaluation(const TabularMDP& mdp, const Policy& policy,
                            double tol = kDefaultTolerance);

}  // namespace reference

}  // namespace madrl::mdp
