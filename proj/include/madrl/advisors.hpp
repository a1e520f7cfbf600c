#pragma once

// Local learners: projections, tabular Q-tables, the egocentric / agnostic /
// empathic TD rules, and exact local DP for analysis.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "madrl/mdp.hpp"
#include "madrl/pacboy.hpp"

namespace madrl::advisors {

using mdp::ActionId;
using mdp::StateId;

enum class Planning { egocentric, agnostic, empathic };

Planning parse_planning(const std::string& name);
std::string to_string(Planning p);

enum class FocusKind { fruit, ghost, custom };

struct Focus {
  FocusKind kind = FocusKind::custom;
  std::size_t index = 0;  // fruit slot or ghost index
};

/// Tabular Q-function of one or more advisors (ghost advisors share one).
class QTable {
 public:
  QTable(std::size_t state_count, std::size_t action_count)
      : state_count_(state_count), action_count_(action_count),
        values_(state_count * action_count, 0.0) {}

  std::size_t state_count() const { return state_count_; }
  std::size_t action_count() const { return action_count_; }
  double& operator()(StateId s, ActionId a) { return values_[s * action_count_ + a]; }
  double operator()(StateId s, ActionId a) const { return values_[s * action_count_ + a]; }
  std::span<const double> row(StateId s) const {
    return {values_.data() + s * action_count_, action_count_};
  }
  double max(StateId s) const;
  double mean(StateId s) const;
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  std::vector<std::size_t> owners;

 private:
  std::size_t state_count_;
  std::size_t action_count_;
  std::vector<double> values_;
};

struct AdvisorSpec {
  std::size_t id = 0;
  Focus focus;
  double weight = 1.0;
  Planning planning = Planning::egocentric;
  double gamma = 0.9;
  bool active = true;
  std::shared_ptr<QTable> table;
};

struct LocalTransition {
  StateId state = 0;
  ActionId action = 0;
  double reward = 0.0;
  StateId next_state = 0;
  bool done = false;
  std::optional<ActionId> aggregator_action;  // a* = argmax Q_sigma(x'), empathic only
};

/// q(x,a) += alpha * (r + gamma * max_a' q(x',a') [not done] - q(x,a))
void td_update_egocentric(QTable& q, const LocalTransition& t, double alpha, double gamma);
/// q(x,a) += alpha * (r + gamma / |A| * sum_a' q(x',a') [not done] - q(x,a))
void td_update_agnostic(QTable& q, const LocalTransition& t, double alpha, double gamma);
/// q(x,a) += alpha * (r + gamma * q(x', a*) [not done] - q(x,a))
void td_update_empathic(QTable& q, const LocalTransition& t, double alpha, double gamma);
void td_update(Planning planning, QTable& q, const LocalTransition& t, double alpha, double gamma);

// --- Pac-Boy projections and local models ----------------------------------

/// Fruit advisors see the agent cell; ghost advisors see (agent, ghost).
StateId project(const AdvisorSpec& advisor, const env::MazeLayout& layout,
                const env::PacBoyState& state);
std::size_t local_state_count(FocusKind kind, const env::MazeLayout& layout);

/// Agent-cell MDP that pays 1 and terminates on entering `fruit_cell`.
mdp::TabularMDP fruit_local_mdp(const env::MazeLayout& layout, env::CellId fruit_cell, double gamma);
/// (agent, ghost) MDP with a uniformly moving ghost and -10 on co-location.
mdp::TabularMDP ghost_local_mdp(const env::MazeLayout& layout, double gamma);

/// Exact Q_j^ego of an advisor by value iteration; zero for inactive advisors.
mdp::QFunction local_egocentric_q(const AdvisorSpec& advisor, const mdp::TabularMDP& local_mdp,
                                  double tol = mdp::kDefaultTolerance);

// --- Decomposed MDPs for exact analysis -------------------------------------

struct LocalModel {
  double weight = 1.0;
  mdp::TabularMDP mdp;
  std::vector<StateId> projection;  // global state -> local state
};

/**
 * A global state space observed by several advisors through projections.
 *
 * `stay(x, a)` marks actions that keep the system in x deterministically with
 * no reward for any advisor; by default it is derived from the local models.
 */
class Decomposition {
 public:
  Decomposition(std::size_t state_count, std::size_t action_count, std::vector<LocalModel> advisors);

  /// Every advisor sees the full state through the identity projection.
  static Decomposition full_state(std::vector<mdp::TabularMDP> advisor_mdps,
                                  std::vector<double> weights = {});

  std::size_t state_count() const { return state_count_; }
  std::size_t action_count() const { return action_count_; }
  std::size_t advisor_count() const { return advisors_.size(); }
  double gamma() const { return gamma_; }
  const LocalModel& advisor(std::size_t j) const { return advisors_[j]; }
  const std::vector<LocalModel>& advisors() const { return advisors_; }
  StateId local_state(std::size_t j, StateId x) const { return advisors_[j].projection[x]; }

  bool stay(StateId x, ActionId a) const { return stay_[x * action_count_ + a] != 0; }
  void set_stay_mask(std::vector<std::uint8_t> mask);
  bool is_full_state() const;

 private:
  std::size_t state_count_;
  std::size_t action_count_;
  double gamma_;
  std::vector<LocalModel> advisors_;
  std::vector<std::uint8_t> stay_;
};

/// Converged egocentric tables: value iteration on every local model.
std::vector<mdp::QFunction> egocentric_solution(const Decomposition& d,
                                                double tol = mdp::kDefaultTolerance);
/// Converged agnostic tables: uniform-policy evaluation on every local model.
std::vector<mdp::QFunction> agnostic_solution(const Decomposition& d,
                                              double tol = mdp::kDefaultTolerance);
/// Empathic fixed point with the exact aggregator action broadcast to every
/// advisor. Requires a full-state decomposition.
std::vector<mdp::QFunction> empathic_solution(const Decomposition& d,
                                              double tol = mdp::kDefaultTolerance);

/// Q_sigma(x, a) = sum_j w_j Q_j(phi_j(x), a) over the global state space.
mdp::QFunction aggregate_q(const Decomposition& d, std::span<const mdp::QFunction> local_q);

}  // namespace madrl::advisors
