#pragma once

// Pac-Boy learners: the multi-advisor agent and the linear Q-learning baseline.

#include <memory>
#include <vector>

#include "madrl/advisors.hpp"
#include "madrl/config.hpp"
#include "madrl/linear_q.hpp"
#include "madrl/qtable_io.hpp"

namespace madrl::harness {

/// r + N(0, sigma^2); sigma = 0 returns r exactly without drawing.
double inject_reward_noise(double reward, double sigma, Rng& rng);

class Learner {
 public:
  virtual ~Learner() = default;

  /// Q-values of the four actions at `state` as seen by the action selector.
  virtual std::vector<double> q_values(const env::PacBoyState& state) const = 0;

  /// One off-policy update from the transition (state, action) -> outcome.
  /// Noise is added to the rewards fed to the update only.
  virtual void learn(const env::PacBoyState& state, env::Action action,
                     const env::StepOutcome& outcome, double alpha, double noise_sigma,
                     Rng& rng) = 0;

  virtual advisors::Snapshot snapshot() const = 0;
  virtual void restore(const advisors::Snapshot& snap) = 0;
};

/**
 * One tabular advisor per fruit slot (agent cell, 4 actions) and one per
 * ghost, the ghost advisors sharing a single (agent, ghost) table. Fruit
 * advisors take part only while their fruit is on the board; eating it ends
 * that advisor's local episode.
 *
 * Empathic updates bootstrap on a* = argmax Q_sigma(x'), computed once per
 * transition before any table changes, ties broken uniformly with `rng`.
 */
class MultiAdvisorAgent final : public Learner {
 public:
  MultiAdvisorAgent(const env::MazeLayout& layout, advisors::Planning planning, double gamma);

  std::vector<double> q_values(const env::PacBoyState& state) const override;
  void learn(const env::PacBoyState& state, env::Action action, const env::StepOutcome& outcome,
             double alpha, double noise_sigma, Rng& rng) override;
  advisors::Snapshot snapshot() const override;
  void restore(const advisors::Snapshot& snap) override;

  const std::vector<advisors::AdvisorSpec>& advisors() const { return advisors_; }
  advisors::QTable& fruit_table(std::size_t slot) { return *advisors_.at(slot).table; }
  advisors::QTable& ghost_table() { return *ghost_table_; }

 private:
  bool active(const advisors::AdvisorSpec& a, const env::PacBoyState& state) const;

  env::MazeLayout layout_;
  advisors::Planning planning_;
  double gamma_;
  std::vector<advisors::AdvisorSpec> advisors_;  // fruit slots, then ghosts
  std::shared_ptr<advisors::QTable> ghost_table_;
};

/// Q-learning on the global reward over concatenated advisor one-hot features.
/// Noise is one draw added to the global reward.
class LinearAgent final : public Learner {
 public:
  LinearAgent(const env::MazeLayout& layout, double gamma);

  std::vector<double> q_values(const env::PacBoyState& state) const override;
  void learn(const env::PacBoyState& state, env::Action action, const env::StepOutcome& outcome,
             double alpha, double noise_sigma, Rng& rng) override;
  advisors::Snapshot snapshot() const override;
  void restore(const advisors::Snapshot& snap) override;

  const approx::LinearQModel& model() const { return model_; }

 private:
  env::MazeLayout layout_;
  double gamma_;
  approx::LinearQModel model_;
};

std::unique_ptr<Learner> make_learner(Method method, const env::MazeLayout& layout, double gamma);

}  // namespace madrl::harness
