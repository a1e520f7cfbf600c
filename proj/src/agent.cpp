#include "madrl/agent.hpp"

#include <random>
#include <stdexcept>

#include "madrl/aggregator.hpp"

namespace madrl::harness {

using advisors::AdvisorSpec;
using advisors::FocusKind;
using advisors::QTable;

double inject_reward_noise(double reward, double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
  if (sigma == 0.0) return reward;
  return reward + std::normal_distribution<double>(0.0, sigma)(rng);
}

namespace {

double reward_of(const env::StepOutcome& out, env::AdvisorId id) {
  const auto it = out.advisor_rewards.find(id);
  return it == out.advisor_rewards.end() ? 0.0 : it->second;
}

void copy_table(const QTable& from, QTable& to, const std::string& name) {
  if (from.state_count() != to.state_count() || from.action_count() != to.action_count()) {
    throw std::invalid_argument("checkpoint table '" + name + "' has the wrong shape");
  }
  to.values() = from.values();
}

}  // namespace

// --- multi-advisor ----------------------------------------------------------

MultiAdvisorAgent::MultiAdvisorAgent(const env::MazeLayout& layout, advisors::Planning planning,
                                     double gamma)
    : layout_(layout), planning_(planning), gamma_(gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
  const std::size_t fruits = layout.fruit_cells().size();
  const std::size_t fruit_states = advisors::local_state_count(FocusKind::fruit, layout);
  for (std::size_t j = 0; j < fruits; ++j) {
    AdvisorSpec a;
    a.id = env::fruit_advisor_id(j);
    a.focus = {FocusKind::fruit, j};
    a.planning = planning;
    a.gamma = gamma;
    a.table = std::make_shared<QTable>(fruit_states, env::kActionCount);
    a.table->owners = {a.id};
    advisors_.push_back(std::move(a));
  }
  ghost_table_ = std::make_shared<QTable>(advisors::local_state_count(FocusKind::ghost, layout),
                                          env::kActionCount);
  for (std::size_t g = 0; g < layout.ghost_spawns().size(); ++g) {
    AdvisorSpec a;
    a.id = env::ghost_advisor_id(layout, g);
    a.focus = {FocusKind::ghost, g};
    a.planning = planning;
    a.gamma = gamma;
    a.table = ghost_table_;
    ghost_table_->owners.push_back(a.id);
    advisors_.push_back(std::move(a));
  }
}

bool MultiAdvisorAgent::active(const AdvisorSpec& a, const env::PacBoyState& state) const {
  return a.focus.kind != FocusKind::fruit || state.fruits[a.focus.index];
}

std::vector<double> MultiAdvisorAgent::q_values(const env::PacBoyState& state) const {
  std::vector<double> sigma(env::kActionCount, 0.0);
  for (const auto& a : advisors_) {
    if (!active(a, state)) continue;
    agg::accumulate(sigma, a.table->row(advisors::project(a, layout_, state)), a.weight);
  }
  return sigma;
}

void MultiAdvisorAgent::learn(const env::PacBoyState& state, env::Action action,
                              const env::StepOutcome& outcome, double alpha, double noise_sigma,
                              Rng& rng) {
  const auto& next = outcome.next_state;
  std::optional<mdp::ActionId> a_star;
  if (planning_ == advisors::Planning::empathic && !outcome.done) {
    a_star = agg::greedy_action(q_values(next), mdp::TieRule::uniform_random, rng);
  }
  for (const auto& a : advisors_) {
    if (!active(a, state)) continue;
    advisors::LocalTransition t;
    t.state = advisors::project(a, layout_, state);
    t.action = static_cast<mdp::ActionId>(action);
    t.reward = inject_reward_noise(reward_of(outcome, a.id), noise_sigma, rng);
    t.next_state = advisors::project(a, layout_, next);
    t.done = outcome.done || !active(a, next);
    t.aggregator_action = a_star;
    advisors::td_update(planning_, *a.table, t, alpha, gamma_);
  }
}

advisors::Snapshot MultiAdvisorAgent::snapshot() const {
  advisors::Snapshot snap;
  for (std::size_t j = 0; j < layout_.fruit_cells().size(); ++j) {
    snap.tables.push_back({"fruit" + std::to_string(j), std::make_shared<QTable>(*advisors_[j].table)});
  }
  snap.tables.push_back({"ghost", std::make_shared<QTable>(*ghost_table_)});
  return snap;
}

void MultiAdvisorAgent::restore(const advisors::Snapshot& snap) {
  for (std::size_t j = 0; j < layout_.fruit_cells().size(); ++j) {
    const auto name = "fruit" + std::to_string(j);
    copy_table(snap.find(name), *advisors_[j].table, name);
  }
  copy_table(snap.find("ghost"), *ghost_table_, "ghost");
}

// --- linear baseline --------------------------------------------------------

LinearAgent::LinearAgent(const env::MazeLayout& layout, double gamma)
    : layout_(layout), gamma_(gamma),
      model_(approx::pacboy_feature_dim(layout), env::kActionCount) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
}

std::vector<double> LinearAgent::q_values(const env::PacBoyState& state) const {
  return model_.q_all(approx::pacboy_features(layout_, state));
}

void LinearAgent::learn(const env::PacBoyState& state, env::Action action,
                        const env::StepOutcome& outcome, double alpha, double noise_sigma,
                        Rng& rng) {
  const double reward = inject_reward_noise(outcome.global_reward, noise_sigma, rng);
  model_.update(approx::pacboy_features(layout_, state), static_cast<mdp::ActionId>(action), reward,
                approx::pacboy_features(layout_, outcome.next_state), outcome.done, alpha, gamma_);
}

advisors::Snapshot LinearAgent::snapshot() const {
  auto table = std::make_shared<QTable>(model_.feature_dim(), model_.action_count());
  table->values() = model_.weights();
  advisors::Snapshot snap;
  snap.tables.push_back({"linear", table});
  return snap;
}

void LinearAgent::restore(const advisors::Snapshot& snap) {
  const QTable& t = snap.find("linear");
  if (t.state_count() != model_.feature_dim() || t.action_count() != model_.action_count()) {
    throw std::invalid_argument("checkpoint table 'linear' has the wrong shape");
  }
  model_.weights() = t.values();
}

std::unique_ptr<Learner> make_learner(Method method, const env::MazeLayout& layout, double gamma) {
  switch (method) {
    case Method::egocentric:
      return std::make_unique<MultiAdvisorAgent>(layout, advisors::Planning::egocentric, gamma);
    case Method::agnostic:
      return std::make_unique<MultiAdvisorAgent>(layout, advisors::Planning::agnostic, gamma);
    case Method::empathic:
      return std::make_unique<MultiAdvisorAgent>(layout, advisors::Planning::empathic, gamma);
    case Method::linear:
      return std::make_unique<LinearAgent>(layout, gamma);
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace madrl::harness
