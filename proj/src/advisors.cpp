#include "madrl/advisors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace madrl::advisors {

Planning parse_planning(const std::string& name) {
  if (name == "egocentric") return Planning::egocentric;
  if (name == "agnostic") return Planning::agnostic;
  if (name == "empathic") return Planning::empathic;
  throw std::invalid_argument("unknown planning method '" + name + "'");
}

std::string to_string(Planning p) {
  switch (p) {
    case Planning::egocentric: return "egocentric";
    case Planning::agnostic: return "agnostic";
    case Planning::empathic: return "empathic";
  }
  return "?";
}

double QTable::max(StateId s) const {
  const auto r = row(s);
  return *std::max_element(r.begin(), r.end());
}

double QTable::mean(StateId s) const {
  const auto r = row(s);
  return std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
}

void apply(QTable& q, const LocalTransition& t, double alpha, double bootstrap) {
  double& entry = q(t.state, t.action);
  entry += alpha * (t.reward + bootstrap - entry);
}

}  // namespace

void td_update_egocentric(QTable& q, const LocalTransition& t, double alpha, double gamma) {
  check_alpha(alpha);
  apply(q, t, alpha, t.done ? 0.0 : gamma * q.max(t.next_state));
}

void td_update_agnostic(QTable& q, const LocalTransition& t, double alpha, double gamma) {
  check_alpha(alpha);
  apply(q, t, alpha, t.done ? 0.0 : gamma * q.mean(t.next_state));
}

void td_update_empathic(QTable& q, const LocalTransition& t, double alpha, double gamma) {
  check_alpha(alpha);
  if (t.done) {
    apply(q, t, alpha, 0.0);
    return;
  }
  if (!t.aggregator_action) {
    throw std::invalid_argument("empathic update needs the aggregator's greedy action");
  }
  apply(q, t, alpha, gamma * q(t.next_state, *t.aggregator_action));
}

void td_update(Planning planning, QTable& q, const LocalTransition& t, double alpha, double gamma) {
  switch (planning) {
    case Planning::egocentric: td_update_egocentric(q, t, alpha, gamma); return;
    case Planning::agnostic: td_update_agnostic(q, t, alpha, gamma); return;
    case Planning::empathic: td_update_empathic(q, t, alpha, gamma); return;
  }
}

StateId project(const AdvisorSpec& advisor, const env::MazeLayout& layout,
                const env::PacBoyState& state) {
  switch (advisor.focus.kind) {
    case FocusKind::fruit:
      return state.agent;
    case FocusKind::ghost:
      return state.agent * layout.cell_count() + state.ghosts.at(advisor.focus.index);
    case FocusKind::custom:
      break;
  }
  throw std::invalid_argument("custom advisors have no Pac-Boy projection");
}

std::size_t local_state_count(FocusKind kind, const env::MazeLayout& layout) {
  switch (kind) {
    case FocusKind::fruit: return layout.cell_count();
    case FocusKind::ghost: return layout.cell_count() * layout.cell_count();
    case FocusKind::custom: break;
  }
  throw std::invalid_argument("custom advisors have no Pac-Boy state space");
}

mdp::TabularMDP fruit_local_mdp(const env::MazeLayout& layout, env::CellId fruit_cell, double gamma) {
  mdp::TabularMDP m(layout.cell_count(), env::kActionCount, gamma);
  for (env::CellId c = 0; c < layout.cell_count(); ++c) {
    if (c == fruit_cell) {
      m.set_terminal(c);
      continue;
    }
    for (env::Action a : env::kActions) {
      const env::CellId next = layout.move(c, a);
      m.add_outcome(c, static_cast<ActionId>(a), next, 1.0,
                    next == fruit_cell ? env::kFruitReward : 0.0);
    }
  }
  return m;
}

mdp::TabularMDP ghost_local_mdp(const env::MazeLayout& layout, double gamma) {
  const std::size_t n = layout.cell_count();
  mdp::TabularMDP m(n * n, env::kActionCount, gamma);
  for (env::CellId agent = 0; agent < n; ++agent) {
    for (env::CellId ghost = 0; ghost < n; ++ghost) {
      const StateId s = agent * n + ghost;
      for (env::Action a : env::kActions) {
        const env::CellId agent_next = layout.move(agent, a);
        for (env::Action b : env::kActions) {
          const env::CellId ghost_next = layout.move(ghost, b);
          m.add_outcome(s, static_cast<ActionId>(a), agent_next * n + ghost_next,
                        1.0 / env::kActionCount,
                        agent_next == ghost_next ? env::kGhostPenalty : 0.0);
        }
      }
    }
  }
  return m;
}

mdp::QFunction local_egocentric_q(const AdvisorSpec& advisor, const mdp::TabularMDP& local_mdp,
                                  double tol) {
  if (!advisor.active) return mdp::QFunction(local_mdp.state_count(), local_mdp.action_count());
  return mdp::value_iteration(local_mdp, tol);
}

Decomposition::Decomposition(std::size_t state_count, std::size_t action_count,
                             std::vector<LocalModel> advisors)
    : state_count_(state_count), action_count_(action_count), gamma_(0.0),
      advisors_(std::move(advisors)), stay_(state_count * action_count, 1) {
  if (advisors_.empty()) throw std::invalid_argument("decomposition needs at least one advisor");
  gamma_ = advisors_.front().mdp.discount();
  for (const auto& adv : advisors_) {
    if (adv.mdp.discount() != gamma_) {
      throw std::invalid_argument("all advisors must share the same discount");
    }
    if (adv.mdp.action_count() != action_count_) {
      throw std::invalid_argument("advisor action count does not match the decomposition");
    }
    if (adv.projection.size() != state_count_) {
      throw std::invalid_argument("projection must map every global state");
    }
    for (StateId local : adv.projection) {
      if (local >= adv.mdp.state_count()) throw std::invalid_argument("projection out of range");
    }
  }
  for (StateId x = 0; x < state_count_; ++x) {
    for (ActionId a = 0; a < action_count_; ++a) {
      const bool all_stay = std::all_of(advisors_.begin(), advisors_.end(), [&](const LocalModel& m) {
        return m.mdp.is_stay(m.projection[x], a);
      });
      stay_[x * action_count_ + a] = all_stay ? 1 : 0;
    }
  }
}

Decomposition Decomposition::full_state(std::vector<mdp::TabularMDP> advisor_mdps,
                                        std::vector<double> weights) {
  if (advisor_mdps.empty()) throw std::invalid_argument("decomposition needs at least one advisor");
  if (weights.empty()) weights.assign(advisor_mdps.size(), 1.0);
  if (weights.size() != advisor_mdps.size()) throw std::invalid_argument("one weight per advisor");
  const std::size_t S = advisor_mdps.front().state_count();
  const std::size_t A = advisor_mdps.front().action_count();
  std::vector<StateId> identity(S);
  std::iota(identity.begin(), identity.end(), StateId{0});
  std::vector<LocalModel> models;
  for (std::size_t j = 0; j < advisor_mdps.size(); ++j) {
    if (advisor_mdps[j].state_count() != S) {
      throw std::invalid_argument("full-state advisors must share the state space");
    }
    models.push_back({weights[j], std::move(advisor_mdps[j]), identity});
  }
  return Decomposition(S, A, std::move(models));
}

void Decomposition::set_stay_mask(std::vector<std::uint8_t> mask) {
  if (mask.size() != stay_.size()) throw std::invalid_argument("stay mask has the wrong size");
  stay_ = std::move(mask);
}

bool Decomposition::is_full_state() const {
  for (const auto& adv : advisors_) {
    if (adv.mdp.state_count() != state_count_) return false;
    for (StateId x = 0; x < state_count_; ++x) {
      if (adv.projection[x] != x) return false;
    }
  }
  return true;
}

std::vector<mdp::QFunction> egocentric_solution(const Decomposition& d, double tol) {
  std::vector<mdp::QFunction> out;
  out.reserve(d.advisor_count());
  for (const auto& adv : d.advisors()) out.push_back(mdp::value_iteration(adv.mdp, tol));
  return out;
}

std::vector<mdp::QFunction> agnostic_solution(const Decomposition& d, double tol) {
  std::vector<mdp::QFunction> out;
  out.reserve(d.advisor_count());
  for (const auto& adv : d.advisors()) {
    const auto uniform = mdp::Policy::uniform(adv.mdp.state_count(), adv.mdp.action_count());
    out.push_back(mdp::policy_evaluation(adv.mdp, uniform, tol));
  }
  return out;
}

std::vector<mdp::QFunction> empathic_solution(const Decomposition& d, double tol) {
  if (!d.is_full_state()) {
    throw std::invalid_argument("the empathic fixed point is only defined for full-state advisors");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const std::size_t S = d.state_count();
  const std::size_t A = d.action_count();
  const double gamma = d.gamma();
  std::vector<mdp::QFunction> q(d.advisor_count(), mdp::QFunction(S, A));
  std::vector<mdp::QFunction> next = q;
  mdp::QFunction sigma = aggregate_q(d, q);
  std::vector<ActionId> greedy(S);

  for (std::size_t sweep = 0; sweep < mdp::kMaxSweeps; ++sweep) {
    for (StateId x = 0; x < S; ++x) greedy[x] = mdp::argmax_lowest(sigma.row(x));
    for (std::size_t j = 0; j < d.advisor_count(); ++j) {
      const auto& m = d.advisor(j).mdp;
      for (StateId x = 0; x < S; ++x) {
        for (ActionId a = 0; a < A; ++a) {
          double v = 0.0;
          for (const auto& o : m.outcomes(x, a)) {
            v += o.prob * (o.reward + gamma * q[j](o.next, greedy[o.next]));
          }
          next[j](x, a) = v;
        }
      }
    }
    std::swap(q, next);
    mdp::QFunction updated = aggregate_q(d, q);
    double delta = 0.0;
    for (std::size_t i = 0; i < updated.values().size(); ++i) {
      delta = std::max(delta, std::abs(updated.values()[i] - sigma.values()[i]));
    }
    sigma = std::move(updated);
    if (!std::isfinite(delta)) break;
    if (delta <= tol) return q;
  }
  throw mdp::ConvergenceError("empathic fixed point did not converge within the sweep cap");
}

mdp::QFunction aggregate_q(const Decomposition& d, std::span<const mdp::QFunction> local_q) {
  if (local_q.size() != d.advisor_count()) throw std::invalid_argument("one table per advisor");
  mdp::QFunction sigma(d.state_count(), d.action_count());
  for (StateId x = 0; x < d.state_count(); ++x) {
    for (std::size_t j = 0; j < d.advisor_count(); ++j) {
      const double w = d.advisor(j).weight;
      const StateId xj = d.local_state(j, x);
      for (ActionId a = 0; a < d.action_count(); ++a) sigma(x, a) += w * local_q[j](xj, a);
    }
  }
  return sigma;
}

}  // namespace madrl::advisors
