#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace madrl::testing {

DenseMDP to_dense(const mdp::TabularMDP& m) {
  DenseMDP d;
  d.S = m.state_count();
  d.A = m.action_count();
  d.gamma = m.discount();
  d.P.assign(d.S * d.A * d.S, 0.0);
  d.R.assign(d.S * d.A, 0.0);
  for (std::size_t s = 0; s < d.S; ++s) {
    for (std::size_t a = 0; a < d.A; ++a) {
      for (const auto& o : m.outcomes(s, a)) {
        d.p(s, a, o.next) += o.prob;
        d.R[s * d.A + a] += o.prob * o.reward;
      }
    }
  }
  return d;
}

std::vector<double> exact_policy_q(const DenseMDP& m, const std::vector<double>& pi) {
  const auto n = static_cast<Eigen::Index>(m.S);
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (std::size_t s = 0; s < m.S; ++s) {
    for (std::size_t a = 0; a < m.A; ++a) {
      const double w = pi[s * m.A + a];
      if (w == 0.0) continue;
      rhs[s] += w * m.R[s * m.A + a];
      for (std::size_t t = 0; t < m.S; ++t) lhs(s, t) -= m.gamma * w * m.p(s, a, t);
    }
  }
  const Eigen::VectorXd v = lhs.partialPivLu().solve(rhs);
  std::vector<double> q(m.S * m.A);
  for (std::size_t s = 0; s < m.S; ++s) {
    for (std::size_t a = 0; a < m.A; ++a) {
      double next = 0.0;
      for (std::size_t t = 0; t < m.S; ++t) next += m.p(s, a, t) * v[t];
      q[s * m.A + a] = m.R[s * m.A + a] + m.gamma * next;
    }
  }
  return q;
}

std::vector<double> policy_iteration_q(const DenseMDP& m) {
  std::vector<std::size_t> policy(m.S, 0);
  for (int iter = 0; iter < 10000; ++iter) {
    std::vector<double> pi(m.S * m.A, 0.0);
    for (std::size_t s = 0; s < m.S; ++s) pi[s * m.A + policy[s]] = 1.0;
    const auto q = exact_policy_q(m, pi);
    bool stable = true;
    for (std::size_t s = 0; s < m.S; ++s) {
      std::size_t best = policy[s];
      for (std::size_t a = 0; a < m.A; ++a) {
        // switch only on a clear improvement so the loop cannot cycle on ties
        if (q[s * m.A + a] > q[s * m.A + best] + 1e-12) best = a;
      }
      if (best != policy[s]) {
        policy[s] = best;
        stable = false;
      }
    }
    if (stable) return q;
  }
  throw std::runtime_error("policy iteration did not stabilise");
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

namespace {

// Random distribution over up to `branching` distinct successors.
std::vector<std::pair<std::size_t, double>> random_successors(Rng& rng, std::size_t states,
                                                              std::size_t branching) {
  const std::size_t k = 1 + uniform_index(rng, std::min(branching, states));
  std::vector<std::size_t> pool(states);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::vector<std::pair<std::size_t, double>> out;
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + uniform_index(rng, states - i);
    std::swap(pool[i], pool[j]);
    const double w = 0.1 + uniform_real(rng);
    out.emplace_back(pool[i], w);
    total += w;
  }
  for (auto& [s, w] : out) w /= total;
  return out;
}

double random_reward(Rng& rng, double density) {
  if (!bernoulli(rng, density)) return 0.0;
  return -1.0 + 3.0 * uniform_real(rng);
}

}  // namespace

mdp::TabularMDP random_mdp(Rng& rng, std::size_t states, std::size_t actions, double gamma,
                           const RandomMDPOptions& opts) {
  mdp::TabularMDP m(states, actions, gamma);
  for (std::size_t s = 0; s < states; ++s) {
    if (s > 0 && bernoulli(rng, opts.terminal_fraction)) {
      m.set_terminal(s);
      continue;
    }
    for (std::size_t a = 0; a < actions; ++a) {
      for (const auto& [t, p] : random_successors(rng, states, opts.max_branching)) {
        m.add_outcome(s, a, t, p, random_reward(rng, opts.reward_density));
      }
    }
  }
  m.validate();
  return m;
}

FullStateInstance random_full_state(Rng& rng, std::size_t states, std::size_t actions,
                                    std::size_t advisors, double gamma) {
  const auto shape = random_mdp(rng, states, actions, gamma);
  FullStateInstance inst;
  inst.global = mdp::TabularMDP(states, actions, gamma);
  for (std::size_t j = 0; j < advisors; ++j) {
    inst.advisors.emplace_back(states, actions, gamma);
    inst.weights.push_back(0.5 + 1.5 * uniform_real(rng));
  }
  for (std::size_t s = 0; s < states; ++s) {
    if (shape.is_terminal(s)) {
      inst.global.set_terminal(s);
      for (auto& m : inst.advisors) m.set_terminal(s);
      continue;
    }
    for (std::size_t a = 0; a < actions; ++a) {
      for (const auto& o : shape.outcomes(s, a)) {
        double total = 0.0;
        for (std::size_t j = 0; j < advisors; ++j) {
          const double r = random_reward(rng, 0.4);
          inst.advisors[j].add_outcome(s, a, o.next, o.prob, r);
          total += inst.weights[j] * r;
        }
        inst.global.add_outcome(s, a, o.next, o.prob, total);
      }
    }
  }
  return inst;
}

advisors::Decomposition random_product_decomposition(Rng& rng, std::size_t max_states,
                                                     double gamma) {
  const std::size_t k = 2 + uniform_index(rng, 4);  // 2..5 advisors
  const std::size_t actions = 2 + uniform_index(rng, 3);
  std::vector<std::size_t> sizes(k);
  std::size_t product = 1;
  for (auto& n : sizes) {
    n = 2 + uniform_index(rng, 3);
    product *= n;
  }
  while (product > max_states) {
    auto it = std::max_element(sizes.begin(), sizes.end());
    product = product / *it * (*it - 1);
    --*it;
  }

  std::vector<advisors::LocalModel> models;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t n = sizes[j];
    mdp::TabularMDP m(n, actions, gamma);
    const double noop_share = bernoulli(rng, 0.5) ? 1.0 : uniform_real(rng);
    for (std::size_t s = 0; s < n; ++s) {
      if (s > 0 && bernoulli(rng, 0.1)) {
        m.set_terminal(s);
        continue;
      }
      for (std::size_t a = 0; a < actions; ++a) {
        if (a == 0 && bernoulli(rng, noop_share)) {
          m.add_outcome(s, a, s, 1.0, 0.0);
          continue;
        }
        for (const auto& [t, p] : random_successors(rng, n, 2)) {
          m.add_outcome(s, a, t, p, random_reward(rng, 0.6));
        }
      }
    }
    m.validate();
    models.push_back({0.5 + uniform_real(rng), std::move(m), {}});
  }
  for (std::size_t x = 0; x < product; ++x) {
    std::size_t rest = x;
    for (std::size_t j = 0; j < k; ++j) {
      models[j].projection.push_back(rest % sizes[j]);
      rest /= sizes[j];
    }
  }
  return advisors::Decomposition(product, actions, std::move(models));
}

int held_karp_tour(const env::FruitGridState& state) {
  std::vector<env::GridCell> f;
  for (env::GridCell c = 0; c < env::kGridCells; ++c) {
    if (state.fruits.test(c)) f.push_back(c);
  }
  const std::size_t k = f.size();
  if (k == 0) return 0;
  const int inf = std::numeric_limits<int>::max() / 2;
  std::vector<std::vector<int>> dp(std::size_t{1} << k, std::vector<int>(k, inf));
  for (std::size_t i = 0; i < k; ++i) dp[std::size_t{1} << i][i] = env::grid_distance(state.agent, f[i]);
  for (std::size_t mask = 1; mask < dp.size(); ++mask) {
    for (std::size_t i = 0; i < k; ++i) {
      if (!(mask >> i & 1) || dp[mask][i] >= inf) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (mask >> j & 1) continue;
        const std::size_t next = mask | (std::size_t{1} << j);
        dp[next][j] = std::min(dp[next][j], dp[mask][i] + env::grid_distance(f[i], f[j]));
      }
    }
  }
  return *std::min_element(dp.back().begin(), dp.back().end());
}

}  // namespace madrl::testing
