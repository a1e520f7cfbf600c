#include "madrl/linear_q.hpp"

#include <algorithm>
#include <stdexcept>

namespace madrl::approx {

LinearQModel::LinearQModel(std::size_t feature_dim, std::size_t action_count)
    : feature_dim_(feature_dim), action_count_(action_count),
      w_(feature_dim * action_count, 0.0) {
  if (feature_dim == 0 || action_count == 0) throw std::invalid_argument("empty linear model");
}

double LinearQModel::q(std::span<const std::size_t> active, ActionId a) const {
  double sum = 0.0;
  for (std::size_t f : active) {
    if (f >= feature_dim_) throw std::out_of_range("feature index out of range");
    sum += w_[f * action_count_ + a];
  }
  return sum;
}

std::vector<double> LinearQModel::q_all(std::span<const std::size_t> active) const {
  std::vector<double> out(action_count_, 0.0);
  for (std::size_t f : active) {
    if (f >= feature_dim_) throw std::out_of_range("feature index out of range");
    for (std::size_t a = 0; a < action_count_; ++a) out[a] += w_[f * action_count_ + a];
  }
  return out;
}

void LinearQModel::update(std::span<const std::size_t> active, ActionId a, double reward,
                          std::span<const std::size_t> next_active, bool done, double alpha,
                          double gamma) {
  if (a >= action_count_) throw std::out_of_range("action out of range");
  double target = reward;
  if (!done) {
    const auto next = q_all(next_active);
    target += gamma * *std::max_element(next.begin(), next.end());
  }
  const double delta = target - q(active, a);
  for (std::size_t f : active) w_[f * action_count_ + a] += alpha * delta;
}

std::size_t pacboy_feature_dim(const env::MazeLayout& layout) {
  const std::size_t n = layout.cell_count();
  return layout.fruit_cells().size() * n + layout.ghost_spawns().size() * n * n;
}

std::vector<std::size_t> pacboy_features(const env::MazeLayout& layout,
                                         const env::PacBoyState& state) {
  const std::size_t n = layout.cell_count();
  const std::size_t fruit_block = layout.fruit_cells().size() * n;
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < state.fruits.size(); ++j) {
    if (state.fruits[j]) out.push_back(j * n + state.agent);
  }
  for (std::size_t g = 0; g < state.ghosts.size(); ++g) {
    out.push_back(fruit_block + g * n * n + state.agent * n + state.ghosts[g]);
  }
  return out;
}

}  // namespace madrl::approx
