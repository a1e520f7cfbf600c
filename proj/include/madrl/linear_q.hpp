#pragma once

// Linear Q-learning over sparse binary features.

#include <cstddef>
#include <span>
#include <vector>

#include "madrl/mdp.hpp"
#include "madrl/pacboy.hpp"

namespace madrl::approx {

using mdp::ActionId;

/// One weight vector per action; features are given as their set indices.
class LinearQModel {
 public:
  LinearQModel(std::size_t feature_dim, std::size_t action_count);

  std::size_t feature_dim() const { return feature_dim_; }
  std::size_t action_count() const { return action_count_; }

  double q(std::span<const std::size_t> active, ActionId a) const;
  std::vector<double> q_all(std::span<const std::size_t> active) const;

  /// delta = r + gamma * max_a' q(x', a') [not done] - q(x, a);
  /// every active weight of action a moves by alpha * delta.
  void update(std::span<const std::size_t> active, ActionId a, double reward,
              std::span<const std::size_t> next_active, bool done, double alpha, double gamma);

  double weight(std::size_t feature, ActionId a) const { return w_[feature * action_count_ + a]; }
  std::vector<double>& weights() { return w_; }
  const std::vector<double>& weights() const { return w_; }

 private:
  std::size_t feature_dim_;
  std::size_t action_count_;
  std::vector<double> w_;  // feature-major
};

/// Concatenated one-hot states of every Pac-Boy advisor: fruit slot j owns
/// block [j*N, (j+1)*N), ghost g owns a block of N^2 after all fruit blocks.
std::size_t pacboy_feature_dim(const env::MazeLayout& layout);

/// Indices of the set bits; inactive fruit advisors contribute none.
std::vector<std::size_t> pacboy_features(const env::MazeLayout& layout,
                                         const env::PacBoyState& state);

}  // namespace madrl::approx
