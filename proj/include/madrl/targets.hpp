#pragma once

// Ground-truth value targets for the 5x5 fruit grid.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "madrl/fruit_grid.hpp"

namespace madrl::targets {

using env::FruitGridState;
using env::kGridCells;

inline constexpr std::size_t kEncodingBits = 2 * kGridCells;
inline constexpr std::size_t kMaxBruteForceFruits = 10;

enum class TargetKind { tsp, rl, ego_sum, ego_vec };

TargetKind parse_target_kind(const std::string& name);
std::string to_string(TargetKind kind);

/// 25 fruit bits followed by a 25-way one-hot agent position.
using Encoding = std::array<std::uint8_t, kEncodingBits>;

Encoding encode(const FruitGridState& state);
FruitGridState decode(const Encoding& bits);

/// Negated length of the shortest L1 tour visiting every fruit from the agent.
double tsp_target(const FruitGridState& state);

/// Best discounted fruit count over visiting orders:
/// max_sigma sum_i gamma^(distance travelled until fruit i).
double rl_target(const FruitGridState& state, double gamma);

struct EgoTarget {
  double sum = 0.0;
  std::array<double, kGridCells> vec{};  // gamma^d(agent, i) where fruit i exists
};

EgoTarget ego_target(const FruitGridState& state, double gamma);

struct TargetSample {
  Encoding encoding{};
  double y_tsp = 0.0;
  double y_rl = 0.0;
  double y_ego_sum = 0.0;
  std::array<double, kGridCells> y_ego_vec{};
};

TargetSample make_sample(const FruitGridState& state, double gamma);

/// Sample i is drawn from fruit_grid_reset seeded with (seed, i).
std::vector<TargetSample> generate_dataset(std::uint64_t seed, std::size_t count, double gamma);

namespace reference {
std::vector<TargetSample> generate_dataset(std::uint64_t seed, std::size_t count, double gamma);
}  // namespace reference

/// Header: sample, f0..f24, a0..a24, y_tsp, y_rl, y_ego_sum, v0..v24.
void write_dataset_csv(std::ostream& out, std::span<const TargetSample> samples);
std::vector<TargetSample> read_dataset_csv(std::istream& in);

}  // namespace madrl::targets
