#include "madrl/targets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace madrl::targets {

using env::GridCell;
using env::grid_distance;

TargetKind parse_target_kind(const std::string& name) {
  if (name == "tsp") return TargetKind::tsp;
  if (name == "rl") return TargetKind::rl;
  if (name == "ego_sum") return TargetKind::ego_sum;
  if (name == "ego_vec") return TargetKind::ego_vec;
  throw std::invalid_argument("unknown target kind '" + name + "'");
}

std::string to_string(TargetKind kind) {
  switch (kind) {
    case TargetKind::tsp: return "tsp";
    case TargetKind::rl: return "rl";
    case TargetKind::ego_sum: return "ego_sum";
    case TargetKind::ego_vec: return "ego_vec";
  }
  return "?";
}

Encoding encode(const FruitGridState& state) {
  Encoding bits{};
  for (std::size_t i = 0; i < kGridCells; ++i) bits[i] = state.fruits.test(i) ? 1 : 0;
  bits[kGridCells + state.agent] = 1;
  return bits;
}

FruitGridState decode(const Encoding& bits) {
  FruitGridState s;
  std::size_t agents = 0;
  for (std::size_t i = 0; i < kGridCells; ++i) {
    if (bits[i]) s.fruits.set(i);
    if (bits[kGridCells + i]) {
      s.agent = i;
      ++agents;
    }
  }
  if (agents != 1) throw std::invalid_argument("encoding must have exactly one agent bit");
  return s;
}

namespace {

std::vector<GridCell> fruit_list(const FruitGridState& state) {
  std::vector<GridCell> out;
  for (GridCell c = 0; c < kGridCells; ++c) {
    if (state.fruits.test(c)) out.push_back(c);
  }
  if (out.size() > kMaxBruteForceFruits) {
    throw std::invalid_argument("too many fruits for brute-force enumeration");
  }
  return out;
}

// Calls visit(order) for every permutation of the fruit list.
template <class Visit>
void for_each_order(std::vector<GridCell> fruits, Visit visit) {
  std::sort(fruits.begin(), fruits.end());
  do {
    visit(fruits);
  } while (std::next_permutation(fruits.begin(), fruits.end()));
}

}  // namespace

double tsp_target(const FruitGridState& state) {
  const auto fruits = fruit_list(state);
  if (fruits.empty()) return 0.0;
  int best = std::numeric_limits<int>::max();
  for_each_order(fruits, [&](const std::vector<GridCell>& order) {
    int length = 0;
    GridCell at = state.agent;
    for (GridCell f : order) {
      length += grid_distance(at, f);
      at = f;
    }
    best = std::min(best, length);
  });
  return -static_cast<double>(best);
}

double rl_target(const FruitGridState& state, double gamma) {
  const auto fruits = fruit_list(state);
  if (fruits.empty()) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for_each_order(fruits, [&](const std::vector<GridCell>& order) {
    double value = 0.0;
    int travelled = 0;
    GridCell at = state.agent;
    for (GridCell f : order) {
      travelled += grid_distance(at, f);
      value += std::pow(gamma, travelled);
      at = f;
    }
    best = std::max(best, value);
  });
  return best;
}

EgoTarget ego_target(const FruitGridState& state, double gamma) {
  EgoTarget t;
  for (GridCell c = 0; c < kGridCells; ++c) {
    if (!state.fruits.test(c)) continue;
    t.vec[c] = std::pow(gamma, grid_distance(state.agent, c));
    t.sum += t.vec[c];
  }
  return t;
}

TargetSample make_sample(const FruitGridState& state, double gamma) {
  TargetSample s;
  s.encoding = encode(state);
  s.y_tsp = tsp_target(state);
  s.y_rl = rl_target(state, gamma);
  const auto ego = ego_target(state, gamma);
  s.y_ego_sum = ego.sum;
  s.y_ego_vec = ego.vec;
  return s;
}

namespace {

TargetSample sample_at(std::uint64_t seed, std::size_t index, double gamma) {
  Rng rng = make_rng({seed, static_cast<std::uint64_t>(index)});
  return make_sample(env::fruit_grid_reset(rng), gamma);
}

}  // namespace

std::vector<TargetSample> generate_dataset(std::uint64_t seed, std::size_t count, double gamma) {
  std::vector<TargetSample> out(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = sample_at(seed, static_cast<std::size_t>(i), gamma);
  return out;
}

namespace reference {

std::vector<TargetSample> generate_dataset(std::uint64_t seed, std::size_t count, double gamma) {
  std::vector<TargetSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_at(seed, i, gamma));
  return out;
}

}  // namespace reference

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

void write_dataset_csv(std::ostream& out, std::span<const TargetSample> samples) {
  out << "sample";
  for (std::size_t i = 0; i < kGridCells; ++i) out << ",f" << i;
  for (std::size_t i = 0; i < kGridCells; ++i) out << ",a" << i;
  out << ",y_tsp,y_rl,y_ego_sum";
  for (std::size_t i = 0; i < kGridCells; ++i) out << ",v" << i;
  out << '\n';
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const auto& s = samples[n];
    out << n;
    for (auto b : s.encoding) out << ',' << static_cast<int>(b);
    for (double y : {s.y_tsp, s.y_rl, s.y_ego_sum}) {
      out << ',';
      put(out, y);
    }
    for (double v : s.y_ego_vec) {
      out << ',';
      put(out, v);
    }
    out << '\n';
  }
}

std::vector<TargetSample> read_dataset_csv(std::istream& in) {
  constexpr std::size_t kColumns = 1 + kEncodingBits + 3 + kGridCells;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("dataset: empty file");
  std::vector<TargetSample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    if (cells.size() != kColumns) {
      throw std::invalid_argument("dataset: expected " + std::to_string(kColumns) + " columns");
    }
    TargetSample s;
    std::size_t k = 1;
    for (auto& b : s.encoding) {
      const int v = std::stoi(cells[k++]);
      if (v != 0 && v != 1) throw std::invalid_argument("dataset: encoding bits must be 0 or 1");
      b = static_cast<std::uint8_t>(v);
    }
    s.y_tsp = std::stod(cells[k++]);
    s.y_rl = std::stod(cells[k++]);
    s.y_ego_sum = std::stod(cells[k++]);
    for (auto& v : s.y_ego_vec) v = std::stod(cells[k++]);
    out.push_back(s);
  }
  return out;
}

}  // namespace madrl::targets
