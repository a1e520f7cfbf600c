#include "madrl/attractor.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace madrl::attractor {

namespace {

void check_tables(const Decomposition& d, std::span<const QFunction> q_ego) {
  if (q_ego.size() != d.advisor_count()) throw std::invalid_argument("one Q table per advisor");
  for (std::size_t j = 0; j < q_ego.size(); ++j) {
    if (q_ego[j].state_count() != d.advisor(j).mdp.state_count() ||
        q_ego[j].action_count() != d.action_count()) {
      throw std::invalid_argument("Q table shape does not match its local model");
    }
  }
}

// Competitors at x: the moving actions, or every action when all of them stay.
std::vector<ActionId> moving_actions(const Decomposition& d, StateId x) {
  std::vector<ActionId> out;
  for (ActionId a = 0; a < d.action_count(); ++a) {
    if (!d.stay(x, a)) out.push_back(a);
  }
  if (out.empty()) {
    out.resize(d.action_count());
    std::iota(out.begin(), out.end(), ActionId{0});
  }
  return out;
}

bool any_stay(const Decomposition& d, StateId x) {
  for (ActionId a = 0; a < d.action_count(); ++a) {
    if (d.stay(x, a)) return true;
  }
  return false;
}

double backup(std::span<const mdp::Outcome> outcomes, const QFunction& q, double gamma) {
  double v = 0.0;
  for (const auto& o : outcomes) v += o.prob * (o.reward + gamma * q.max(o.next));
  return v;
}

}  // namespace

AttractorReport is_attractor(StateId x, const Decomposition& d, std::span<const QFunction> q_ego) {
  check_tables(d, q_ego);
  if (x >= d.state_count()) throw std::out_of_range("state out of range");
  AttractorReport rep;
  rep.state = x;
  rep.stay_available = any_stay(d, x);

  std::vector<double> sigma(d.action_count(), 0.0);
  double sum_of_max = 0.0;
  for (std::size_t j = 0; j < d.advisor_count(); ++j) {
    const double w = d.advisor(j).weight;
    const StateId xj = d.local_state(j, x);
    const auto row = q_ego[j].row(xj);
    for (ActionId a = 0; a < d.action_count(); ++a) sigma[a] += w * row[a];
    sum_of_max += w * q_ego[j].max(xj);
    rep.advisor_argmax.push_back(mdp::argmax_lowest(row));
  }
  rep.lhs = -std::numeric_limits<double>::infinity();
  for (ActionId a : moving_actions(d, x)) rep.lhs = std::max(rep.lhs, sigma[a]);
  rep.rhs = d.gamma() * sum_of_max;
  rep.is_attractor = rep.rhs - rep.lhs > kDeadBand;
  return rep;
}

bool noop_preference_check(StateId x, const Decomposition& d, std::span<const QFunction> q_ego) {
  check_tables(d, q_ego);
  if (x >= d.state_count()) throw std::out_of_range("state out of range");
  const double gamma = d.gamma();
  const auto competitors = moving_actions(d, x);
  double stay_value = 0.0;
  std::vector<double> sigma(d.action_count(), 0.0);
  for (std::size_t j = 0; j < d.advisor_count(); ++j) {
    const auto& model = d.advisor(j);
    const StateId xj = d.local_state(j, x);
    const mdp::Outcome noop{xj, 1.0, 0.0};
    stay_value += model.weight * backup({&noop, 1}, q_ego[j], gamma);
    for (ActionId a : competitors) {
      sigma[a] += model.weight * backup(model.mdp.outcomes(xj, a), q_ego[j], gamma);
    }
  }
  double best = -std::numeric_limits<double>::infinity();
  for (ActionId a : competitors) best = std::max(best, sigma[a]);
  return stay_value - best > kDeadBand;
}

bool is_progressive(const QFunction& q_ego, double gamma) {
  for (StateId s = 0; s < q_ego.state_count(); ++s) {
    const double floor = gamma * q_ego.max(s);
    for (double v : q_ego.row(s)) {
      if (v < floor - kDeadBand) return false;
    }
  }
  return true;
}

GammaBounds gamma_bounds(std::size_t action_count) {
  if (action_count < 2) throw std::invalid_argument("gamma bounds need at least two actions");
  const double n = static_cast<double>(action_count);
  return {1.0 / (n - 1.0),
          action_count == 2 ? std::numeric_limits<double>::infinity() : 1.0 / (n - 2.0)};
}

std::vector<ScanRow> scan_decomposition(const Decomposition& d, std::span<const QFunction> q_ego) {
  std::vector<ScanRow> rows;
  rows.reserve(d.state_count());
  for (StateId x = 0; x < d.state_count(); ++x) {
    const auto rep = is_attractor(x, d, q_ego);
    rows.push_back({x, rep.lhs, rep.rhs, rep.is_attractor, noop_preference_check(x, d, q_ego),
                    rep.stay_available});
  }
  return rows;
}

namespace {

std::vector<std::uint8_t> maze_stay_mask(const env::MazeLayout& layout) {
  std::vector<std::uint8_t> mask(layout.cell_count() * env::kActionCount, 0);
  for (env::CellId c = 0; c < layout.cell_count(); ++c) {
    for (env::Action a : env::kActions) {
      mask[c * env::kActionCount + static_cast<std::size_t>(a)] = layout.blocked(c, a) ? 1 : 0;
    }
  }
  return mask;
}

Decomposition make_maze_decomposition(const env::MazeLayout& layout,
                                      std::vector<advisors::LocalModel> models) {
  Decomposition d(layout.cell_count(), env::kActionCount, std::move(models));
  d.set_stay_mask(maze_stay_mask(layout));
  return d;
}

std::vector<StateId> identity(std::size_t n) {
  std::vector<StateId> id(n);
  std::iota(id.begin(), id.end(), StateId{0});
  return id;
}

}  // namespace

Decomposition fruit_decomposition(const env::MazeLayout& layout,
                                  std::span<const env::CellId> fruit_cells, double gamma) {
  if (fruit_cells.empty()) throw std::invalid_argument("scan needs at least one fruit");
  std::vector<advisors::LocalModel> models;
  const auto id = identity(layout.cell_count());
  for (env::CellId f : fruit_cells) {
    if (f >= layout.cell_count()) throw std::out_of_range("fruit cell out of range");
    models.push_back({1.0, advisors::fruit_local_mdp(layout, f, gamma), id});
  }
  return make_maze_decomposition(layout, std::move(models));
}

std::vector<ScanRow> scan_attractors(const env::MazeLayout& layout,
                                     std::span<const env::CellId> fruit_cells, double gamma) {
  const auto d = fruit_decomposition(layout, fruit_cells, gamma);
  return scan_decomposition(d, advisors::egocentric_solution(d));
}

MazeScanner::MazeScanner(const env::MazeLayout& layout, double gamma)
    : layout_(layout), gamma_(gamma) {
  models_.reserve(layout.cell_count());
  q_ego_.reserve(layout.cell_count());
  for (env::CellId c = 0; c < layout.cell_count(); ++c) {
    models_.push_back(advisors::fruit_local_mdp(layout, c, gamma));
    q_ego_.push_back(mdp::value_iteration(models_.back()));
  }
}

std::vector<ScanRow> MazeScanner::scan(std::span<const env::CellId> fruit_cells) const {
  if (fruit_cells.empty()) throw std::invalid_argument("scan needs at least one fruit");
  std::vector<advisors::LocalModel> models;
  std::vector<QFunction> q;
  const auto id = identity(layout_.cell_count());
  for (env::CellId f : fruit_cells) {
    models.push_back({1.0, models_.at(f), id});
    q.push_back(q_ego_.at(f));
  }
  const auto d = make_maze_decomposition(layout_, std::move(models));
  return scan_decomposition(d, q);
}

namespace {

FlagCounts count_flags(const std::vector<ScanRow>& rows) {
  FlagCounts c;
  for (const auto& r : rows) {
    c.attractors += r.is_attractor ? 1 : 0;
    c.noop_preferred += r.noop_preferred ? 1 : 0;
    c.disagreements += r.is_attractor != r.noop_preferred ? 1 : 0;
  }
  return c;
}

}  // namespace

std::vector<FlagCounts> scan_batch(const MazeScanner& scanner,
                                   const std::vector<std::vector<env::CellId>>& configs) {
  std::vector<FlagCounts> out(configs.size());
  const auto n = static_cast<std::ptrdiff_t>(configs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = count_flags(scanner.scan(configs[i]));
  return out;
}

namespace reference {

std::vector<FlagCounts> scan_batch(const MazeScanner& scanner,
                                   const std::vector<std::vector<env::CellId>>& configs) {
  std::vector<FlagCounts> out;
  out.reserve(configs.size());
  for (const auto& cfg : configs) out.push_back(count_flags(scanner.scan(cfg)));
  return out;
}

}  // namespace reference

void write_report_csv(std::ostream& out, std::span<const ScanRow> rows) {
  out << "state,lhs,rhs,is_attractor,noop_preferred\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.state << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.lhs);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.rhs);
    out << buf << ',' << (r.is_attractor ? 1 : 0) << ',' << (r.noop_preferred ? 1 : 0) << '\n';
  }
}

}  // namespace madrl::attractor
