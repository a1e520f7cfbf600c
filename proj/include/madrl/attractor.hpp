#pragma once

// Attractor detection for egocentric decompositions.
//
// Both detectors compare against the *moving* actions at x. Actions flagged
// by Decomposition::stay (a designated no-op, a wall bump) are the "stay if
// possible" option, not competitors; when one exists the attractor is stable.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "madrl/advisors.hpp"
#include "madrl/maze.hpp"

namespace madrl::attractor {

using advisors::Decomposition;
using mdp::ActionId;
using mdp::QFunction;
using mdp::StateId;

/// |lhs - rhs| at or below this is treated as equality.
inline constexpr double kDeadBand = 1e-9;

struct AttractorReport {
  StateId state = 0;
  double lhs = 0.0;  // max_a sum_j w_j Q_j(x_j, a) over moving actions
  double rhs = 0.0;  // gamma * sum_j w_j max_a Q_j(x_j, a)
  bool is_attractor = false;
  bool stay_available = false;
  std::vector<ActionId> advisor_argmax;  // lowest-index argmax per advisor
};

AttractorReport is_attractor(StateId x, const Decomposition& d, std::span<const QFunction> q_ego);

/// Augments x with a zero-reward self-loop a0 and backs up every action
/// through the local models; true iff a0 strictly beats every moving action.
bool noop_preference_check(StateId x, const Decomposition& d, std::span<const QFunction> q_ego);

/// For all x, a: Q(x, a) >= gamma * max_a' Q(x, a') (up to the dead-band).
bool is_progressive(const QFunction& q_ego, double gamma);

struct GammaBounds {
  double strict;   // 1 / (|A| - 1): no attractor at all
  double relaxed;  // 1 / (|A| - 2): no stable attractor; +inf when |A| = 2
};

GammaBounds gamma_bounds(std::size_t action_count);

struct ScanRow {
  StateId state = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool is_attractor = false;
  bool noop_preferred = false;
  bool stay_available = false;
};

std::vector<ScanRow> scan_decomposition(const Decomposition& d, std::span<const QFunction> q_ego);

/// Fruit advisors on a ghost-free maze; the global state is the agent cell.
Decomposition fruit_decomposition(const env::MazeLayout& layout,
                                  std::span<const env::CellId> fruit_cells, double gamma);

std::vector<ScanRow> scan_attractors(const env::MazeLayout& layout,
                                     std::span<const env::CellId> fruit_cells, double gamma);

/// Caches the egocentric table of every possible fruit cell so that many
/// fruit configurations on one layout can be scanned cheaply.
class MazeScanner {
 public:
  MazeScanner(const env::MazeLayout& layout, double gamma);

  std::vector<ScanRow> scan(std::span<const env::CellId> fruit_cells) const;
  double gamma() const { return gamma_; }
  const env::MazeLayout& layout() const { return layout_; }

 private:
  env::MazeLayout layout_;
  double gamma_;
  std::vector<mdp::TabularMDP> models_;  // indexed by cell
  std::vector<QFunction> q_ego_;         // indexed by cell
};

struct FlagCounts {
  std::size_t attractors = 0;
  std::size_t noop_preferred = 0;
  std::size_t disagreements = 0;
};

/// Scans every configuration (OpenMP over configurations).
std::vector<FlagCounts> scan_batch(const MazeScanner& scanner,
                                   const std::vector<std::vector<env::CellId>>& configs);

namespace reference {
std::vector<FlagCounts> scan_batch(const MazeScanner& scanner,
                                   const std::vector<std::vector<env::CellId>>& configs);
}  // namespace reference

/// CSV with header `state,lhs,rhs,is_attractor,noop_preferred`.
void write_report_csv(std::ostream& out, std::span<const ScanRow> rows);

}  // namespace madrl::attractor
