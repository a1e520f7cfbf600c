#pragma once

// Pac-Boy training and evaluation loop, metrics CSV and trajectory replay.

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "madrl/agent.hpp"
#include "madrl/config.hpp"

namespace madrl::harness {

struct EvalStats {
  double mean_score = 0.0;
  double std_score = 0.0;  // population standard deviation over games
  double mean_length = 0.0;
  double mean_fruits = 0.0;
  double mean_collisions = 0.0;
};

/// Greedy play (epsilon = 0) on `games` fresh games with true rewards.
/// Game g draws everything from a generator seeded with (seed, stream, g).
EvalStats evaluate(const Learner& learner, const env::MazeLayout& layout, std::size_t games,
                   mdp::TieRule tie_rule, std::uint64_t seed, std::uint64_t stream = 0);

struct MetricsRecord {
  int epoch = 0;  // 0 is the untrained agent
  EvalStats stats;
  double seconds = 0.0;  // wall-clock of the epoch; 0 unless timing is on
};

/// Called after every training transition, before the learner update.
using StepObserver = std::function<void(const env::PacBoyState&, env::Action, const env::StepOutcome&)>;

struct ExperimentResult {
  std::vector<MetricsRecord> records;
  std::unique_ptr<Learner> learner;
};

/**
 * epochs x transitions_per_epoch epsilon-greedy training steps with a global
 * transition counter (episodes run across epoch boundaries), evaluation after
 * every epoch. Writes the metrics CSV and checkpoint when configured.
 * Requires config.seed.
 *
 * Behaviour and environment draw from one generator, the learner (reward
 * noise, empathic tie-breaks) from another, so noise never shifts the
 * environment's random stream.
 */
ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* progress = nullptr,
                                const StepObserver& observer = {});

/// First line `# madrl config_hash=<hex> <canonical settings>`, then
/// `epoch,mean_score,std_score,mean_length,mean_fruits,mean_collisions,seconds`.
void write_metrics_csv(std::ostream& out, const ExperimentConfig& config,
                       std::span<const MetricsRecord> records);

/// Snapshot with maze, method and gamma recorded as metadata.
advisors::Snapshot make_checkpoint(const Learner& learner, const ExperimentConfig& config);

struct LoadedCheckpoint {
  env::MazeLayout layout;
  std::unique_ptr<Learner> learner;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

/// Plays one greedy game and writes a frame per step; returns the score.
double replay(const Learner& learner, const env::MazeLayout& layout, std::uint64_t seed,
              mdp::TieRule tie_rule, std::ostream& out);

}  // namespace madrl::harness
