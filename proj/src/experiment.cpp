#include "madrl/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "madrl/aggregator.hpp"

namespace madrl::harness {

namespace {

struct GameResult {
  double score = 0.0;
  int length = 0;
  std::size_t fruits = 0;
  std::size_t collisions = 0;
};

GameResult play_greedy(const Learner& learner, const env::MazeLayout& layout,
                       mdp::TieRule tie_rule, Rng& rng, std::ostream* frames) {
  GameResult r;
  auto state = env::pacboy_reset(layout, rng);
  if (frames) *frames << "step 0 action - reward 0 score 0\n" << env::render(layout, state);
  while (!env::is_done(state)) {
    const auto action = static_cast<env::Action>(agg::greedy_action(learner.q_values(state), tie_rule, rng));
    auto out = env::pacboy_step(layout, state, action, rng);
    r.score += out.global_reward;
    r.fruits += out.events.eaten_fruits.size();
    r.collisions += out.events.collisions.size();
    ++r.length;
    state = std::move(out.next_state);
    if (frames) {
      *frames << "step " << r.length << " action " << env::action_letter(action) << " reward "
              << out.global_reward << " score " << r.score << '\n'
              << env::render(layout, state);
    }
  }
  return r;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

EvalStats evaluate(const Learner& learner, const env::MazeLayout& layout, std::size_t games,
                   mdp::TieRule tie_rule, std::uint64_t seed, std::uint64_t stream) {
  if (games == 0) throw std::invalid_argument("evaluation needs at least one game");
  std::vector<double> scores;
  EvalStats s;
  for (std::size_t g = 0; g < games; ++g) {
    Rng rng = make_rng({seed, stream, static_cast<std::uint64_t>(g)});
    const auto r = play_greedy(learner, layout, tie_rule, rng, nullptr);
    scores.push_back(r.score);
    s.mean_length += r.length;
    s.mean_fruits += static_cast<double>(r.fruits);
    s.mean_collisions += static_cast<double>(r.collisions);
  }
  const double n = static_cast<double>(games);
  for (double x : scores) s.mean_score += x;
  s.mean_score /= n;
  double var = 0.0;
  for (double x : scores) var += (x - s.mean_score) * (x - s.mean_score);
  s.std_score = std::sqrt(var / n);
  s.mean_length /= n;
  s.mean_fruits /= n;
  s.mean_collisions /= n;
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* progress,
                                const StepObserver& observer) {
  config.validate();
  if (!config.seed) throw std::invalid_argument("run_experiment needs a seed");
  const std::uint64_t seed = *config.seed;
  const auto layout = env::resolve_layout(config.maze);
  ExperimentResult result{{}, make_learner(config.method, layout, config.gamma)};
  Learner& learner = *result.learner;

  using Clock = std::chrono::steady_clock;
  auto log = [&](const MetricsRecord& r) {
    result.records.push_back(r);
    if (progress) {
      *progress << "epoch " << r.epoch << " mean_score " << fmt(r.stats.mean_score) << " fruits "
                << fmt(r.stats.mean_fruits) << " collisions " << fmt(r.stats.mean_collisions)
                << '\n';
    }
  };
  auto eval = [&](int epoch) {
    return evaluate(learner, layout, config.eval_games, config.eval_tie_rule, seed,
                    static_cast<std::uint64_t>(epoch));
  };

  log({0, eval(0), 0.0});
  Rng rng = make_rng({seed, 1});
  Rng learn_rng = make_rng({seed, 2});
  auto state = env::pacboy_reset(layout, rng);
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = Clock::now();
    for (std::size_t t = 0; t < config.transitions_per_epoch; ++t) {
      const auto action = static_cast<env::Action>(agg::select_action(
          learner.q_values(state), config.epsilon, mdp::TieRule::uniform_random, rng));
      auto out = env::pacboy_step(layout, state, action, rng);
      if (observer) observer(state, action, out);
      learner.learn(state, action, out, config.alpha, config.noise_sigma, learn_rng);
      state = out.done ? env::pacboy_reset(layout, rng) : std::move(out.next_state);
    }
    const auto stats = eval(epoch);
    const double seconds =
        config.timing ? std::chrono::duration<double>(Clock::now() - start).count() : 0.0;
    log({epoch, stats, seconds});
  }

  if (!config.output.empty()) {
    std::ofstream out(config.output);
    if (!out) throw std::runtime_error("cannot write metrics to '" + config.output + "'");
    write_metrics_csv(out, config, result.records);
    if (!out) throw std::runtime_error("failed writing '" + config.output + "'");
  }
  if (!config.checkpoint.empty()) {
    advisors::save_snapshot(config.checkpoint, make_checkpoint(learner, config));
  }
  return result;
}

void write_metrics_csv(std::ostream& out, const ExperimentConfig& config,
                       std::span<const MetricsRecord> records) {
  std::string settings = canonical_text(config);
  for (auto& ch : settings) {
    if (ch == '\n') ch = ' ';
  }
  while (!settings.empty() && settings.back() == ' ') settings.pop_back();
  out << "# madrl config_hash=" << config_hash(config) << ' ' << settings << '\n';
  out << "epoch,mean_score,std_score,mean_length,mean_fruits,mean_collisions,seconds\n";
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.6f\n", r.epoch,
                  r.stats.mean_score, r.stats.std_score, r.stats.mean_length, r.stats.mean_fruits,
                  r.stats.mean_collisions, r.seconds);
    out << buf;
  }
}

advisors::Snapshot make_checkpoint(const Learner& learner, const ExperimentConfig& config) {
  auto snap = learner.snapshot();
  snap.meta["maze"] = config.maze;
  snap.meta["method"] = to_string(config.method);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", config.gamma);
  snap.meta["gamma"] = buf;
  snap.meta["config_hash"] = config_hash(config);
  return snap;
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  const auto snap = advisors::load_snapshot(path);
  auto get = [&](const std::string& key) {
    const auto it = snap.meta.find(key);
    if (it == snap.meta.end()) throw std::invalid_argument("checkpoint lacks meta key '" + key + "'");
    return it->second;
  };
  auto layout = env::resolve_layout(get("maze"));
  auto learner = make_learner(parse_method(get("method")), layout, std::stod(get("gamma")));
  learner->restore(snap);
  return {std::move(layout), std::move(learner)};
}

double replay(const Learner& learner, const env::MazeLayout& layout, std::uint64_t seed,
              mdp::TieRule tie_rule, std::ostream& out) {
  Rng rng = make_rng({seed, 0, 0});
  out << "# madrl replay seed=" << seed << " tie_rule=" << mdp::to_string(tie_rule) << '\n';
  const auto r = play_greedy(learner, layout, tie_rule, rng, &out);
  out << "# final score " << r.score << " length " << r.length << " fruits " << r.fruits
      << " collisions " << r.collisions << '\n';
  return r.score;
}

}  // namespace madrl::harness
