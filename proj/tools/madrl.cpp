// Command-line front end: run, scan-attractors, gen-dataset, train-values, replay.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "madrl/attractor.hpp"
#include "madrl/experiment.hpp"
#include "madrl/mlp.hpp"
#include "madrl/targets.hpp"

namespace {

using namespace madrl;

// 1 / (|A| - 2): the largest discount with no stable attractor on a grid.
constexpr double kRegressionGamma = 0.5;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// --- run --------------------------------------------------------------------

struct RunArgs {
  std::string config;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> overrides;
  bool quiet = false;
};

void add_run(CLI::App& app, RunArgs& args) {
  auto* run = app.add_subcommand("run", "Train and evaluate a Pac-Boy agent");
  run->add_option("--config", args.config, "Config file (key = value)")->check(CLI::ExistingFile);
  run->add_option("--seed", args.seed, "Run seed")->required();
  run->add_flag("--quiet", args.quiet, "No per-epoch progress");
  struct Flag {
    const char* flag;
    const char* key;
    const char* help;
  };
  static const Flag flags[] = {
      {"--maze", "maze", "builtin:<name> or layout file"},
      {"--method", "method", "egocentric | agnostic | empathic | linear"},
      {"--gamma", "gamma", "Discount factor"},
      {"--alpha", "alpha", "TD step size"},
      {"--epsilon", "epsilon", "Training exploration rate"},
      {"--eval-tie-rule", "eval_tie_rule", "lowest_index | uniform_random"},
      {"--noise", "noise_sigma", "Std of Gaussian training reward noise"},
      {"--epochs", "epochs", "Number of epochs"},
      {"--transitions", "transitions_per_epoch", "Transitions per epoch"},
      {"--eval-games", "eval_games", "Evaluation games per epoch"},
      {"--out", "output", "Metrics CSV path"},
      {"--checkpoint", "checkpoint", "Q-table snapshot path"},
      {"--timing", "timing", "true | false"},
  };
  for (const auto& f : flags) {
    const std::string key = f.key;
    run->add_option_function<std::string>(
        f.flag, [&args, key](const std::string& v) { args.overrides.emplace_back(key, v); }, f.help);
  }
}

int do_run(const RunArgs& args) {
  harness::ExperimentConfig config =
      args.config.empty() ? harness::ExperimentConfig{} : harness::load_config(args.config);
  for (const auto& [k, v] : args.overrides) harness::apply_setting(config, k, v);
  config.seed = args.seed;
  config.validate();
  const auto result = harness::run_experiment(config, args.quiet ? nullptr : &std::cerr);
  const auto& last = result.records.back();
  std::cout << "method " << harness::to_string(config.method) << " gamma " << fmt(config.gamma)
            << " epochs " << config.epochs << " final_mean_score " << fmt(last.stats.mean_score)
            << " config_hash " << harness::config_hash(config) << '\n';
  if (!config.output.empty()) std::cout << "metrics " << config.output << '\n';
  return 0;
}

// --- scan-attractors ----------------------------------------------------------

struct ScanArgs {
  std::string maze;
  double gamma = 0.0;
  std::string fruits = "all";
  std::uint64_t seed = 0;
  std::string out;
  bool only_flagged = false;
};

void add_scan(CLI::App& app, ScanArgs& args) {
  auto* scan = app.add_subcommand("scan-attractors", "Report attractor states of a fruit layout");
  scan->add_option("--maze", args.maze, "builtin:<name> or layout file")->required();
  scan->add_option("--gamma", args.gamma, "Discount factor")->required();
  scan->add_option("--fruits", args.fruits,
                   "all | random (each fruit cell with probability 0.5) | comma-separated cell ids");
  scan->add_option("--seed", args.seed, "Seed for --fruits random");
  scan->add_option("--out", args.out, "Report CSV (default: stdout)");
  scan->add_flag("--only-flagged", args.only_flagged, "Keep only rows flagged by either check");
}

std::vector<env::CellId> pick_fruits(const env::MazeLayout& layout, const ScanArgs& args) {
  if (args.fruits == "all") return layout.fruit_cells();
  std::vector<env::CellId> out;
  if (args.fruits == "random") {
    Rng rng = make_rng({args.seed});
    for (env::CellId c : layout.fruit_cells()) {
      if (bernoulli(rng, env::kFruitProbability)) out.push_back(c);
    }
    if (out.empty()) out.push_back(layout.fruit_cells().front());
    return out;
  }
  std::stringstream ss(args.fruits);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto c = static_cast<env::CellId>(std::stoul(item));
    if (c >= layout.cell_count()) throw std::invalid_argument("fruit cell " + item + " out of range");
    out.push_back(c);
  }
  return out;
}

int do_scan(const ScanArgs& args) {
  const auto layout = env::resolve_layout(args.maze);
  const auto fruits = pick_fruits(layout, args);
  auto rows = attractor::scan_attractors(layout, fruits, args.gamma);
  std::size_t attractors = 0, noop = 0;
  for (const auto& r : rows) {
    attractors += r.is_attractor;
    noop += r.noop_preferred;
  }
  if (args.only_flagged) {
    std::erase_if(rows, [](const auto& r) { return !r.is_attractor && !r.noop_preferred; });
  }
  if (args.out.empty()) {
    attractor::write_report_csv(std::cout, rows);
  } else {
    auto out = open_out(args.out);
    attractor::write_report_csv(out, rows);
  }
  const auto bounds = attractor::gamma_bounds(env::kActionCount);
  std::cerr << "states " << layout.cell_count() << " fruits " << fruits.size() << " attractors "
            << attractors << " noop_preferred " << noop << " (no-attractor bound gamma <= "
            << fmt(bounds.strict) << ")\n";
  return 0;
}

// --- gen-dataset ------------------------------------------------------------

struct DatasetArgs {
  std::uint64_t seed = 0;
  std::string out;
  std::size_t count = 1000;
  double gamma = kRegressionGamma;
};

void add_dataset(CLI::App& app, DatasetArgs& args) {
  auto* gen = app.add_subcommand("gen-dataset", "Write the 5x5 value-regression dataset");
  gen->add_option("--seed", args.seed, "Dataset seed")->required();
  gen->add_option("--out", args.out, "CSV path")->required();
  gen->add_option("--count", args.count, "Number of samples")->check(CLI::PositiveNumber);
  gen->add_option("--gamma", args.gamma, "Discount for the rl and egocentric targets");
}

int do_dataset(const DatasetArgs& args) {
  const auto data = targets::generate_dataset(args.seed, args.count, args.gamma);
  auto out = open_out(args.out);
  targets::write_dataset_csv(out, data);
  std::cout << "samples " << data.size() << " -> " << args.out << '\n';
  return 0;
}

// --- train-values -----------------------------------------------------------

struct TrainArgs {
  std::uint64_t seed = 0;
  std::string dataset;
  std::string target = "all";
  int epochs = 500;
  double gamma = kRegressionGamma;
  std::size_t count = 1000;
  std::size_t episodes = 200;
  std::string out_dir;
};

void add_train(CLI::App& app, TrainArgs& args) {
  auto* train = app.add_subcommand("train-values", "Fit the value regressor to each target");
  train->add_option("--seed", args.seed, "Training seed (also the dataset seed)")->required();
  train->add_option("--dataset", args.dataset, "Dataset CSV (default: generate from --seed)")
      ->check(CLI::ExistingFile);
  train->add_option("--target", args.target, "tsp | rl | ego_sum | ego_vec | all");
  train->add_option("--epochs", args.epochs, "Training epochs");
  train->add_option("--gamma", args.gamma, "Discount used when generating the dataset");
  train->add_option("--count", args.count, "Samples when generating");
  train->add_option("--episodes", args.episodes, "Greedy rollout episodes");
  train->add_option("--out-dir", args.out_dir, "Directory for curves, summary and checkpoints");
}

int do_train(const TrainArgs& args) {
  std::vector<targets::TargetSample> data;
  if (args.dataset.empty()) {
    data = targets::generate_dataset(args.seed, args.count, args.gamma);
  } else {
    std::ifstream in(args.dataset);
    if (!in) throw std::runtime_error("cannot read '" + args.dataset + "'");
    data = targets::read_dataset_csv(in);
  }
  std::vector<targets::TargetKind> kinds;
  if (args.target == "all") {
    kinds = {targets::TargetKind::tsp, targets::TargetKind::rl, targets::TargetKind::ego_sum,
             targets::TargetKind::ego_vec};
  } else {
    kinds = {targets::parse_target_kind(args.target)};
  }
  if (!args.out_dir.empty()) std::filesystem::create_directories(args.out_dir);
  const auto x = approx::input_matrix(data);
  std::ostringstream summary;
  summary << "target,final_mse,normalized_mse,rollout_steps\n";
  for (auto kind : kinds) {
    approx::TrainOptions opts;
    opts.epochs = args.epochs;
    opts.seed = args.seed;
    const auto result = approx::mlp_train(data, kind, opts);
    const double nmse = approx::normalized_mse(result.model, x, approx::target_matrix(data, kind));
    const double steps = approx::greedy_rollout_eval(result.model, kind, args.episodes, args.seed);
    const std::string name = targets::to_string(kind);
    summary << name << ',' << fmt(result.curve.empty() ? 0.0 : result.curve.back()) << ','
            << fmt(nmse) << ',' << fmt(steps) << '\n';
    if (!args.out_dir.empty()) {
      auto curve = open_out(args.out_dir + "/curve_" + name + ".csv");
      approx::write_curve_csv(curve, result.curve);
      auto ckpt = open_out(args.out_dir + "/mlp_" + name + ".txt");
      result.model.save(ckpt);
    }
  }
  std::cout << summary.str();
  if (!args.out_dir.empty()) {
    auto out = open_out(args.out_dir + "/summary.csv");
    out << summary.str();
  }
  return 0;
}

// --- replay -----------------------------------------------------------------

struct ReplayArgs {
  std::string checkpoint;
  std::uint64_t seed = 0;
  std::string tie_rule = "lowest_index";
  std::string out;
};

void add_replay(CLI::App& app, ReplayArgs& args) {
  auto* replay = app.add_subcommand("replay", "Dump an ASCII trajectory of a trained checkpoint");
  replay->add_option("--checkpoint", args.checkpoint, "Snapshot written by run")
      ->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--seed", args.seed, "Game seed")->required();
  replay->add_option("--tie-rule", args.tie_rule, "lowest_index | uniform_random");
  replay->add_option("--out", args.out, "Output file (default: stdout)");
}

int do_replay(const ReplayArgs& args) {
  const auto loaded = harness::load_checkpoint(args.checkpoint);
  const auto tie = mdp::parse_tie_rule(args.tie_rule);
  if (args.out.empty()) {
    harness::replay(*loaded.learner, loaded.layout, args.seed, tie, std::cout);
  } else {
    auto out = open_out(args.out);
    harness::replay(*loaded.learner, loaded.layout, args.seed, tie, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-advisor reinforcement learning experiments"};
  app.require_subcommand(1);
  RunArgs run;
  ScanArgs scan;
  DatasetArgs dataset;
  TrainArgs train;
  ReplayArgs replay;
  add_run(app, run);
  add_scan(app, scan);
  add_dataset(app, dataset);
  add_train(app, train);
  add_replay(app, replay);
  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("run")) return do_run(run);
    if (app.got_subcommand("scan-attractors")) return do_scan(scan);
    if (app.got_subcommand("gen-dataset")) return do_dataset(dataset);
    if (app.got_subcommand("train-values")) return do_train(train);
    if (app.got_subcommand("replay")) return do_replay(replay);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
