// Serial reference vs OpenMP for the three parallel kernels.
#include <benchmark/benchmark.h>

#include "madrl/advisors.hpp"
#include "madrl/attractor.hpp"
#include "madrl/targets.hpp"

using namespace madrl;

namespace {

const mdp::TabularMDP& ghost_mdp() {
  static const auto m = advisors::ghost_local_mdp(env::builtin_layout("pacboy11"), 0.9);
  return m;
}

const mdp::Policy& ghost_policy() {
  static const auto p = mdp::greedy_policy(mdp::value_iteration(ghost_mdp()), mdp::TieRule::lowest_index);
  return p;
}

std::vector<std::vector<env::CellId>> random_configs(const env::MazeLayout& layout, int n) {
  Rng rng = make_rng({99});
  std::vector<std::vector<env::CellId>> out;
  for (int i = 0; i < n; ++i) {
    std::vector<env::CellId> fruits;
    for (env::CellId c : layout.fruit_cells()) {
      if (bernoulli(rng, 0.5)) fruits.push_back(c);
    }
    if (fruits.empty()) fruits.push_back(layout.fruit_cells().front());
    out.push_back(std::move(fruits));
  }
  return out;
}

void BM_value_iteration(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(mdp::value_iteration(ghost_mdp()));
}
void BM_value_iteration_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(mdp::reference::value_iteration(ghost_mdp()));
}
void BM_policy_evaluation(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(mdp::policy_evaluation(ghost_mdp(), ghost_policy()));
}
void BM_policy_evaluation_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(mdp::reference::policy_evaluation(ghost_mdp(), ghost_policy()));
}

void BM_scan_batch(benchmark::State& st) {
  const auto layout = env::builtin_layout("pacboy11");
  const attractor::MazeScanner scanner(layout, 0.9);
  const auto configs = random_configs(layout, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(attractor::scan_batch(scanner, configs));
}
void BM_scan_batch_serial(benchmark::State& st) {
  const auto layout = env::builtin_layout("pacboy11");
  const attractor::MazeScanner scanner(layout, 0.9);
  const auto configs = random_configs(layout, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(attractor::reference::scan_batch(scanner, configs));
}

void BM_generate_dataset(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(targets::generate_dataset(1, st.range(0), 0.5));
}
void BM_generate_dataset_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(targets::reference::generate_dataset(1, st.range(0), 0.5));
}

}  // namespace

BENCHMARK(BM_value_iteration)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_value_iteration_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_policy_evaluation)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_policy_evaluation_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_batch)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_batch_serial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_generate_dataset)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_generate_dataset_serial)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
