#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "madrl/experiment.hpp"

using namespace madrl;
using namespace madrl::harness;

namespace {

ExperimentConfig small_config(Method method) {
  ExperimentConfig c;
  c.maze = "builtin:pacboy7";
  c.method = method;
  c.epochs = 2;
  c.transitions_per_epoch = 600;
  c.eval_games = 4;
  c.seed = 3;
  return c;
}

std::string tmp_path(const std::string& name) { return std::string(MADRL_TEST_TMP) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Recorded {
  env::PacBoyState state;
  env::Action action;
  env::PacBoyState next;
  double reward;
  friend bool operator==(const Recorded&, const Recorded&) = default;
};

std::vector<Recorded> record(ExperimentConfig c) {
  std::vector<Recorded> out;
  run_experiment(c, nullptr, [&](const env::PacBoyState& s, env::Action a, const env::StepOutcome& o) {
    out.push_back({s, a, o.next_state, o.global_reward});
  });
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(
      "# preset\n"
      "maze = builtin:pacboy7\n"
      "\n"
      "method=empathic\n"
      "gamma = 0.4\n"
      "noise_sigma = 0.1\n"
      "eval_tie_rule = uniform_random\n"
      "seed = 12\n");
  const auto c = parse_config(in);
  CHECK(c.maze == "builtin:pacboy7");
  CHECK(c.method == Method::empathic);
  CHECK(c.gamma == 0.4);
  CHECK(c.noise_sigma == 0.1);
  CHECK(c.eval_tie_rule == mdp::TieRule::uniform_random);
  CHECK(c.seed == 12u);
  CHECK(c.alpha == 0.1);
  CHECK(c.epochs == 50);

  ExperimentConfig d;
  CHECK_THROWS(apply_setting(d, "colour", "blue"));
  CHECK_THROWS(apply_setting(d, "gamma", "0.9x"));
  CHECK_THROWS(apply_setting(d, "epochs", "-3"));
  CHECK_THROWS(apply_setting(d, "timing", "yes please"));
  std::istringstream broken("gamma 0.9\n");
  CHECK_THROWS(parse_config(broken));

  d.gamma = 1.0;
  CHECK_THROWS(d.validate());
  d.gamma = 0.9;
  d.eval_games = 0;
  CHECK_THROWS(d.validate());
}

TEST_CASE("config hash ignores output paths") {
  auto a = small_config(Method::egocentric);
  auto b = a;
  b.output = "somewhere.csv";
  b.checkpoint = "q.csv";
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.gamma = 0.4;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("reward noise has the requested moments") {
  Rng rng = make_rng({61});
  const Rng before = rng;
  CHECK(inject_reward_noise(-10.0, 0.0, rng) == -10.0);
  CHECK(rng == before);  // no draw at sigma 0

  const int n = 1'000'000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = inject_reward_noise(1.0, 0.1, rng) - 1.0;
    sum += e;
    sq += e * e;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  CHECK(std::abs(mean) < 5e-4);
  CHECK(sd == doctest::Approx(0.1).epsilon(0.01));
  CHECK_THROWS(inject_reward_noise(0.0, -1.0, rng));
}

TEST_CASE("fruit advisors drop out once their fruit is eaten") {
  const auto layout = env::MazeLayout::parse("P..\n");
  MultiAdvisorAgent agent(layout, advisors::Planning::egocentric, 0.9);
  agent.fruit_table(0)(0, 3) = 2.0;
  agent.fruit_table(1)(0, 3) = 5.0;
  env::PacBoyState s{0, {true, true}, layout.ghost_spawns(), 0};  // ghost table is still zero
  CHECK(agent.q_values(s)[3] == 7.0);
  s.fruits[1] = false;
  CHECK(agent.q_values(s)[3] == 2.0);
}

TEST_CASE("advisor updates use local rewards and local episode ends") {
  const auto layout = env::MazeLayout::parse("P..\n");
  MultiAdvisorAgent agent(layout, advisors::Planning::egocentric, 0.5);
  agent.fruit_table(1)(1, 3) = 4.0;
  env::PacBoyState s{0, {true, true}, layout.ghost_spawns(), 0};
  Rng rng = make_rng({1});
  const auto out = env::pacboy_step(layout, s, env::Action::East, rng);
  REQUIRE(out.events.eaten_fruits == std::vector<std::size_t>{0});
  agent.learn(s, env::Action::East, out, 0.5, 0.0, rng);
  CHECK(agent.fruit_table(0)(0, 3) == 0.5);        // reward 1, local episode over
  CHECK(agent.fruit_table(1)(0, 3) == 0.5 * 0.5 * 4.0);  // no reward, bootstraps on max at cell 1
}

TEST_CASE("evaluation needs games and replay reproduces game zero") {
  const auto layout = env::builtin_layout("pacboy7");
  const auto learner = make_learner(Method::egocentric, layout, 0.9);
  CHECK_THROWS(evaluate(*learner, layout, 0, mdp::TieRule::lowest_index, 1));
  const auto stats = evaluate(*learner, layout, 1, mdp::TieRule::lowest_index, 7, 0);
  std::ostringstream frames;
  const double score = replay(*learner, layout, 7, mdp::TieRule::lowest_index, frames);
  CHECK(score == stats.mean_score);
  CHECK(frames.str().rfind("# madrl replay seed=7", 0) == 0);
  CHECK(frames.str().find("# final score") != std::string::npos);
}

TEST_CASE("runs are deterministic and write identical files") {
  for (Method m : {Method::egocentric, Method::empathic, Method::linear}) {
    auto c = small_config(m);
    c.noise_sigma = 0.1;
    c.output = tmp_path("det_a.csv");
    run_experiment(c);
    const auto first = slurp(c.output);
    c.output = tmp_path("det_b.csv");
    run_experiment(c);
    CHECK(first == slurp(c.output));
    CHECK(first.rfind("# madrl config_hash=" + config_hash(c), 0) == 0);
    CHECK(first.find("\nepoch,mean_score,std_score,mean_length,mean_fruits,mean_collisions,seconds\n0,") !=
          std::string::npos);
  }
}

TEST_CASE("training transitions are counted globally") {
  auto c = small_config(Method::agnostic);
  c.epochs = 3;
  c.transitions_per_epoch = 250;
  std::size_t steps = 0;
  const auto r = run_experiment(c, nullptr, [&](auto&&...) { ++steps; });
  CHECK(steps == 750);
  REQUIRE(r.records.size() == 4);
  CHECK(r.records.front().epoch == 0);
  CHECK(r.records.back().epoch == 3);
  for (const auto& rec : r.records) CHECK(rec.seconds == 0.0);
}

TEST_CASE("reward noise never changes the environment's trajectory") {
  for (Method m : {Method::egocentric, Method::empathic, Method::linear}) {
    auto c = small_config(m);
    c.epsilon = 1.0;  // behaviour independent of the learned values
    const auto clean = record(c);
    c.noise_sigma = 0.5;
    const auto noisy = record(c);
    CHECK(clean == noisy);
  }
}

TEST_CASE("checkpoints restore the learned tables") {
  auto c = small_config(Method::empathic);
  c.checkpoint = tmp_path("ckpt.csv");
  const auto r = run_experiment(c);
  const auto loaded = load_checkpoint(c.checkpoint);
  const auto layout = env::builtin_layout("pacboy7");
  Rng rng = make_rng({4});
  for (int i = 0; i < 20; ++i) {
    auto s = env::pacboy_reset(layout, rng);
    s.agent = uniform_index(rng, layout.cell_count());
    CHECK(loaded.learner->q_values(s) == r.learner->q_values(s));
  }
  std::remove(c.checkpoint.c_str());
}
