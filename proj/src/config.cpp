#include "madrl/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace madrl::harness {

Method parse_method(const std::string& name) {
  if (name == "egocentric") return Method::egocentric;
  if (name == "agnostic") return Method::agnostic;
  if (name == "empathic") return Method::empathic;
  if (name == "linear") return Method::linear;
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::egocentric: return "egocentric";
    case Method::agnostic: return "agnostic";
    case Method::empathic: return "empathic";
    case Method::linear: return "linear";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw std::invalid_argument("noise_sigma must be >= 0");
  }
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (eval_games == 0) throw std::invalid_argument("eval_games must be positive");
  if (maze.empty()) throw std::invalid_argument("maze must be set");
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw std::invalid_argument(key + ": expected a number, got '" + v + "'");
  return out;
}

template <class T>
T to_unsigned(const std::string& key, const std::string& v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || out < T{}) {
    throw std::invalid_argument(key + ": expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument(key + ": expected true or false, got '" + v + "'");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "maze") c.maze = v;
  else if (key == "method") c.method = parse_method(v);
  else if (key == "gamma") c.gamma = to_double(key, v);
  else if (key == "alpha") c.alpha = to_double(key, v);
  else if (key == "epsilon") c.epsilon = to_double(key, v);
  else if (key == "eval_tie_rule") c.eval_tie_rule = mdp::parse_tie_rule(v);
  else if (key == "noise_sigma") c.noise_sigma = to_double(key, v);
  else if (key == "epochs") c.epochs = to_unsigned<int>(key, v);
  else if (key == "transitions_per_epoch") c.transitions_per_epoch = to_unsigned<std::size_t>(key, v);
  else if (key == "eval_games") c.eval_games = to_unsigned<std::size_t>(key, v);
  else if (key == "seed") c.seed = to_unsigned<std::uint64_t>(key, v);
  else if (key == "output") c.output = v;
  else if (key == "checkpoint") c.checkpoint = v;
  else if (key == "timing") c.timing = to_bool(key, v);
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(number) + ": expected key = value");
    }
    apply_setting(c, trim(t.substr(0, eq)), t.substr(eq + 1));
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string canonical_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "maze=" << c.maze << '\n'
      << "method=" << to_string(c.method) << '\n'
      << "gamma=" << fmt(c.gamma) << '\n'
      << "alpha=" << fmt(c.alpha) << '\n'
      << "epsilon=" << fmt(c.epsilon) << '\n'
      << "eval_tie_rule=" << mdp::to_string(c.eval_tie_rule) << '\n'
      << "noise_sigma=" << fmt(c.noise_sigma) << '\n'
      << "epochs=" << c.epochs << '\n'
      << "transitions_per_epoch=" << c.transitions_per_epoch << '\n'
      << "eval_games=" << c.eval_games << '\n'
      << "seed=" << (c.seed ? std::to_string(*c.seed) : std::string("unset")) << '\n';
  return out.str();
}

std::string config_hash(const ExperimentConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_text(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace madrl::harness
