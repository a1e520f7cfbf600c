#pragma once

// Flat `key = value` experiment configuration. Blank lines and lines starting
// with `#` are ignored.
//
//   maze                   builtin:pacboy11 | builtin:pacboy7 | <layout file>
//   method                 egocentric | agnostic | empathic | linear
//   gamma                  [0, 1)
//   alpha                  (0, 1]            default 0.1
//   epsilon                [0, 1]            default 0.1 (training only)
//   eval_tie_rule          lowest_index | uniform_random
//   noise_sigma            >= 0              default 0
//   epochs                 default 50
//   transitions_per_epoch  default 20000
//   eval_games             default 80
//   seed                   unsigned integer
//   output                 metrics CSV path (empty: none)
//   checkpoint             Q-table snapshot path written after training
//   timing                 true | false      default false

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "madrl/mdp.hpp"

namespace madrl::harness {

enum class Method { egocentric, agnostic, empathic, linear };

Method parse_method(const std::string& name);
std::string to_string(Method m);

struct ExperimentConfig {
  std::string maze = "builtin:pacboy11";
  Method method = Method::egocentric;
  double gamma = 0.9;
  double alpha = 0.1;
  double epsilon = 0.1;
  mdp::TieRule eval_tie_rule = mdp::TieRule::lowest_index;
  double noise_sigma = 0.0;
  int epochs = 50;
  std::size_t transitions_per_epoch = 20000;
  std::size_t eval_games = 80;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string checkpoint;
  bool timing = false;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Sets one key; throws std::invalid_argument for unknown keys or bad values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Canonical text of every key that influences results (not output paths).
std::string canonical_text(const ExperimentConfig& config);
/// FNV-1a 64 of canonical_text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace madrl::harness
