#pragma once

// Feed-forward regressor 50 -> 100 -> 50 -> k with ReLU hidden layers and a
// linear head, trained by mini-batch Adam on mean squared error.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "madrl/rng.hpp"
#include "madrl/targets.hpp"

namespace madrl::approx {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using targets::TargetKind;
using targets::TargetSample;

inline constexpr int kInputs = 50;
inline constexpr int kHidden1 = 100;
inline constexpr int kHidden2 = 50;

struct AdamParams {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/**
 * Parameters live in one flat vector in the order
 * W1 (100x50), b1, W2 (50x100), b2, W3 (k x 50), b3,
 * each matrix stored column-major. Checkpoints use the same order.
 */
class MLP {
 public:
  /// He-uniform hidden weights from `seed`; output layer and biases zero.
  MLP(int outputs, std::uint64_t seed);

  int outputs() const { return outputs_; }
  Eigen::Index parameter_count() const { return params_.size(); }
  const VectorXd& parameters() const { return params_; }
  void set_parameters(const VectorXd& p);

  /// Every parameter uniform in [-scale, scale]; used by gradient checks.
  void randomize(Rng& rng, double scale);

  /// x: 50 x B inputs -> k x B outputs.
  MatrixXd forward(const MatrixXd& x) const;

  /// Mean over all k*B squared errors.
  double loss(const MatrixXd& x, const MatrixXd& y) const;
  double loss_and_gradient(const MatrixXd& x, const MatrixXd& y, VectorXd& grad) const;

  /// One Adam step; a zero gradient leaves the parameters unchanged.
  void adam_step(const VectorXd& grad, const AdamParams& adam);
  long adam_steps() const { return step_; }

  /// Hidden-unit on/off pattern for inputs x (both hidden layers, stacked).
  std::vector<std::uint8_t> activation_pattern(const MatrixXd& x) const;

  void save(std::ostream& out) const;
  static MLP load(std::istream& in);

 private:
  struct Views;
  Views views() const;

  int outputs_;
  VectorXd params_;
  VectorXd m_;
  VectorXd v_;
  long step_ = 0;
};

// --- datasets ---------------------------------------------------------------

int output_count(TargetKind kind);
MatrixXd input_matrix(std::span<const TargetSample> samples);
MatrixXd target_matrix(std::span<const TargetSample> samples, TargetKind kind);
VectorXd encode_input(const env::FruitGridState& state);

/// SSE / SST with both sums taken over every output and sample.
double normalized_mse(const MLP& model, const MatrixXd& x, const MatrixXd& y);

struct TrainOptions {
  int epochs = 500;
  int batch_size = 32;
  AdamParams adam;
  std::uint64_t seed = 0;
};

struct TrainResult {
  MLP model;
  std::vector<double> curve;  // full-dataset MSE after each epoch
};

/// Throws std::runtime_error when the loss becomes NaN.
TrainResult mlp_train(std::span<const TargetSample> dataset, TargetKind kind,
                      const TrainOptions& options);

/// Scalar value of a state; the vector head is summed.
double mlp_value(const MLP& model, const env::FruitGridState& state);

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // probes straddling a ReLU kink at every step size tried
};

/// Central differences on every parameter against the analytic gradient.
/// Inside one activation pattern the loss is quadratic in any single parameter,
/// so the difference quotient is exact up to roundoff and a larger step is
/// more accurate; probes that cross a ReLU kink retry at step/10, step/100.
GradientCheck gradient_check(const MLP& model, const MatrixXd& x, const MatrixXd& y,
                             double step = 1e-4);

// --- greedy rollouts --------------------------------------------------------

using ValueFn = std::function<double(const env::FruitGridState&)>;

inline constexpr int kRolloutCap = 200;

/// Plays `episodes` fresh games (episode i seeded with (seed, 0x2011, i)); each turn
/// the agent moves to the neighbour with the best score, lowest index on
/// ties. The tsp target scores V(x'); the others score fruit(x') + V(x').
double greedy_rollout_eval(const ValueFn& value, TargetKind kind, std::size_t episodes,
                           std::uint64_t seed, int cap = kRolloutCap);

double greedy_rollout_eval(const MLP& model, TargetKind kind, std::size_t episodes,
                           std::uint64_t seed, int cap = kRolloutCap);

void write_curve_csv(std::ostream& out, std::span<const double> curve);

}  // namespace madrl::approx
