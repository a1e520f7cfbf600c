#include "madrl/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace madrl::approx {

namespace {

constexpr Eigen::Index kW1 = kHidden1 * kInputs;
constexpr Eigen::Index kW2 = kHidden2 * kHidden1;

Eigen::Index count_for(int k) { return kW1 + kHidden1 + kW2 + kHidden2 + k * kHidden2 + k; }

MatrixXd relu(const MatrixXd& z) { return z.cwiseMax(0.0); }

}  // namespace

struct MLP::Views {
  Eigen::Map<const MatrixXd> w1, w2, w3;
  Eigen::Map<const VectorXd> b1, b2, b3;
};

MLP::Views MLP::views() const {
  const double* p = params_.data();
  const double* b1 = p + kW1;
  const double* w2 = b1 + kHidden1;
  const double* b2 = w2 + kW2;
  const double* w3 = b2 + kHidden2;
  const double* b3 = w3 + outputs_ * kHidden2;
  return {Eigen::Map<const MatrixXd>(p, kHidden1, kInputs),
          Eigen::Map<const MatrixXd>(w2, kHidden2, kHidden1),
          Eigen::Map<const MatrixXd>(w3, outputs_, kHidden2),
          Eigen::Map<const VectorXd>(b1, kHidden1),
          Eigen::Map<const VectorXd>(b2, kHidden2),
          Eigen::Map<const VectorXd>(b3, outputs_)};
}

MLP::MLP(int outputs, std::uint64_t seed) : outputs_(outputs) {
  if (outputs < 1) throw std::invalid_argument("MLP needs at least one output");
  params_ = VectorXd::Zero(count_for(outputs));
  m_ = VectorXd::Zero(params_.size());
  v_ = VectorXd::Zero(params_.size());
  Rng rng = make_rng({seed, 0x1417});
  auto fill = [&](Eigen::Index offset, Eigen::Index n, int fan_in) {
    const double limit = std::sqrt(6.0 / fan_in);
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index i = 0; i < n; ++i) params_[offset + i] = dist(rng);
  };
  fill(0, kW1, kInputs);
  fill(kW1 + kHidden1, kW2, kHidden1);
}

void MLP::set_parameters(const VectorXd& p) {
  if (p.size() != params_.size()) throw std::invalid_argument("parameter vector has the wrong size");
  params_ = p;
}

void MLP::randomize(Rng& rng, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  for (Eigen::Index i = 0; i < params_.size(); ++i) params_[i] = dist(rng);
}

MatrixXd MLP::forward(const MatrixXd& x) const {
  if (x.rows() != kInputs) throw std::invalid_argument("MLP input must have 50 rows");
  const auto v = views();
  const MatrixXd h1 = relu((v.w1 * x).colwise() + v.b1);
  const MatrixXd h2 = relu((v.w2 * h1).colwise() + v.b2);
  return (v.w3 * h2).colwise() + v.b3;
}

double MLP::loss(const MatrixXd& x, const MatrixXd& y) const {
  return (forward(x) - y).squaredNorm() / static_cast<double>(y.size());
}

double MLP::loss_and_gradient(const MatrixXd& x, const MatrixXd& y, VectorXd& grad) const {
  if (x.rows() != kInputs || y.rows() != outputs_ || x.cols() != y.cols()) {
    throw std::invalid_argument("MLP batch shape mismatch");
  }
  const auto v = views();
  const MatrixXd z1 = (v.w1 * x).colwise() + v.b1;
  const MatrixXd h1 = relu(z1);
  const MatrixXd z2 = (v.w2 * h1).colwise() + v.b2;
  const MatrixXd h2 = relu(z2);
  const MatrixXd diff = ((v.w3 * h2).colwise() + v.b3) - y;
  const double n = static_cast<double>(y.size());

  grad.resize(params_.size());
  double* g = grad.data();
  Eigen::Map<MatrixXd> gw1(g, kHidden1, kInputs);
  Eigen::Map<VectorXd> gb1(g + kW1, kHidden1);
  Eigen::Map<MatrixXd> gw2(g + kW1 + kHidden1, kHidden2, kHidden1);
  Eigen::Map<VectorXd> gb2(g + kW1 + kHidden1 + kW2, kHidden2);
  Eigen::Map<MatrixXd> gw3(g + kW1 + kHidden1 + kW2 + kHidden2, outputs_, kHidden2);
  Eigen::Map<VectorXd> gb3(g + kW1 + kHidden1 + kW2 + kHidden2 + outputs_ * kHidden2, outputs_);

  const MatrixXd d3 = diff * (2.0 / n);
  gw3.noalias() = d3 * h2.transpose();
  gb3 = d3.rowwise().sum();
  const MatrixXd d2 = (v.w3.transpose() * d3).cwiseProduct((z2.array() > 0.0).cast<double>().matrix());
  gw2.noalias() = d2 * h1.transpose();
  gb2 = d2.rowwise().sum();
  const MatrixXd d1 = (v.w2.transpose() * d2).cwiseProduct((z1.array() > 0.0).cast<double>().matrix());
  gw1.noalias() = d1 * x.transpose();
  gb1 = d1.rowwise().sum();
  return diff.squaredNorm() / n;
}

void MLP::adam_step(const VectorXd& grad, const AdamParams& adam) {
  if (grad.size() != params_.size()) throw std::invalid_argument("gradient has the wrong size");
  ++step_;
  m_ = adam.beta1 * m_ + (1.0 - adam.beta1) * grad;
  v_ = adam.beta2 * v_ + (1.0 - adam.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(adam.beta1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(adam.beta2, static_cast<double>(step_));
  params_.array() -= adam.learning_rate * (m_.array() / c1) /
                     ((v_.array() / c2).sqrt() + adam.epsilon);
}

std::vector<std::uint8_t> MLP::activation_pattern(const MatrixXd& x) const {
  const auto v = views();
  const MatrixXd z1 = (v.w1 * x).colwise() + v.b1;
  const MatrixXd z2 = (v.w2 * relu(z1)).colwise() + v.b2;
  std::vector<std::uint8_t> out;
  out.reserve(z1.size() + z2.size());
  for (Eigen::Index i = 0; i < z1.size(); ++i) out.push_back(z1.data()[i] > 0.0);
  for (Eigen::Index i = 0; i < z2.size(); ++i) out.push_back(z2.data()[i] > 0.0);
  return out;
}

void MLP::save(std::ostream& out) const {
  out << "madrl-mlp v1 outputs " << outputs_ << " parameters " << params_.size() << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < params_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", params_[i]);
    out << buf << '\n';
  }
}

MLP MLP::load(std::istream& in) {
  std::string magic, version, k_label, n_label;
  int k = 0;
  Eigen::Index n = 0;
  if (!(in >> magic >> version >> k_label >> k >> n_label >> n) || magic != "madrl-mlp" ||
      version != "v1" || k_label != "outputs" || n_label != "parameters") {
    throw std::invalid_argument("not an MLP checkpoint");
  }
  MLP model(k, 0);
  if (n != model.parameter_count()) throw std::invalid_argument("checkpoint parameter count mismatch");
  VectorXd p(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(in >> p[i])) throw std::invalid_argument("checkpoint truncated");
  }
  model.set_parameters(p);
  return model;
}

// --- datasets ---------------------------------------------------------------

int output_count(TargetKind kind) {
  return kind == TargetKind::ego_vec ? static_cast<int>(env::kGridCells) : 1;
}

VectorXd encode_input(const env::FruitGridState& state) {
  const auto bits = targets::encode(state);
  VectorXd x(kInputs);
  for (int i = 0; i < kInputs; ++i) x[i] = bits[i];
  return x;
}

MatrixXd input_matrix(std::span<const TargetSample> samples) {
  MatrixXd x(kInputs, static_cast<Eigen::Index>(samples.size()));
  for (std::size_t n = 0; n < samples.size(); ++n) {
    for (int i = 0; i < kInputs; ++i) x(i, n) = samples[n].encoding[i];
  }
  return x;
}

MatrixXd target_matrix(std::span<const TargetSample> samples, TargetKind kind) {
  MatrixXd y(output_count(kind), static_cast<Eigen::Index>(samples.size()));
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const auto& s = samples[n];
    switch (kind) {
      case TargetKind::tsp: y(0, n) = s.y_tsp; break;
      case TargetKind::rl: y(0, n) = s.y_rl; break;
      case TargetKind::ego_sum: y(0, n) = s.y_ego_sum; break;
      case TargetKind::ego_vec:
        for (std::size_t i = 0; i < env::kGridCells; ++i) y(i, n) = s.y_ego_vec[i];
        break;
    }
  }
  return y;
}

double normalized_mse(const MLP& model, const MatrixXd& x, const MatrixXd& y) {
  const double sse = (model.forward(x) - y).squaredNorm();
  const VectorXd mean = y.rowwise().mean();
  const double sst = (y.colwise() - mean).squaredNorm();
  if (sst == 0.0) return sse == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return sse / sst;
}

TrainResult mlp_train(std::span<const TargetSample> dataset, TargetKind kind,
                      const TrainOptions& options) {
  if (dataset.empty()) throw std::invalid_argument("training needs a non-empty dataset");
  if (options.epochs < 0 || options.batch_size < 1) throw std::invalid_argument("bad training options");
  const MatrixXd x = input_matrix(dataset);
  const MatrixXd y = target_matrix(dataset, kind);
  TrainResult result{MLP(output_count(kind), options.seed), {}};
  MLP& model = result.model;

  Rng rng = make_rng({options.seed, 0x5EED});
  std::vector<Eigen::Index> order(dataset.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  VectorXd grad;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const auto b = static_cast<Eigen::Index>(
          std::min<std::size_t>(options.batch_size, order.size() - start));
      MatrixXd bx(kInputs, b), by(y.rows(), b);
      for (Eigen::Index i = 0; i < b; ++i) {
        bx.col(i) = x.col(order[start + i]);
        by.col(i) = y.col(order[start + i]);
      }
      model.loss_and_gradient(bx, by, grad);
      model.adam_step(grad, options.adam);
    }
    const double mse = model.loss(x, y);
    if (!std::isfinite(mse)) {
      throw std::runtime_error("training loss became NaN at epoch " + std::to_string(epoch + 1) +
                               "; lower the learning rate");
    }
    result.curve.push_back(mse);
  }
  return result;
}

double mlp_value(const MLP& model, const env::FruitGridState& state) {
  return model.forward(encode_input(state)).sum();
}

GradientCheck gradient_check(const MLP& model, const MatrixXd& x, const MatrixXd& y, double step) {
  GradientCheck out;
  VectorXd analytic;
  model.loss_and_gradient(x, y, analytic);
  const auto base_pattern = model.activation_pattern(x);
  MLP probe = model;
  VectorXd p = model.parameters();
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double saved = p[i];
    bool done = false;
    for (double h = step; h >= step * 1e-2 && !done; h *= 0.1) {
      p[i] = saved + h;
      probe.set_parameters(p);
      if (probe.activation_pattern(x) != base_pattern) continue;
      const double up = probe.loss(x, y);
      p[i] = saved - h;
      probe.set_parameters(p);
      if (probe.activation_pattern(x) != base_pattern) continue;
      const double down = probe.loss(x, y);
      const double numeric = (up - down) / (2.0 * h);
      const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-7});
      out.max_relative_error = std::max(out.max_relative_error, std::abs(analytic[i] - numeric) / denom);
      ++out.checked;
      done = true;
    }
    if (!done) ++out.skipped;
    p[i] = saved;
  }
  return out;
}

// --- greedy rollouts --------------------------------------------------------

double greedy_rollout_eval(const ValueFn& value, TargetKind kind, std::size_t episodes,
                           std::uint64_t seed, int cap) {
  if (episodes == 0) throw std::invalid_argument("rollout needs at least one episode");
  double total = 0.0;
  for (std::size_t e = 0; e < episodes; ++e) {
    Rng rng = make_rng({seed, 0x2011, static_cast<std::uint64_t>(e)});
    auto state = env::fruit_grid_reset(rng);
    int steps = 0;
    while (state.fruits.any() && steps < cap) {
      double best = -std::numeric_limits<double>::infinity();
      env::FruitGridState chosen = state;
      for (env::GridCell to : env::grid_neighbors(state.agent)) {
        auto next = state;
        const int eaten = env::grid_visit(next, to);
        const double v = value(next);
        const double score = kind == TargetKind::tsp ? v : eaten + v;
        if (score > best) {
          best = score;
          chosen = next;
        }
      }
      state = chosen;
      ++steps;
    }
    total += steps;
  }
  return total / static_cast<double>(episodes);
}

double greedy_rollout_eval(const MLP& model, TargetKind kind, std::size_t episodes,
                           std::uint64_t seed, int cap) {
  return greedy_rollout_eval([&](const env::FruitGridState& s) { return mlp_value(model, s); },
                             kind, episodes, seed, cap);
}

void write_curve_csv(std::ostream& out, std::span<const double> curve) {
  out << "epoch,mse\n";
  char buf[32];
  for (std::size_t e = 0; e < curve.size(); ++e) {
    std::snprintf(buf, sizeof buf, "%.17g", curve[e]);
    out << e + 1 << ',' << buf << '\n';
  }
}

}  // namespace madrl::approx
