#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace heartcbr::nn {

template <typename Scalar>
Scalar sigmoid(Scalar y) {
  using std::exp;
  if (y >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-y));
  const Scalar e = exp(y);
  return e / (Scalar(1) + e);
}

/// Error term of an output unit: o (1 - o) (t - o).
template <typename Scalar>
Scalar output_delta(Scalar output, Scalar target) {
  return output * (Scalar(1) - output) * (target - output);
}

/// Error term of a hidden unit: o (1 - o) * sum of w_kh * delta_k over the
/// units it feeds.
template <typename Scalar>
Scalar hidden_delta(Scalar output, std::span<const std::pair<Scalar, Scalar>> downstream) {
  Scalar sum = 0;
  for (const auto& [weight, delta] : downstream) sum += weight * delta;
  return output * (Scalar(1) - output) * sum;
}

/// Fully connected sigmoid network with one hidden layer. Each layer gets a
/// constant-1 bias input stored in the last weight column, so the hidden
/// weights are hidden x (inputs + 1) and the output weights outputs x
/// (hidden + 1). Layer sizes are fixed at construction.
template <typename Scalar>
class BasicMlp {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Activations {
    Vector hidden;
    Vector output;
  };

  struct Deltas {
    Vector hidden;
    Vector output;
  };

  static constexpr double kInitScale = 0.05;

  /// Weights drawn uniformly from [-0.05, 0.05] by a seeded generator.
  BasicMlp(int inputs, int hidden, int outputs, Scalar learning_rate, std::uint64_t seed)
      : hidden_w_(hidden, inputs + 1), output_w_(outputs, hidden + 1), eta_(learning_rate), seed_(seed) {
    if (inputs < 1 || hidden < 1 || outputs < 1) throw std::invalid_argument("layer sizes must be >= 1");
    check_rate();
    std::mt19937_64 gen(seed);
    // 53 random bits mapped to [0, 1) so the draw is identical across standard libraries.
    auto draw = [&gen] {
      const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      return static_cast<Scalar>((2.0 * unit - 1.0) * kInitScale);
    };
    for (Eigen::Index j = 0; j < hidden_w_.cols(); ++j)
      for (Eigen::Index i = 0; i < hidden_w_.rows(); ++i) hidden_w_(i, j) = draw();
    for (Eigen::Index j = 0; j < output_w_.cols(); ++j)
      for (Eigen::Index i = 0; i < output_w_.rows(); ++i) output_w_(i, j) = draw();
  }

  BasicMlp(Matrix hidden_weights, Matrix output_weights, Scalar learning_rate, std::uint64_t seed = 0)
      : hidden_w_(std::move(hidden_weights)), output_w_(std::move(output_weights)),
        eta_(learning_rate), seed_(seed) {
    if (hidden_w_.rows() < 1 || hidden_w_.cols() < 2 || output_w_.rows() < 1 ||
        output_w_.cols() != hidden_w_.rows() + 1) {
      throw std::invalid_argument("inconsistent weight shapes");
    }
    check_rate();
    check_finite();
  }

  /// The 13-3-2 heart-disease network.
  static BasicMlp heart_default(Scalar learning_rate = Scalar(0.1), std::uint64_t seed = 0) {
    return BasicMlp(13, 3, 2, learning_rate, seed);
  }

  int inputs() const { return static_cast<int>(hidden_w_.cols() - 1); }
  int hidden() const { return static_cast<int>(hidden_w_.rows()); }
  int outputs() const { return static_cast<int>(output_w_.rows()); }
  const Matrix& hidden_weights() const noexcept { return hidden_w_; }
  const Matrix& output_weights() const noexcept { return output_w_; }
  Scalar learning_rate() const noexcept { return eta_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Replaces weights; shapes must match the existing architecture.
  void set_weights(Matrix hidden_weights, Matrix output_weights) {
    if (hidden_weights.rows() != hidden_w_.rows() || hidden_weights.cols() != hidden_w_.cols() ||
        output_weights.rows() != output_w_.rows() || output_weights.cols() != output_w_.cols()) {
      throw std::invalid_argument("set_weights: architecture mismatch");
    }
    hidden_w_ = std::move(hidden_weights);
    output_w_ = std::move(output_weights);
    check_finite();
  }

  template <typename Derived>
  Activations forward(const Eigen::MatrixBase<Derived>& input) const {
    if (input.size() != inputs()) throw std::invalid_argument("forward: input size mismatch");
    Activations a;
    a.hidden = (hidden_w_.leftCols(inputs()) * input + hidden_w_.col(inputs()))
                   .unaryExpr([](Scalar y) { return sigmoid(y); });
    a.output = (output_w_.leftCols(hidden()) * a.hidden + output_w_.col(hidden()))
                   .unaryExpr([](Scalar y) { return sigmoid(y); });
    return a;
  }

  /// w_ji += eta * delta_j * x_ji on both layers, x_j0 = 1 for the bias.
  template <typename Derived>
  void apply_update(const Deltas& deltas, const Eigen::MatrixBase<Derived>& input,
                    const Activations& acts) {
    hidden_w_.leftCols(inputs()).noalias() += eta_ * deltas.hidden * input.transpose();
    hidden_w_.col(inputs()) += eta_ * deltas.hidden;
    output_w_.leftCols(hidden()).noalias() += eta_ * deltas.output * acts.hidden.transpose();
    output_w_.col(hidden()) += eta_ * deltas.output;
  }

 private:
  void check_rate() const {
    if (!(eta_ >= Scalar(0)) || !std::isfinite(static_cast<double>(eta_))) {
      throw std::invalid_argument("learning rate must be finite and >= 0");
    }
  }
  void check_finite() const {
    if (!hidden_w_.allFinite() || !output_w_.allFinite()) throw std::invalid_argument("non-finite weight");
  }

  Matrix hidden_w_;
  Matrix output_w_;
  Scalar eta_;
  std::uint64_t seed_;
};

using Mlp = BasicMlp<double>;

/// Output and hidden error terms for one example, computed with the weights
/// used in the forward pass.
template <typename Scalar, typename Derived>
typename BasicMlp<Scalar>::Deltas backprop_deltas(const BasicMlp<Scalar>& model,
                                                  const typename BasicMlp<Scalar>::Activations& acts,
                                                  const Eigen::MatrixBase<Derived>& target) {
  typename BasicMlp<Scalar>::Deltas d;
  const auto& o = acts.output.array();
  d.output = (o * (Scalar(1) - o) * (target.array() - o)).matrix();
  const auto& h = acts.hidden.array();
  d.hidden = (h * (Scalar(1) - h) *
              (model.output_weights().leftCols(model.hidden()).transpose() * d.output).array())
                 .matrix();
  return d;
}

template <typename Scalar, typename Derived>
BasicMlp<Scalar> update_weights(BasicMlp<Scalar> model, const typename BasicMlp<Scalar>::Deltas& deltas,
                                const Eigen::MatrixBase<Derived>& input,
                                const typename BasicMlp<Scalar>::Activations& acts) {
  model.apply_update(deltas, input, acts);
  return model;
}

/// 0.5 * sum_k (t_k - o_k)^2.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar half_squared_error(const Eigen::MatrixBase<DerivedA>& output,
                                             const Eigen::MatrixBase<DerivedB>& target) {
  return typename DerivedA::Scalar(0.5) * (target - output).squaredNorm();
}

/// One stochastic backpropagation step; returns the error before the update.
template <typename Scalar, typename DerivedX, typename DerivedT>
Scalar train_step(BasicMlp<Scalar>& model, const Eigen::MatrixBase<DerivedX>& input,
                  const Eigen::MatrixBase<DerivedT>& target) {
  const auto acts = model.forward(input);
  const auto deltas = backprop_deltas(model, acts, target);
  model.apply_update(deltas, input, acts);
  return half_squared_error(acts.output, target);
}

/// One-hot encoding over two outputs: absence (1, 0), presence (0, 1).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> one_hot(int label, int classes = 2) {
  if (label < 0 || label >= classes) throw std::invalid_argument("label out of range");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> t = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(classes);
  t(label) = Scalar(1);
  return t;
}

/// Index of the largest output; ties go to the lower index.
template <typename Scalar, typename Derived>
int classify(const BasicMlp<Scalar>& model, const Eigen::MatrixBase<Derived>& input) {
  const auto out = model.forward(input).output;
  int best = 0;
  for (int k = 1; k < out.size(); ++k) {
    if (out(k) > out(best)) best = k;
  }
  return best;
}

/// Mean over examples and outputs of (t - o)^2.
template <typename Scalar, typename Derived>
Scalar mean_squared_error(const BasicMlp<Scalar>& model, const Eigen::MatrixBase<Derived>& inputs,
                          std::span<const int> labels) {
  Scalar total = 0;
  for (Eigen::Index j = 0; j < inputs.cols(); ++j) {
    const auto out = model.forward(inputs.col(j)).output;
    total += (one_hot<Scalar>(labels[static_cast<std::size_t>(j)], model.outputs()) - out).squaredNorm();
  }
  return total / static_cast<Scalar>(inputs.cols() * model.outputs());
}

struct TrainOptions {
  int epochs = 100;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
  int hidden = 3;
};

template <typename Scalar>
struct TrainResult {
  BasicMlp<Scalar> model;
  std::vector<Scalar> epoch_mse;  // measured after each epoch
};

/// Per-example updates in column order for `options.epochs` passes over
/// `inputs` (one normalized case per column).
template <typename Derived>
TrainResult<typename Derived::Scalar> train_mlp(const Eigen::MatrixBase<Derived>& inputs,
                                                std::span<const int> labels, const TrainOptions& options) {
  using Scalar = typename Derived::Scalar;
  if (options.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (inputs.cols() == 0) throw std::invalid_argument("empty training set");
  if (static_cast<std::size_t>(inputs.cols()) != labels.size()) {
    throw std::invalid_argument("inputs and labels disagree in length");
  }
  TrainResult<Scalar> result{BasicMlp<Scalar>(static_cast<int>(inputs.rows()), options.hidden, 2,
                                              static_cast<Scalar>(options.learning_rate), options.seed),
                             {}};
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    for (Eigen::Index j = 0; j < inputs.cols(); ++j) {
      train_step(result.model, inputs.col(j), one_hot<Scalar>(labels[static_cast<std::size_t>(j)]));
    }
    result.epoch_mse.push_back(mean_squared_error(result.model, inputs, labels));
  }
  return result;
}

/// Model file: layer sizes, learning rate, seed and both weight matrices
/// (row-major nested arrays, full precision).
void write_model(std::ostream& out, const Mlp& model);
Mlp read_model(std::istream& in);
void write_model_file(const std::filesystem::path& path, const Mlp& model);
Mlp read_model_file(const std::filesystem::path& path);

/// CSV "epoch,mse" with 1-based epochs.
void write_training_log(std::ostream& out, std::span<const double> epoch_mse);
std::vector<double> read_training_log(std::istream& in);

}  // namespace heartcbr::nn
