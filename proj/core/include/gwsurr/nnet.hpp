#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gwsurr/spiral.hpp"

namespace gwsurr {

/// Deterministic RNG with portable draw semantics. All randomness in the
/// toolkit (initialization, shuffling, sampling) flows through this type so
/// runs are reproducible from a single seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) built from the top 53 bits of the engine.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, n) via rejection sampling.
  std::uint64_t next_below(std::uint64_t n);

  /// Fisher-Yates shuffle.
  void shuffle(std::vector<int>& v);

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent stream seed (weight init, shuffling, sampling ...)
/// from the run seed. splitmix64 of seed ^ stream tag.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Architecture description. "S-32-64" parses to use_spiral=true and hidden
/// widths {32, 64}; every hidden dense layer is followed by a PReLU and the
/// final layer is linear.
struct NetworkSpec {
  std::vector<int> layer_widths;
  bool use_spiral{false};
  int input_dim{1};
  int output_dim{1};

  static NetworkSpec parse(const std::string& text, int input_dim, int output_dim);
  std::string to_string() const;
};

/// Per-layer forward cache consumed by backward.
struct LayerCache {
  Eigen::MatrixXd input;
  Eigen::MatrixXd aux;
};

class Layer {
 public:
  virtual ~Layer() = default;
  virtual std::string kind() const = 0;
  virtual int in_width() const = 0;
  virtual int out_width() const = 0;
  virtual int param_count() const = 0;
  /// Points the layer at its slice of the flat parameter/gradient buffers.
  virtual void bind(double* params, double* grads) = 0;
  virtual void init_params(Rng& rng) = 0;
  virtual Eigen::MatrixXd forward(const Eigen::MatrixXd& x, LayerCache* cache) const = 0;
  /// Accumulates parameter gradients and returns the input gradient.
  virtual Eigen::MatrixXd backward(const Eigen::MatrixXd& grad_out,
                                   const LayerCache& cache) = 0;
};

/// Fully connected layer, y = x W^T + b with W of shape out x in.
class DenseLayer final : public Layer {
 public:
  DenseLayer(int in, int out);
  std::string kind() const override { return "dense"; }
  int in_width() const override { return in_; }
  int out_width() const override { return out_; }
  int param_count() const override { return out_ * in_ + out_; }
  void bind(double* params, double* grads) override;
  void init_params(Rng& rng) override;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, LayerCache* cache) const override;
  Eigen::MatrixXd backward(const Eigen::MatrixXd& grad_out, const LayerCache& cache) override;

  Eigen::Map<const Eigen::MatrixXd> weight() const;
  Eigen::Map<const Eigen::VectorXd> bias() const;

 private:
  int in_, out_;
  double* p_{};
  double* g_{};
};

/// Parametric ReLU with one learnable slope per unit,
/// y = max(0, x) + a .* min(0, x). Slopes initialize to 0.25.
class PReLULayer final : public Layer {
 public:
  explicit PReLULayer(int width) : width_(width) {}
  std::string kind() const override { return "prelu"; }
  int in_width() const override { return width_; }
  int out_width() const override { return width_; }
  int param_count() const override { return width_; }
  void bind(double* params, double* grads) override;
  void init_params(Rng& rng) override;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, LayerCache* cache) const override;
  Eigen::MatrixXd backward(const Eigen::MatrixXd& grad_out, const LayerCache& cache) override;

 private:
  int width_;
  double* p_{};
  double* g_{};
};

/// Learnable spiral input module wrapping the spiral_forward/backward maps.
/// Parameters are [w, b, alpha, beta]; initialization is the configured
/// starting point, not random.
class SpiralLayer final : public Layer {
 public:
  explicit SpiralLayer(const SpiralParams& init) : init_(init) {}
  std::string kind() const override { return "spiral"; }
  int in_width() const override { return 1; }
  int out_width() const override { return 2; }
  int param_count() const override { return 4; }
  void bind(double* params, double* grads) override;
  void init_params(Rng& rng) override;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, LayerCache* cache) const override;
  Eigen::MatrixXd backward(const Eigen::MatrixXd& grad_out, const LayerCache& cache) override;

  SpiralParams params() const;

 private:
  SpiralParams init_;
  double* p_{};
  double* g_{};
};

/// Sequential network over a flat parameter vector. Move-only; the flat
/// buffers are heap stable so layer bindings survive moves.
class Network {
 public:
  Network() = default;
  Network(Network&&) = default;
  Network& operator=(Network&&) = default;
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  /// Builds the spec's layer chain. `spiral_init` is used only when the spec
  /// asks for the spiral module.
  static Network build(const NetworkSpec& spec,
                       const SpiralParams& spiral_init = {0.0, 0.0, 1.0, 0.0});

  void init_params(std::uint64_t seed);

  int input_width() const;
  int output_width() const;
  int param_count() const { return static_cast<int>(params_.size()); }
  int layer_count() const { return static_cast<int>(layers_.size()); }
  const Layer& layer(int i) const { return *layers_[i]; }

  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }
  const Eigen::VectorXd& grads() const { return grads_; }
  void zero_grads() { grads_.setZero(); }

  /// Inference pass. Each sample is processed with batch-size independent
  /// arithmetic, so batched and one-at-a-time calls agree bit-exactly.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, std::vector<LayerCache>& caches) const;
  /// Runs only the first `layer_count` layers (encoder slices etc.).
  Eigen::MatrixXd forward_prefix(const Eigen::MatrixXd& x, int layer_count) const;
  /// Accumulates into the flat gradient buffer; returns the input gradient.
  Eigen::MatrixXd backward(const Eigen::MatrixXd& grad_out,
                           const std::vector<LayerCache>& caches);

 private:
  std::vector<std::unique_ptr<Layer>> layers_;
  Eigen::VectorXd params_;
  Eigen::VectorXd grads_;

  void bind_all();
};

struct MseResult {
  double loss{};
  Eigen::MatrixXd grad;  // d loss / d pred
};

/// Mean over the batch of the squared Euclidean row distance.
MseResult mse_loss(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target);

struct AdamState {
  double lr{1e-3};
  double beta1{0.9};
  double beta2{0.999};
  double eps{1e-8};
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long t{0};

  static AdamState create(int param_count, double lr);
};

/// One bias-corrected Adam update.
void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grads, AdamState& state);

struct TrainConfig {
  int epochs{500};
  int batch_size{16};
  double lr0{1e-3};
  double schedule_gamma{0.95};
  int schedule_step_epochs{150};
  std::uint64_t seed{0};
};

/// Multiplicative step schedule, lr0 * gamma^floor(epoch / step).
double schedule_lr(double lr0, double gamma, int step_epochs, int epoch);

struct TrainData {
  Eigen::MatrixXd x_train;
  Eigen::MatrixXd y_train;
  Eigen::MatrixXd x_val;  // may be empty
  Eigen::MatrixXd y_val;
};

struct TrainHistory {
  std::vector<double> train_loss;  // one entry per epoch
  std::vector<double> val_loss;    // empty when no validation split given
};

// Seeded mini-batch training with Adam and the step schedule. Shuffles with a
// per-run stream derived from config.seed, keeps the final short batch, and
// aborts with a diagnostic if the loss turns non-finite.
TrainHistory train(Network& net, const TrainData& data, const TrainConfig& config);

}  // namespace gwsurr
