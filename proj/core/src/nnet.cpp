#include "gwsurr/nnet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gwsurr {

std::uint64_t Rng::next_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::next_below: n must be > 0");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

void Rng::shuffle(std::vector<int>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = next_below(i);
    std::swap(v[i - 1], v[j]);
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over seed xor tagged stream
  std::uint64_t z = seed ^ (stream * 0x9E3779B97F4A7C15ULL);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

NetworkSpec NetworkSpec::parse(const std::string& text, int input_dim, int output_dim) {
  NetworkSpec spec;
  spec.input_dim = input_dim;
  spec.output_dim = output_dim;
  std::stringstream ss(text);
  std::string token;
  bool first = true;
  while (std::getline(ss, token, '-')) {
    if (first && (token == "S" || token == "s")) {
      spec.use_spiral = true;
      first = false;
      continue;
    }
    first = false;
    std::size_t pos = 0;
    int width = 0;
    try {
      width = std::stoi(token, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("NetworkSpec: bad token '" + token + "' in '" + text + "'");
    }
    if (pos != token.size() || width <= 0) {
      throw std::invalid_argument("NetworkSpec: bad token '" + token + "' in '" + text + "'");
    }
    spec.layer_widths.push_back(width);
  }
  if (spec.layer_widths.empty() && !spec.use_spiral) {
    throw std::invalid_argument("NetworkSpec: empty spec string '" + text + "'");
  }
  if (spec.use_spiral && input_dim != 1) {
    throw std::invalid_argument("NetworkSpec: spiral module requires scalar input");
  }
  return spec;
}

std::string NetworkSpec::to_string() const {
  std::string out = use_spiral ? "S" : "";
  for (int w : layer_widths) {
    if (!out.empty()) out += "-";
    out += std::to_string(w);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Layers
// ---------------------------------------------------------------------------

DenseLayer::DenseLayer(int in, int out) : in_(in), out_(out) {
  if (in <= 0 || out <= 0) throw std::invalid_argument("DenseLayer: widths must be positive");
}

void DenseLayer::bind(double* params, double* grads) {
  p_ = params;
  g_ = grads;
}

Eigen::Map<const Eigen::MatrixXd> DenseLayer::weight() const {
  return {p_, out_, in_};
}

Eigen::Map<const Eigen::VectorXd> DenseLayer::bias() const {
  return {p_ + out_ * in_, out_};
}

void DenseLayer::init_params(Rng& rng) {
  const double limit = std::sqrt(6.0 / (in_ + out_));
  for (int i = 0; i < out_ * in_; ++i) p_[i] = rng.uniform(-limit, limit);
  for (int i = 0; i < out_; ++i) p_[out_ * in_ + i] = 0.0;
}

Eigen::MatrixXd DenseLayer::forward(const Eigen::MatrixXd& x, LayerCache* cache) const {
  if (x.cols() != in_) throw std::invalid_argument("DenseLayer: input width mismatch");
  const Eigen::Map<const Eigen::MatrixXd> w(p_, out_, in_);
  const Eigen::Map<const Eigen::VectorXd> b(p_ + out_ * in_, out_);
  Eigen::MatrixXd y(x.rows(), out_);
  // One matrix-vector product per sample keeps the arithmetic identical for
  // every batch size.
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    y.row(i) = (w * x.row(i).transpose() + b).transpose();
  }
  if (cache != nullptr) cache->input = x;
  return y;
}

Eigen::MatrixXd DenseLayer::backward(const Eigen::MatrixXd& grad_out, const LayerCache& cache) {
  if (grad_out.cols() != out_ || cache.input.cols() != in_ ||
      grad_out.rows() != cache.input.rows()) {
    throw std::invalid_argument("DenseLayer: stale cache or gradient shape mismatch");
  }
  Eigen::Map<Eigen::MatrixXd> gw(g_, out_, in_);
  Eigen::Map<Eigen::VectorXd> gb(g_ + out_ * in_, out_);
  gw.noalias() += grad_out.transpose() * cache.input;
  gb.noalias() += grad_out.colwise().sum().transpose();
  const Eigen::Map<const Eigen::MatrixXd> w(p_, out_, in_);
  return grad_out * w;
}

void PReLULayer::bind(double* params, double* grads) {
  p_ = params;
  g_ = grads;
}

void PReLULayer::init_params(Rng&) {
  for (int i = 0; i < width_; ++i) p_[i] = 0.25;
}

Eigen::MatrixXd PReLULayer::forward(const Eigen::MatrixXd& x, LayerCache* cache) const {
  if (x.cols() != width_) throw std::invalid_argument("PReLULayer: input width mismatch");
  Eigen::MatrixXd y(x.rows(), width_);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < width_; ++j) {
      const double v = x(i, j);
      y(i, j) = v >= 0.0 ? v : p_[j] * v;
    }
  }
  if (cache != nullptr) cache->input = x;
  return y;
}

Eigen::MatrixXd PReLULayer::backward(const Eigen::MatrixXd& grad_out, const LayerCache& cache) {
  if (grad_out.cols() != width_ || cache.input.cols() != width_ ||
      grad_out.rows() != cache.input.rows()) {
    throw std::invalid_argument("PReLULayer: stale cache or gradient shape mismatch");
  }
  Eigen::MatrixXd gx(grad_out.rows(), width_);
  for (Eigen::Index i = 0; i < grad_out.rows(); ++i) {
    for (int j = 0; j < width_; ++j) {
      const double v = cache.input(i, j);
      if (v >= 0.0) {
        gx(i, j) = grad_out(i, j);
      } else {
        gx(i, j) = grad_out(i, j) * p_[j];
        g_[j] += grad_out(i, j) * v;
      }
    }
  }
  return gx;
}

void SpiralLayer::bind(double* params, double* grads) {
  p_ = params;
  g_ = grads;
}

void SpiralLayer::init_params(Rng&) {
  p_[0] = init_.w;
  p_[1] = init_.b;
  p_[2] = init_.alpha;
  p_[3] = init_.beta;
}

SpiralParams SpiralLayer::params() const {
  return SpiralParams{p_[0], p_[1], p_[2], p_[3]};
}

Eigen::MatrixXd SpiralLayer::forward(const Eigen::MatrixXd& x, LayerCache* cache) const {
  if (x.cols() != 1) throw std::invalid_argument("SpiralLayer: input must be a column of q");
  SpiralCache sc;
  Eigen::MatrixXd y = spiral_forward(x.col(0), params(), cache != nullptr ? &sc : nullptr);
  if (cache != nullptr) {
    cache->input = x;
    cache->aux = sc.theta;
  }
  return y;
}

Eigen::MatrixXd SpiralLayer::backward(const Eigen::MatrixXd& grad_out, const LayerCache& cache) {
  if (cache.input.rows() != grad_out.rows() || grad_out.cols() != 2) {
    throw std::invalid_argument("SpiralLayer: stale cache or gradient shape mismatch");
  }
  SpiralCache sc{cache.input.col(0), cache.aux.col(0)};
  Eigen::VectorXd gq;
  const SpiralGradients g = spiral_backward(grad_out, sc, params(), &gq);
  g_[0] += g.w;
  g_[1] += g.b;
  g_[2] += g.alpha;
  g_[3] += g.beta;
  return gq;
}

// ---------------------------------------------------------------------------
// Network
// ---------------------------------------------------------------------------

Network Network::build(const NetworkSpec& spec, const SpiralParams& spiral_init) {
  Network net;
  int width = spec.input_dim;
  if (spec.use_spiral) {
    net.layers_.push_back(std::make_unique<SpiralLayer>(spiral_init));
    width = 2;
  }
  for (int hidden : spec.layer_widths) {
    net.layers_.push_back(std::make_unique<DenseLayer>(width, hidden));
    net.layers_.push_back(std::make_unique<PReLULayer>(hidden));
    width = hidden;
  }
  net.layers_.push_back(std::make_unique<DenseLayer>(width, spec.output_dim));

  int count = 0;
  for (const auto& layer : net.layers_) count += layer->param_count();
  net.params_ = Eigen::VectorXd::Zero(count);
  net.grads_ = Eigen::VectorXd::Zero(count);
  net.bind_all();
  return net;
}

void Network::bind_all() {
  int offset = 0;
  for (auto& layer : layers_) {
    layer->bind(params_.data() + offset, grads_.data() + offset);
    offset += layer->param_count();
  }
}

void Network::init_params(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 1));
  for (auto& layer : layers_) layer->init_params(rng);
}

int Network::input_width() const {
  if (layers_.empty()) throw std::logic_error("Network: empty");
  return layers_.front()->in_width();
}

int Network::output_width() const {
  if (layers_.empty()) throw std::logic_error("Network: empty");
  return layers_.back()->out_width();
}

Eigen::MatrixXd Network::forward(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd h = x;
  for (const auto& layer : layers_) h = layer->forward(h, nullptr);
  return h;
}

Eigen::MatrixXd Network::forward(const Eigen::MatrixXd& x,
                                 std::vector<LayerCache>& caches) const {
  caches.resize(layers_.size());
  Eigen::MatrixXd h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    h = layers_[i]->forward(h, &caches[i]);
  }
  return h;
}

Eigen::MatrixXd Network::forward_prefix(const Eigen::MatrixXd& x, int layer_count) const {
  if (layer_count < 0 || layer_count > static_cast<int>(layers_.size())) {
    throw std::invalid_argument("Network::forward_prefix: layer count out of range");
  }
  Eigen::MatrixXd h = x;
  for (int i = 0; i < layer_count; ++i) h = layers_[i]->forward(h, nullptr);
  return h;
}

Eigen::MatrixXd Network::backward(const Eigen::MatrixXd& grad_out,
                                  const std::vector<LayerCache>& caches) {
  if (caches.size() != layers_.size()) {
    throw std::invalid_argument("Network::backward: cache does not match forward pass");
  }
  Eigen::MatrixXd g = grad_out;
  for (int i = static_cast<int>(layers_.size()) - 1; i >= 0; --i) {
    g = layers_[i]->backward(g, caches[i]);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Loss, optimizer, training loop
// ---------------------------------------------------------------------------

MseResult mse_loss(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
    throw std::invalid_argument("mse_loss: shape mismatch");
  }
  const double n = static_cast<double>(pred.rows());
  MseResult r;
  r.grad = 2.0 * (pred - target) / n;
  r.loss = (pred - target).squaredNorm() / n;
  return r;
}

AdamState AdamState::create(int param_count, double lr) {
  AdamState s;
  s.lr = lr;
  s.m = Eigen::VectorXd::Zero(param_count);
  s.v = Eigen::VectorXd::Zero(param_count);
  return s;
}

void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grads, AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw std::invalid_argument("adam_step: buffer size mismatch");
  }
  state.t += 1;
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * grads;
  state.v = state.beta2 * state.v + (1.0 - state.beta2) * grads.cwiseProduct(grads);
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  params -= state.lr *
            ((state.m / c1).array() / ((state.v / c2).array().sqrt() + state.eps)).matrix();
}

double schedule_lr(double lr0, double gamma, int step_epochs, int epoch) {
  if (step_epochs <= 0) throw std::invalid_argument("schedule_lr: step must be positive");
  double lr = lr0;
  for (int k = 0; k < epoch / step_epochs; ++k) lr *= gamma;
  return lr;
}

TrainHistory train(Network& net, const TrainData& data, const TrainConfig& config) {
  if (config.batch_size <= 0) throw std::invalid_argument("train: batch_size must be positive");
  if (config.epochs < 0) throw std::invalid_argument("train: epochs must be >= 0");
  if (data.x_train.rows() != data.y_train.rows() || data.x_train.rows() == 0) {
    throw std::invalid_argument("train: empty or inconsistent training split");
  }
  const bool has_val = data.x_val.rows() > 0;
  if (has_val && data.x_val.rows() != data.y_val.rows()) {
    throw std::invalid_argument("train: inconsistent validation split");
  }

  TrainHistory history;
  if (config.epochs == 0) return history;

  const int n = static_cast<int>(data.x_train.rows());
  AdamState adam = AdamState::create(net.param_count(), config.lr0);
  Rng shuffle_rng(derive_seed(config.seed, 2));
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::vector<LayerCache> caches;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    adam.lr = schedule_lr(config.lr0, config.schedule_gamma, config.schedule_step_epochs, epoch);
    shuffle_rng.shuffle(order);

    double epoch_loss = 0.0;
    for (int start = 0; start < n; start += config.batch_size) {
      const int count = std::min(config.batch_size, n - start);
      Eigen::MatrixXd xb(count, data.x_train.cols());
      Eigen::MatrixXd yb(count, data.y_train.cols());
      for (int i = 0; i < count; ++i) {
        xb.row(i) = data.x_train.row(order[start + i]);
        yb.row(i) = data.y_train.row(order[start + i]);
      }
      const Eigen::MatrixXd pred = net.forward(xb, caches);
      const MseResult mse = mse_loss(pred, yb);
      if (!std::isfinite(mse.loss)) {
        std::ostringstream msg;
        msg << "train: non-finite loss at epoch " << epoch << ", batch offset " << start;
        throw std::runtime_error(msg.str());
      }
      net.zero_grads();
      net.backward(mse.grad, caches);
      adam_step(net.params(), net.grads(), adam);
      epoch_loss += mse.loss * count;
    }
    history.train_loss.push_back(epoch_loss / n);

    if (has_val) {
      const Eigen::MatrixXd pred = net.forward(data.x_val);
      history.val_loss.push_back(mse_loss(pred, data.y_val).loss);
    }
  }
  return history;
}

}  // namespace gwsurr
