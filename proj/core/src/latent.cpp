#include "gwsurr/latent.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace gwsurr {

namespace {

NetworkSpec autoencoder_spec(int input_dim, int latent_dim, const std::vector<int>& hidden) {
  NetworkSpec spec;
  spec.input_dim = input_dim;
  spec.output_dim = input_dim;
  spec.layer_widths = hidden;
  spec.layer_widths.push_back(latent_dim);
  for (auto it = hidden.rbegin(); it != hidden.rend(); ++it) {
    spec.layer_widths.push_back(*it);
  }
  return spec;
}

}  // namespace

AutoencoderModel train_autoencoder(const CoefficientDataset& dataset, int latent_dim,
                                   const TrainConfig& config, std::vector<int> hidden_widths) {
  if (dataset.size() < 1) throw std::invalid_argument("train_autoencoder: empty dataset");
  if (latent_dim < 1) throw std::invalid_argument("train_autoencoder: latent_dim must be >= 1");

  AutoencoderModel model;
  model.input_dim = dataset.stacked_dim();
  model.latent_dim = latent_dim;
  model.hidden_widths = hidden_widths;
  // dense+PReLU per encoder stage, bottleneck included
  model.encoder_layer_count = 2 * (static_cast<int>(hidden_widths.size()) + 1);
  model.mean = dataset.mean;
  model.std = dataset.std;
  model.config = config;

  model.net = Network::build(autoencoder_spec(model.input_dim, latent_dim, hidden_widths));
  model.net.init_params(config.seed);

  TrainData data;
  data.x_train = dataset.standardized();
  data.y_train = data.x_train;
  model.history = train(model.net, data, config);
  model.final_mse = reconstruction_mse(model, dataset);
  return model;
}

Eigen::MatrixXd encode(const AutoencoderModel& model, const CoefficientDataset& dataset) {
  if (dataset.stacked_dim() != model.input_dim) {
    throw std::invalid_argument("encode: dataset width does not match model");
  }
  return model.net.forward_prefix(dataset.standardized(), model.encoder_layer_count);
}

double reconstruction_mse(const AutoencoderModel& model, const CoefficientDataset& dataset) {
  const Eigen::MatrixXd x = dataset.standardized();
  return mse_loss(model.net.forward(x), x).loss;
}

PcaModel pca_fit(const CoefficientDataset& dataset, int k) {
  const int n = dataset.size();
  const int dim = dataset.stacked_dim();
  if (k < 1 || n < k) throw std::invalid_argument("pca_fit: need at least k rows");

  const Eigen::MatrixXd x = dataset.standardized();
  PcaModel model;
  model.mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - model.mean.transpose();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const int rank_limit = std::min<int>(n, dim);
  if (k > rank_limit) throw std::invalid_argument("pca_fit: k exceeds matrix rank bound");

  model.components = svd.matrixV().leftCols(k).transpose();
  model.singular_values = svd.singularValues().head(k);

  const double s1 = svd.singularValues()(0);
  const double sk = svd.singularValues()(k - 1);
  if (!(sk > 1e-12 * std::max(s1, 1.0))) {
    model.rank_deficient = true;
    std::cerr << "pca_fit: data rank < " << k
              << ", padding components from trailing singular vectors\n";
  }

  const Eigen::MatrixXd recon =
      (centered * model.components.transpose()) * model.components;
  model.mse = (centered - recon).squaredNorm() / n;
  return model;
}

Eigen::MatrixXd pca_project(const PcaModel& model, const Eigen::MatrixXd& rows) {
  if (rows.cols() != model.mean.size()) {
    throw std::invalid_argument("pca_project: width mismatch");
  }
  return (rows.rowwise() - model.mean.transpose()) * model.components.transpose();
}

namespace {

Eigen::VectorXd ranks_of(const Eigen::VectorXd& v) {
  const auto n = v.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return v[a] < v[b]; });
  Eigen::VectorXd ranks(n);
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (Eigen::Index k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double mx = x.mean();
  const double my = y.mean();
  const Eigen::VectorXd dx = x.array() - mx;
  const Eigen::VectorXd dy = y.array() - my;
  const double denom = std::sqrt(dx.squaredNorm() * dy.squaredNorm());
  if (denom == 0.0) return 0.0;
  return dx.dot(dy) / denom;
}

}  // namespace

double spearman_correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("spearman_correlation: need two equal-length vectors");
  }
  return pearson(ranks_of(x), ranks_of(y));
}

LatentDiagnostics latent_spiral_diagnostics(const Eigen::MatrixXd& points,
                                            const Eigen::VectorXd& q_values) {
  const auto n = points.rows();
  if (n < 3) throw std::invalid_argument("latent_spiral_diagnostics: need at least 3 points");
  if (points.cols() != 2 || q_values.size() != n) {
    throw std::invalid_argument("latent_spiral_diagnostics: shape mismatch");
  }

  LatentDiagnostics diag;
  diag.points = points;
  const Eigen::RowVector2d center = points.colwise().mean();

  diag.unwrapped_angle.resize(n);
  diag.radius.resize(n);
  double prev = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double dx = points(i, 0) - center(0);
    const double dy = points(i, 1) - center(1);
    diag.radius[i] = std::hypot(dx, dy);
    double angle = std::atan2(dy, dx);
    if (i > 0) {
      // unwrap: shift by whole turns so successive angles differ by < pi
      while (angle - prev > std::numbers::pi) angle -= 2.0 * std::numbers::pi;
      while (angle - prev < -std::numbers::pi) angle += 2.0 * std::numbers::pi;
    }
    diag.unwrapped_angle[i] = angle;
    prev = angle;
  }

  diag.angle_q_spearman = spearman_correlation(diag.unwrapped_angle, q_values);

  // least-squares line angle ~ a + b q
  const double mq = q_values.mean();
  const double ma = diag.unwrapped_angle.mean();
  const Eigen::VectorXd dq = q_values.array() - mq;
  const Eigen::VectorXd da = diag.unwrapped_angle.array() - ma;
  const double ss_tot = da.squaredNorm();
  if (ss_tot < 1e-300) {
    diag.linear_fit_r2 = 1.0;  // constant angle fits itself
  } else {
    const double slope = dq.dot(da) / dq.squaredNorm();
    const double ss_res = (da - slope * dq).squaredNorm();
    diag.linear_fit_r2 = 1.0 - ss_res / ss_tot;
  }
  return diag;
}

}  // namespace gwsurr
