#pragma once

#include <Eigen/Dense>

#include "gwsurr/eim.hpp"
#include "gwsurr/nnet.hpp"

namespace gwsurr {

/// Symmetric dense autoencoder over standardized coefficient rows.
/// Architecture D -> hidden... -> d -> reversed hidden... -> D with a PReLU
/// after every layer except the final linear one.
struct AutoencoderModel {
  Network net;
  int input_dim{};
  int latent_dim{};
  std::vector<int> hidden_widths;
  int encoder_layer_count{};
  Eigen::VectorXd mean;  // carried dataset statistics
  Eigen::VectorXd std;
  TrainHistory history;
  double final_mse{};
  TrainConfig config;
};

// Trains a d-bottleneck autoencoder on the standardized coefficients, input
// equal to target. Default hidden stack is two layers of 128 on each side.
AutoencoderModel train_autoencoder(const CoefficientDataset& dataset, int latent_dim,
                                   const TrainConfig& config,
                                   std::vector<int> hidden_widths = {128, 128});

/// Bottleneck activations, one row per dataset row (in dataset order).
Eigen::MatrixXd encode(const AutoencoderModel& model, const CoefficientDataset& dataset);

/// Reconstruction MSE of the autoencoder over the dataset (standardized space).
double reconstruction_mse(const AutoencoderModel& model, const CoefficientDataset& dataset);

/// Linear baseline: top-k principal components of the standardized data.
struct PcaModel {
  Eigen::VectorXd mean;        // D, mean of the (standardized) input rows
  Eigen::MatrixXd components;  // k x D, orthonormal rows
  Eigen::VectorXd singular_values;
  double mse{};
  bool rank_deficient{false};
};

// PCA via SVD of the mean-centered standardized data matrix. When the data
// has rank < k the remaining components are padded from the trailing singular
// vectors and `rank_deficient` is set (a warning is printed to stderr).
PcaModel pca_fit(const CoefficientDataset& dataset, int k);

Eigen::MatrixXd pca_project(const PcaModel& model, const Eigen::MatrixXd& rows);

/// Spiral-structure diagnostics of a 2-D latent cloud ordered by q.
struct LatentDiagnostics {
  Eigen::MatrixXd points;           // N x 2
  Eigen::VectorXd unwrapped_angle;  // atan2 about the centroid, unwrapped in q order
  Eigen::VectorXd radius;           // distance from the centroid
  double angle_q_spearman{};
  double linear_fit_r2{};
};

// Computes centroid angles, unwraps them along increasing q and reports the
// Spearman correlation plus least-squares R^2 between angle and q. Requires
// at least 3 points (rows ordered by q).
LatentDiagnostics latent_spiral_diagnostics(const Eigen::MatrixXd& points,
                                            const Eigen::VectorXd& q_values);

/// Spearman rank correlation (average ranks on ties).
double spearman_correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace gwsurr
