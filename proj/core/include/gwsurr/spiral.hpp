#pragma once

#include <Eigen/Dense>

namespace gwsurr {

/// Learnable spiral input transform.
///
/// Maps a scalar q to an angle theta = w*q + b and then to the plane point
///   s_x = (alpha + beta*theta) * cos(theta)
///   s_y = (alpha + beta*theta) * sin(theta).
/// All four parameters are unconstrained and carry exact analytic gradients.
struct SpiralParams {
  double w{};
  double b{};
  double alpha{};
  double beta{};
};

struct SpiralCache {
  Eigen::VectorXd q;
  Eigen::VectorXd theta;
};

struct SpiralGradients {
  double w{};
  double b{};
  double alpha{};
  double beta{};
};

/// Batched forward map, one (s_x, s_y) row per input q.
Eigen::MatrixXd spiral_forward(const Eigen::VectorXd& q, const SpiralParams& p,
                               SpiralCache* cache = nullptr);

// Parameter gradients summed over the batch, given the upstream gradient with
// respect to (s_x, s_y). When grad_q is non-null the gradient with respect to
// the inputs is written there as well.
SpiralGradients spiral_backward(const Eigen::MatrixXd& grad_out, const SpiralCache& cache,
                                const SpiralParams& p, Eigen::VectorXd* grad_q = nullptr);

// Default initialization for a q-interval: theta spans three full turns over
// [q_min, q_max] and the radius roughly doubles across the range.
SpiralParams default_spiral_init(double q_min, double q_max);

}  // namespace gwsurr
