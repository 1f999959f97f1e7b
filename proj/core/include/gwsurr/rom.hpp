#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gwsurr/waveform.hpp"

namespace gwsurr {

/// Orthonormal reduced basis produced by the greedy sweep.
///
/// Rows of `basis` are orthonormal under the discrete inner product of the
/// grid they live on. `greedy_errors[k]` is the worst squared projection
/// error over the training set once the basis holds k+1 vectors.
struct ReducedBasis {
  Eigen::MatrixXcd basis;  // m x L
  std::vector<double> greedy_q;
  std::vector<double> greedy_errors;
  double tol{};
  TimeGrid grid;
  TimeGrid gen_grid;
  int peak_index{};

  int size() const { return static_cast<int>(basis.rows()); }
  int length() const { return static_cast<int>(basis.cols()); }
  ComplexWaveform basis_waveform(int i) const;
};

struct ProjectionCoefficients {
  Eigen::VectorXcd c;
};

// Greedy basis construction: seeded with the first training waveform, each
// iteration appends the training waveform with the worst squared projection
// error (lowest index wins ties), orthonormalized by modified Gram-Schmidt
// with one re-orthogonalization pass. Stops once the worst error <= tol.
// Throws if the training set is exhausted without reaching tol.
ReducedBasis greedy_build(const WaveformSet& train, double tol);

/// c_i = <e_i, h>.
ProjectionCoefficients project(const ComplexWaveform& h, const ReducedBasis& basis);

/// Squared norm of the projection residual, ||h - sum c_i e_i||^2.
double reconstruction_error(const ComplexWaveform& h, const ReducedBasis& basis);

/// Squared projection residual of every row of a set, computed directly from
/// the residual vectors (not from running estimates).
Eigen::VectorXd projection_errors(const WaveformSet& set, const ReducedBasis& basis);

}  // namespace gwsurr
