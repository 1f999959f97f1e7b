#pragma once

#include <Eigen/Dense>

#include "gwsurr/rom.hpp"
#include "gwsurr/waveform.hpp"

namespace gwsurr {

/// Empirical interpolant: node indices T_j plus the L x m operator B mapping
/// node values a_j = h(T_j) back to the full waveform, h ~= B a.
///
/// Nodes are selected by residual argmax and stored in ascending grid order,
/// so coefficient 1 always refers to the earliest node in time.
struct EimModel {
  Eigen::VectorXi node_indices;  // m, strictly ascending
  Eigen::MatrixXcd interpolant;  // L x m
  double v_condition{};          // 2-norm condition of the node matrix V
  TimeGrid grid;
  TimeGrid gen_grid;
  int peak_index{};

  int size() const { return static_cast<int>(node_indices.size()); }
  int length() const { return static_cast<int>(interpolant.rows()); }
};

// Standard residual-argmax EIM on an orthonormal basis. Throws if the node
// matrix V is numerically singular (condition reported in the message).
EimModel build_eim(const ReducedBasis& basis);

/// a_j = h(T_j).
Eigen::VectorXcd eim_coefficients(const ComplexWaveform& h, const EimModel& eim);

/// normalize(B a). Exact at the nodes before normalization.
ComplexWaveform eim_reconstruct(const Eigen::VectorXcd& a, const EimModel& eim);

/// Regression dataset: mass ratios paired with stacked node coefficients.
///
/// Row i of `a` is [Re a_1 .. Re a_m, Im a_1 .. Im a_m] for q[i]; `mean` and
/// `std` are per-column standardization statistics (std forced to 1 for
/// constant columns).
struct CoefficientDataset {
  Eigen::VectorXd q;    // N, ascending
  Eigen::MatrixXd a;    // N x 2m, raw (un-standardized)
  Eigen::VectorXd mean; // 2m
  Eigen::VectorXd std;  // 2m

  int size() const { return static_cast<int>(a.rows()); }
  int coeff_count() const { return static_cast<int>(a.cols()) / 2; }
  int stacked_dim() const { return static_cast<int>(a.cols()); }

  Eigen::MatrixXd standardized() const;
  Eigen::MatrixXd destandardize(const Eigen::MatrixXd& rows) const;
};

// Extracts node coefficients for every waveform of the set, stacks real parts
// before imaginary parts and orders rows by q. The two-argument overload
// computes standardization statistics from this set; the four-argument one
// reuses externally supplied statistics (validation/test splits use the
// training statistics).
CoefficientDataset build_dataset(const WaveformSet& set, const EimModel& eim);
CoefficientDataset build_dataset(const WaveformSet& set, const EimModel& eim,
                                 const Eigen::VectorXd& mean,
                                 const Eigen::VectorXd& std);

// [Re | Im] stacking helpers shared by dataset and predictor code.
Eigen::MatrixXd stack_complex(const Eigen::MatrixXcd& rows);
Eigen::MatrixXcd unstack_complex(const Eigen::MatrixXd& stacked);

}  // namespace gwsurr
