#include "gwsurr/eim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gwsurr {

namespace {

int argmax_abs(const Eigen::VectorXcd& v) {
  int best = 0;
  double best_mag = -1.0;
  for (int k = 0; k < v.size(); ++k) {
    const double m = std::abs(v[k]);
    if (m > best_mag) {
      best_mag = m;
      best = k;
    }
  }
  return best;
}

}  // namespace

EimModel build_eim(const ReducedBasis& basis) {
  const int m = basis.size();
  if (m < 1) throw std::invalid_argument("build_eim: empty basis");

  // Greedy node selection: node k is the argmax of the residual between
  // basis vector k and its interpolant on the nodes selected so far.
  std::vector<int> selected;
  selected.reserve(m);
  selected.push_back(argmax_abs(basis.basis.row(0).transpose()));
  for (int k = 1; k < m; ++k) {
    Eigen::MatrixXcd v(k, k);
    Eigen::VectorXcd rhs(k);
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) v(r, c) = basis.basis(c, selected[r]);
      rhs[r] = basis.basis(k, selected[r]);
    }
    const Eigen::VectorXcd gamma = v.partialPivLu().solve(rhs);
    Eigen::VectorXcd residual = basis.basis.row(k).transpose();
    for (int c = 0; c < k; ++c) {
      residual -= gamma[c] * basis.basis.row(c).transpose();
    }
    const int node = argmax_abs(residual);
    if (std::find(selected.begin(), selected.end(), node) != selected.end()) {
      throw std::runtime_error("build_eim: duplicate node selected, basis is degenerate");
    }
    selected.push_back(node);
  }
  std::sort(selected.begin(), selected.end());

  // V_{ji} = e_i(T_j) with nodes in grid order; B = E V^{-1} where E holds
  // the basis vectors as columns.
  Eigen::MatrixXcd v(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) v(j, i) = basis.basis(i, selected[j]);
  }

  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(m - 1);
  const double cond = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
  if (!std::isfinite(cond) || cond > 1e14) {
    std::ostringstream msg;
    msg << "build_eim: node matrix numerically singular, condition estimate " << cond;
    throw std::runtime_error(msg.str());
  }

  EimModel eim;
  eim.node_indices = Eigen::Map<const Eigen::VectorXi>(selected.data(), m);
  // Solve V^T B^T = E^T so no explicit inverse is formed.
  eim.interpolant = v.transpose().partialPivLu().solve(basis.basis).transpose();
  eim.v_condition = cond;
  eim.grid = basis.grid;
  eim.gen_grid = basis.gen_grid;
  eim.peak_index = basis.peak_index;
  return eim;
}

Eigen::VectorXcd eim_coefficients(const ComplexWaveform& h, const EimModel& eim) {
  if (!(h.grid == eim.grid) || h.values.size() != eim.length()) {
    throw std::invalid_argument("eim_coefficients: waveform does not match interpolant grid");
  }
  Eigen::VectorXcd a(eim.size());
  for (int j = 0; j < eim.size(); ++j) a[j] = h.values[eim.node_indices[j]];
  return a;
}

ComplexWaveform eim_reconstruct(const Eigen::VectorXcd& a, const EimModel& eim) {
  if (a.size() != eim.size()) {
    throw std::invalid_argument("eim_reconstruct: coefficient count does not match node count");
  }
  return normalize(ComplexWaveform{eim.grid, eim.interpolant * a});
}

Eigen::MatrixXd stack_complex(const Eigen::MatrixXcd& rows) {
  Eigen::MatrixXd out(rows.rows(), 2 * rows.cols());
  out.leftCols(rows.cols()) = rows.real();
  out.rightCols(rows.cols()) = rows.imag();
  return out;
}

Eigen::MatrixXcd unstack_complex(const Eigen::MatrixXd& stacked) {
  if (stacked.cols() % 2 != 0) {
    throw std::invalid_argument("unstack_complex: odd column count");
  }
  const auto m = stacked.cols() / 2;
  Eigen::MatrixXcd out(stacked.rows(), m);
  out.real() = stacked.leftCols(m);
  out.imag() = stacked.rightCols(m);
  return out;
}

Eigen::MatrixXd CoefficientDataset::standardized() const {
  return (a.rowwise() - mean.transpose()).array().rowwise() / std.transpose().array();
}

Eigen::MatrixXd CoefficientDataset::destandardize(const Eigen::MatrixXd& rows) const {
  return (rows.array().rowwise() * std.transpose().array()).rowwise() + mean.transpose().array();
}

namespace {

CoefficientDataset extract_sorted(const WaveformSet& set, const EimModel& eim) {
  if (set.size() < 1) throw std::invalid_argument("build_dataset: empty waveform set");
  const int n = set.size();
  const int m = eim.size();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return set.q_values[i] < set.q_values[j];
  });

  Eigen::MatrixXcd coeffs(n, m);
  CoefficientDataset ds;
  ds.q.resize(n);
  for (int r = 0; r < n; ++r) {
    const int i = order[r];
    ds.q[r] = set.q_values[i];
    coeffs.row(r) = eim_coefficients(set.row(i), eim).transpose();
  }
  ds.a = stack_complex(coeffs);
  return ds;
}

}  // namespace

CoefficientDataset build_dataset(const WaveformSet& set, const EimModel& eim) {
  CoefficientDataset ds = extract_sorted(set, eim);
  const int n = ds.size();
  ds.mean = ds.a.colwise().mean();
  ds.std.resize(ds.stacked_dim());
  for (int c = 0; c < ds.stacked_dim(); ++c) {
    const double var = (ds.a.col(c).array() - ds.mean[c]).square().sum() / n;
    const double sd = std::sqrt(var);
    ds.std[c] = (sd > 1e-12) ? sd : 1.0;  // degenerate columns keep scale 1
  }
  return ds;
}

CoefficientDataset build_dataset(const WaveformSet& set, const EimModel& eim,
                                 const Eigen::VectorXd& mean,
                                 const Eigen::VectorXd& std) {
  CoefficientDataset ds = extract_sorted(set, eim);
  if (mean.size() != ds.stacked_dim() || std.size() != ds.stacked_dim()) {
    throw std::invalid_argument("build_dataset: statistics dimension mismatch");
  }
  ds.mean = mean;
  ds.std = std;
  return ds;
}

}  // namespace gwsurr
