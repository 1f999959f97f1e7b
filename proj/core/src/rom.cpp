#include "gwsurr/rom.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gwsurr {

ComplexWaveform ReducedBasis::basis_waveform(int i) const {
  return ComplexWaveform{grid, basis.row(i).transpose()};
}

namespace {

void require_compatible(const ComplexWaveform& h, const ReducedBasis& basis) {
  if (!(h.grid == basis.grid) || h.values.size() != basis.length()) {
    throw std::invalid_argument("waveform length/grid does not match basis");
  }
}

// Squared residual norms for all rows against the current basis rows, from
// the explicit residual vectors.
Eigen::VectorXd direct_errors(const Eigen::MatrixXcd& rows,
                              const Eigen::MatrixXcd& basis, int m, double dt) {
  const auto active = basis.topRows(m);
  // coeffs(i,j) = <e_j, h_i>
  Eigen::MatrixXcd coeffs = rows * active.adjoint() * dt;
  Eigen::MatrixXcd residual = rows - coeffs * active;
  return residual.rowwise().squaredNorm() * dt;
}

int argmax_lowest(const Eigen::VectorXd& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

ReducedBasis greedy_build(const WaveformSet& train, double tol) {
  const int n = train.size();
  const int len = train.length();
  if (n < 1) throw std::invalid_argument("greedy_build: empty training set");
  if (!(tol > 0.0)) throw std::invalid_argument("greedy_build: tol must be > 0");
  const double dt = train.grid.dt();

  ReducedBasis rb;
  rb.tol = tol;
  rb.grid = train.grid;
  rb.gen_grid = train.gen_grid;
  rb.peak_index = train.peak_index;
  rb.basis.resize(n, len);

  // Seed: first waveform in q-order.
  {
    Eigen::VectorXcd seed = train.waveforms.row(0).transpose();
    const double norm = std::sqrt(seed.squaredNorm() * dt);
    if (!(norm > 0.0)) throw std::invalid_argument("greedy_build: zero-norm seed");
    rb.basis.row(0) = seed.transpose() / norm;
  }
  rb.greedy_q.push_back(train.q_values[0]);

  Eigen::VectorXd errors = direct_errors(train.waveforms, rb.basis, 1, dt);
  int m = 1;
  rb.greedy_errors.push_back(errors.maxCoeff());

  while (rb.greedy_errors.back() > tol) {
    if (m == n) {
      std::ostringstream msg;
      msg << "greedy_build: tolerance " << tol << " not reached after " << n
          << " iterations (achieved " << rb.greedy_errors.back() << ")";
      throw std::runtime_error(msg.str());
    }
    const int pick = argmax_lowest(errors);

    // Modified Gram-Schmidt with one re-orthogonalization pass.
    Eigen::VectorXcd v = train.waveforms.row(pick).transpose();
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < m; ++j) {
        // Eigen's dot() conjugates its left factor, so this is <e_j, v>.
        const std::complex<double> c = rb.basis.row(j).dot(v) * dt;
        v -= c * rb.basis.row(j).transpose();
      }
    }
    const double vnorm = std::sqrt(v.squaredNorm() * dt);
    if (!(vnorm > 0.0) || !std::isfinite(vnorm)) {
      std::ostringstream msg;
      msg << "greedy_build: degenerate training set, residual norm " << vnorm
          << " at iteration " << m << " (achieved error "
          << rb.greedy_errors.back() << ")";
      throw std::runtime_error(msg.str());
    }
    rb.basis.row(m) = v.transpose() / vnorm;
    rb.greedy_q.push_back(train.q_values[pick]);
    ++m;

    // Cheap running update; squared residuals shrink by the squared new
    // coefficient. Verified against the direct residual before stopping.
    for (int i = 0; i < n; ++i) {
      const std::complex<double> c = rb.basis.row(m - 1).dot(train.waveforms.row(i)) * dt;
      errors[i] = std::max(errors[i] - std::norm(c), 0.0);
    }
    double worst = errors.maxCoeff();
    if (worst <= tol) {
      errors = direct_errors(train.waveforms, rb.basis, m, dt);
      worst = errors.maxCoeff();
    }
    rb.greedy_errors.push_back(worst);
  }

  rb.basis.conservativeResize(m, len);
  return rb;
}

ProjectionCoefficients project(const ComplexWaveform& h, const ReducedBasis& basis) {
  require_compatible(h, basis);
  return ProjectionCoefficients{basis.basis.conjugate() * h.values * basis.grid.dt()};
}

double reconstruction_error(const ComplexWaveform& h, const ReducedBasis& basis) {
  require_compatible(h, basis);
  const Eigen::VectorXcd c = basis.basis.conjugate() * h.values * basis.grid.dt();
  const Eigen::VectorXcd residual = h.values - basis.basis.transpose() * c;
  return residual.squaredNorm() * basis.grid.dt();
}

Eigen::VectorXd projection_errors(const WaveformSet& set, const ReducedBasis& basis) {
  if (!(set.grid == basis.grid)) {
    throw std::invalid_argument("projection_errors: set grid does not match basis");
  }
  return direct_errors(set.waveforms, basis.basis, basis.size(), basis.grid.dt());
}

}  // namespace gwsurr
