#include "gwsurr/waveform.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gwsurr {

TimeGrid::TimeGrid(double start, double end, int samples)
    : t_start(start), t_end(end), n_samples(samples) {
  if (!(t_start < t_end)) {
    throw std::invalid_argument("TimeGrid: t_start must be < t_end");
  }
  if (n_samples < 2) {
    throw std::invalid_argument("TimeGrid: n_samples must be >= 2");
  }
}

namespace {

void require_same_grid(const ComplexWaveform& a, const ComplexWaveform& b) {
  if (!(a.grid == b.grid) || a.values.size() != b.values.size()) {
    throw std::invalid_argument("waveform grids do not match");
  }
}

}  // namespace

std::complex<double> inner_product(const ComplexWaveform& h1, const ComplexWaveform& h2) {
  require_same_grid(h1, h2);
  // Eigen's dot() conjugates the left factor.
  return h1.values.dot(h2.values) * h1.grid.dt();
}

double waveform_norm(const ComplexWaveform& h) {
  return std::sqrt(h.values.squaredNorm() * h.grid.dt());
}

ComplexWaveform normalize(const ComplexWaveform& h) {
  const double n = waveform_norm(h);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::domain_error("normalize: zero or non-finite waveform norm");
  }
  return ComplexWaveform{h.grid, h.values / n};
}

double overlap(const ComplexWaveform& h, const ComplexWaveform& hs) {
  require_same_grid(h, hs);
  return inner_product(h, hs).real();
}

double mismatch(const ComplexWaveform& h, const ComplexWaveform& hs) {
  return 1.0 - overlap(h, hs);
}

double NewtonianChirpModel::symmetric_mass_ratio(double q) {
  return q / ((1.0 + q) * (1.0 + q));
}

double NewtonianChirpModel::mass_scale(double q) {
  return std::pow(symmetric_mass_ratio(q), 3.0 / 5.0);
}

double NewtonianChirpModel::phase(double q, double t) const {
  const double mu = mass_scale(q);
  return -2.0 * std::pow(tau(t) / (5.0 * mu), 5.0 / 8.0);
}

double NewtonianChirpModel::amplitude(double q, double t) const {
  const double mu = mass_scale(q);
  return mu * std::pow(tau(t) / (5.0 * mu), -0.25);
}

ComplexWaveform NewtonianChirpModel::generate(double q, const TimeGrid& grid) const {
  if (q < 1.0) {
    throw std::domain_error("NewtonianChirpModel: q must be >= 1");
  }
  if (!(t_c_ > grid.t_end)) {
    std::ostringstream msg;
    msg << "NewtonianChirpModel: tau <= 0 on grid (t_c=" << t_c_
        << ", t_end=" << grid.t_end << ")";
    throw std::domain_error(msg.str());
  }
  ComplexWaveform h{grid, Eigen::VectorXcd(grid.n_samples)};
  for (int k = 0; k < grid.n_samples; ++k) {
    const double t = grid.time(k);
    const double p = phase(q, t);
    const double a = amplitude(q, t);
    h.values[k] = std::complex<double>(a * std::cos(p), -a * std::sin(p));
  }
  return normalize(h);
}

ComplexWaveform WaveformSet::row(int i) const {
  return ComplexWaveform{grid, waveforms.row(i).transpose()};
}

namespace {

int peak_of(const Eigen::VectorXcd& v) {
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

TimeGrid cropped_grid(const TimeGrid& g, int length) {
  return TimeGrid(g.t_start, g.t_start + (length - 1) * g.dt(), length);
}

}  // namespace

ComplexWaveform align_to(const ComplexWaveform& h, int peak_index, int length) {
  const int peak = peak_of(h.values);
  const int offset = peak - peak_index;
  if (offset < 0 || offset + length > h.values.size()) {
    std::ostringstream msg;
    msg << "align_to: waveform with peak at sample " << peak
        << " cannot be shifted to peak index " << peak_index << " with length "
        << length;
    throw std::invalid_argument(msg.str());
  }
  ComplexWaveform out{cropped_grid(h.grid, length), h.values.segment(offset, length)};
  return normalize(out);
}

WaveformSet build_training_set(const FiducialModel& model,
                               const std::vector<double>& q_values,
                               const TimeGrid& grid) {
  if (q_values.empty()) {
    throw std::invalid_argument("build_training_set: empty q_values");
  }
  const int n = static_cast<int>(q_values.size());
  std::vector<ComplexWaveform> raw;
  raw.reserve(n);
  std::vector<int> peaks(n);
  for (int i = 0; i < n; ++i) {
    raw.push_back(model.generate(q_values[i], grid));
    if (!(raw[i].grid == grid)) {
      throw std::invalid_argument("build_training_set: model produced inconsistent grid");
    }
    peaks[i] = peak_of(raw[i].values);
  }

  // Common peak index: earliest peak across the set; each waveform is shifted
  // left by (peak_i - peak*) and the tail cropped to the shortest remainder.
  int peak_star = peaks[0];
  for (int p : peaks) peak_star = std::min(peak_star, p);
  int length = grid.n_samples;
  for (int i = 0; i < n; ++i) {
    length = std::min(length, grid.n_samples - (peaks[i] - peak_star));
  }

  WaveformSet set;
  set.q_values = q_values;
  set.gen_grid = grid;
  set.grid = cropped_grid(grid, length);
  set.peak_index = peak_star;
  set.waveforms.resize(n, length);
  for (int i = 0; i < n; ++i) {
    set.waveforms.row(i) = align_to(raw[i], peak_star, length).values.transpose();
  }
  return set;
}

TimeGrid default_grid() { return TimeGrid(0.0, 4990.0, 4096); }

double default_coalescence_time() { return 5000.0; }

}  // namespace gwsurr
