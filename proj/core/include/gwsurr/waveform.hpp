#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace gwsurr {

/// Uniform time grid t_k = t_start + k*dt, k = 0..n_samples-1.
struct TimeGrid {
  double t_start{};
  double t_end{};
  int n_samples{};

  TimeGrid() = default;
  TimeGrid(double start, double end, int samples);

  double dt() const { return (t_end - t_start) / (n_samples - 1); }
  double time(int k) const { return t_start + k * dt(); }

  bool operator==(const TimeGrid&) const = default;
};

/// One complex strain time series h(t) = h_plus(t) - i*h_cross(t) on a grid.
struct ComplexWaveform {
  TimeGrid grid;
  Eigen::VectorXcd values;
};

// Discrete inner product <h1,h2> = sum_k conj(h1_k) h2_k * dt
// (left-Riemann discretization of the continuum scalar product).
std::complex<double> inner_product(const ComplexWaveform& h1, const ComplexWaveform& h2);

double waveform_norm(const ComplexWaveform& h);

/// Rescales to unit norm under the discrete inner product. Throws on zero norm.
ComplexWaveform normalize(const ComplexWaveform& h);

// Overlap Re<h,hs> and mismatch 1 - Re<h,hs>; both inputs are expected to be
// unit-norm on the same grid.
double overlap(const ComplexWaveform& h, const ComplexWaveform& hs);
double mismatch(const ComplexWaveform& h, const ComplexWaveform& hs);

/// Ground-truth waveform generator interface, parameterized by mass ratio q.
class FiducialModel {
 public:
  virtual ~FiducialModel() = default;
  virtual ComplexWaveform generate(double q, const TimeGrid& grid) const = 0;
};

/// Closed-form Newtonian chirp family.
///
/// With nu = q/(1+q)^2, mu = nu^(3/5) and tau(t) = t_c - t:
///   Phi(t;q) = -2 * (tau / (5 mu))^(5/8)
///   A(t;q)   =  mu * (tau / (5 mu))^(-1/4)
///   h(t;q)   =  A * exp(-i Phi), normalized to unit norm.
/// Valid for q >= 1 on grids with t_end < t_c.
class NewtonianChirpModel final : public FiducialModel {
 public:
  explicit NewtonianChirpModel(double t_c) : t_c_(t_c) {}

  double coalescence_time() const { return t_c_; }
  double tau(double t) const { return t_c_ - t; }

  static double symmetric_mass_ratio(double q);  // nu, in (0, 1/4]
  static double mass_scale(double q);            // mu = nu^(3/5)

  double phase(double q, double t) const;
  double amplitude(double q, double t) const;

  ComplexWaveform generate(double q, const TimeGrid& grid) const override;

 private:
  double t_c_;
};

/// A batch of unit-norm waveforms on one shared (possibly cropped) grid.
struct WaveformSet {
  std::vector<double> q_values;  // N
  Eigen::MatrixXcd waveforms;    // N x L, one waveform per row
  TimeGrid grid;                 // grid the rows live on (post-crop)
  TimeGrid gen_grid;             // grid waveforms were generated on
  int peak_index{};              // common |h| argmax of every row

  int size() const { return static_cast<int>(waveforms.rows()); }
  int length() const { return static_cast<int>(waveforms.cols()); }
  ComplexWaveform row(int i) const;
};

// Generates one waveform per q, aligns all at the peak of |h| (discrete
// argmax at a common sample index), crops to the shortest aligned length
// and re-normalizes each row.
WaveformSet build_training_set(const FiducialModel& model,
                               const std::vector<double>& q_values,
                               const TimeGrid& grid);

// Shift-and-crop a raw waveform so its |h| peak lands at `peak_index` of a
// window of `length` samples, then normalize. This is the row transform
// build_training_set applies, exposed so held-out waveforms can be prepared
// identically.
ComplexWaveform align_to(const ComplexWaveform& h, int peak_index, int length);

/// The grid defaults used across the toolkit (t_c = 5000 chirp).
TimeGrid default_grid();
double default_coalescence_time();

}  // namespace gwsurr
