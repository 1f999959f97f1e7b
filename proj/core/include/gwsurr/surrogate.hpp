#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gwsurr/eim.hpp"
#include "gwsurr/nnet.hpp"
#include "gwsurr/waveform.hpp"

namespace gwsurr {

/// Anything that maps a batch of mass ratios to complex node coefficients.
class CoefficientPredictor {
 public:
  virtual ~CoefficientPredictor() = default;
  virtual Eigen::MatrixXcd predict(const Eigen::VectorXd& q) const = 0;
  virtual int coeff_count() const = 0;
  virtual double q_lo() const = 0;
  virtual double q_hi() const = 0;
  virtual long parameter_count() const = 0;
  /// Activation/working-set bytes per input sample during a forward pass.
  virtual double bytes_per_sample() const = 0;
};

/// Neural coefficient regressor. With a spiral module the network consumes
/// raw q; baseline networks receive q affinely mapped to [-1, 1].
class RegressorModel final : public CoefficientPredictor {
 public:
  NetworkSpec spec;
  Network net;
  Eigen::VectorXd mean;  // destandardization statistics (training split)
  Eigen::VectorXd std;
  double q_min{};
  double q_max{};
  TrainConfig config;
  TrainHistory history;
  std::string eim_sha256;  // provenance of the interpolant it was fit against

  Eigen::MatrixXcd predict(const Eigen::VectorXd& q) const override;
  int coeff_count() const override { return static_cast<int>(mean.size()) / 2; }
  double q_lo() const override { return q_min; }
  double q_hi() const override { return q_max; }
  long parameter_count() const override { return net.param_count(); }
  double bytes_per_sample() const override;

  Eigen::MatrixXd map_inputs(const Eigen::VectorXd& q) const;
};

// Trains a regressor on standardized coefficients with MSE; the validation
// dataset is standardized with the training statistics and used for loss
// monitoring only.
RegressorModel train_regressor(const CoefficientDataset& train_ds,
                               const CoefficientDataset& val_ds, const NetworkSpec& spec,
                               const TrainConfig& config, double q_min, double q_max);

/// Forward pass, destandardize, unstack into complex coefficient rows.
Eigen::MatrixXcd predict_coefficients(const RegressorModel& model, const Eigen::VectorXd& q);

/// Natural cubic spline through (x_i, y_i) knots, one spline per column of y.
/// Second derivatives vanish at both ends; evaluation outside the knot range
/// continues the boundary cubic.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline() = default;
  NaturalCubicSpline(Eigen::VectorXd x, Eigen::MatrixXd y);

  Eigen::MatrixXd eval(const Eigen::VectorXd& x) const;
  const Eigen::VectorXd& knots() const { return x_; }
  const Eigen::MatrixXd& values() const { return y_; }

 private:
  Eigen::VectorXd x_;
  Eigen::MatrixXd y_;
  Eigen::MatrixXd m_;  // second derivatives at the knots
};

/// Per-coefficient cubic-spline baseline over the training q grid.
class SplineModel final : public CoefficientPredictor {
 public:
  SplineModel() = default;
  explicit SplineModel(NaturalCubicSpline spline) : spline_(std::move(spline)) {}

  Eigen::MatrixXcd predict(const Eigen::VectorXd& q) const override;
  int coeff_count() const override;
  double q_lo() const override { return spline_.knots()(0); }
  double q_hi() const override { return spline_.knots()(spline_.knots().size() - 1); }
  long parameter_count() const override;
  double bytes_per_sample() const override;

  const NaturalCubicSpline& spline() const { return spline_; }

 private:
  NaturalCubicSpline spline_;
};

/// Requires strictly increasing q with at least 4 knots.
SplineModel fit_spline_baseline(const CoefficientDataset& dataset);

/// Mismatch statistics of a predictor over a test set. Percentiles use the
/// nearest-rank convention.
struct MismatchReport {
  Eigen::VectorXd per_sample;  // in test_q order
  double min{};
  double median{};
  double p95{};
  double max{};
  double wall_time_per_batch{};  // seconds spent in the batched predict call
  int extrapolated_count{};
};

// For each test q: prepare the fiducial truth exactly as the training rows
// were prepared, reconstruct the prediction through the interpolant and
// record the mismatch. q outside the trained interval is flagged, not fatal.
MismatchReport evaluate(const CoefficientPredictor& predictor, const Eigen::VectorXd& test_q,
                        const FiducialModel& fiducial, const EimModel& eim);

/// Nearest-rank percentile of an unsorted sample, p in (0, 100].
double nearest_rank_percentile(Eigen::VectorXd values, double p);

struct BatchTiming {
  int batch_size{};
  double median_seconds{};
  double vectors_per_second{};  // coefficient vectors produced per second
};

struct BenchmarkReport {
  std::vector<BatchTiming> rows;
  int repetitions{};
  long parameter_count{};
  double bytes_per_sample{};
  double est_max_batch_4gib{};  // memory-budget estimate at a 4 GiB budget
};

// Median wall time over `repetitions` timed runs per batch size (after two
// warmup runs). Batch sizes must be positive.
BenchmarkReport benchmark_predictor(const CoefficientPredictor& predictor,
                                    const std::vector<int>& batch_sizes,
                                    int repetitions = 10);

}  // namespace gwsurr
