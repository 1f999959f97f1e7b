#include "gwsurr/surrogate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace gwsurr {

namespace {

constexpr int kPredictChunk = 256;

Eigen::MatrixXd standardize_with(const Eigen::MatrixXd& rows, const Eigen::VectorXd& mean,
                                 const Eigen::VectorXd& std) {
  return (rows.rowwise() - mean.transpose()).array().rowwise() / std.transpose().array();
}

}  // namespace

Eigen::MatrixXd RegressorModel::map_inputs(const Eigen::VectorXd& q) const {
  Eigen::MatrixXd x(q.size(), 1);
  if (spec.use_spiral) {
    x.col(0) = q;  // the affine (w, b) of the spiral absorbs scaling
  } else {
    x.col(0) = (2.0 * (q.array() - q_min) / (q_max - q_min)) - 1.0;
  }
  return x;
}

Eigen::MatrixXcd RegressorModel::predict(const Eigen::VectorXd& q) const {
  const auto n = q.size();
  const int m = coeff_count();
  Eigen::MatrixXcd out(n, m);
  for (Eigen::Index start = 0; start < n; start += kPredictChunk) {
    const auto count = std::min<Eigen::Index>(kPredictChunk, n - start);
    const Eigen::MatrixXd x = map_inputs(q.segment(start, count));
    const Eigen::MatrixXd y = net.forward(x);
    const Eigen::MatrixXd raw =
        (y.array().rowwise() * std.transpose().array()).rowwise() + mean.transpose().array();
    out.middleRows(start, count) = unstack_complex(raw);
  }
  return out;
}

double RegressorModel::bytes_per_sample() const {
  double widths = net.input_width();
  for (int i = 0; i < net.layer_count(); ++i) widths += net.layer(i).out_width();
  return 8.0 * widths;
}

RegressorModel train_regressor(const CoefficientDataset& train_ds,
                               const CoefficientDataset& val_ds, const NetworkSpec& spec,
                               const TrainConfig& config, double q_min, double q_max) {
  if (!(q_min < q_max)) throw std::invalid_argument("train_regressor: bad q interval");
  if (spec.output_dim != train_ds.stacked_dim()) {
    throw std::invalid_argument("train_regressor: spec output width != dataset width");
  }

  RegressorModel model;
  model.spec = spec;
  model.mean = train_ds.mean;
  model.std = train_ds.std;
  model.q_min = q_min;
  model.q_max = q_max;
  model.config = config;

  model.net = Network::build(spec, default_spiral_init(q_min, q_max));
  model.net.init_params(config.seed);

  TrainData data;
  data.x_train = model.map_inputs(train_ds.q);
  data.y_train = train_ds.standardized();
  if (val_ds.size() > 0) {
    if (val_ds.stacked_dim() != train_ds.stacked_dim()) {
      throw std::invalid_argument("train_regressor: validation width mismatch");
    }
    data.x_val = model.map_inputs(val_ds.q);
    // standardize with the training statistics regardless of what the
    // validation dataset carries
    data.y_val = standardize_with(val_ds.a, train_ds.mean, train_ds.std);
  }
  model.history = train(model.net, data, config);
  return model;
}

Eigen::MatrixXcd predict_coefficients(const RegressorModel& model, const Eigen::VectorXd& q) {
  return model.predict(q);
}

// ---------------------------------------------------------------------------
// Natural cubic spline
// ---------------------------------------------------------------------------

NaturalCubicSpline::NaturalCubicSpline(Eigen::VectorXd x, Eigen::MatrixXd y)
    : x_(std::move(x)), y_(std::move(y)) {
  const auto n = x_.size();
  if (n < 2 || y_.rows() != n) {
    throw std::invalid_argument("NaturalCubicSpline: need >= 2 knots matching y rows");
  }
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (!(x_[i] < x_[i + 1])) {
      throw std::invalid_argument("NaturalCubicSpline: knots must be strictly increasing");
    }
  }

  m_ = Eigen::MatrixXd::Zero(n, y_.cols());
  if (n == 2) return;  // natural boundary second derivatives are zero

  // Thomas solve of the tridiagonal system for interior second derivatives,
  // natural conditions M_0 = M_{n-1} = 0.
  const auto k = n - 2;
  Eigen::VectorXd diag(k), upper(k), lower(k);
  Eigen::MatrixXd rhs(k, y_.cols());
  for (Eigen::Index i = 0; i < k; ++i) {
    const double h0 = x_[i + 1] - x_[i];
    const double h1 = x_[i + 2] - x_[i + 1];
    lower[i] = h0 / 6.0;
    diag[i] = (h0 + h1) / 3.0;
    upper[i] = h1 / 6.0;
    rhs.row(i) = (y_.row(i + 2) - y_.row(i + 1)) / h1 - (y_.row(i + 1) - y_.row(i)) / h0;
  }
  for (Eigen::Index i = 1; i < k; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs.row(i) -= w * rhs.row(i - 1);
  }
  m_.row(k) = rhs.row(k - 1) / diag[k - 1];
  for (Eigen::Index i = k - 1; i >= 1; --i) {
    m_.row(i) = (rhs.row(i - 1) - upper[i - 1] * m_.row(i + 1)) / diag[i - 1];
  }
}

Eigen::MatrixXd NaturalCubicSpline::eval(const Eigen::VectorXd& x) const {
  const auto n = x_.size();
  Eigen::MatrixXd out(x.size(), y_.cols());
  for (Eigen::Index r = 0; r < x.size(); ++r) {
    const double xq = x[r];
    // interval lookup; out-of-range points use the boundary cubic
    Eigen::Index i = std::upper_bound(x_.data(), x_.data() + n, xq) - x_.data();
    i = std::clamp<Eigen::Index>(i - 1, 0, n - 2);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - xq) / h;
    const double b = (xq - x_[i]) / h;
    out.row(r) = a * y_.row(i) + b * y_.row(i + 1) +
                 ((a * a * a - a) * m_.row(i) + (b * b * b - b) * m_.row(i + 1)) * (h * h) / 6.0;
  }
  return out;
}

SplineModel fit_spline_baseline(const CoefficientDataset& dataset) {
  const int n = dataset.size();
  if (n < 4) throw std::invalid_argument("fit_spline_baseline: need at least 4 knots");
  for (int i = 0; i + 1 < n; ++i) {
    if (dataset.q[i] == dataset.q[i + 1]) {
      throw std::invalid_argument("fit_spline_baseline: duplicate q values");
    }
  }
  return SplineModel(NaturalCubicSpline(dataset.q, dataset.a));
}

Eigen::MatrixXcd SplineModel::predict(const Eigen::VectorXd& q) const {
  return unstack_complex(spline_.eval(q));
}

int SplineModel::coeff_count() const {
  return static_cast<int>(spline_.values().cols()) / 2;
}

long SplineModel::parameter_count() const {
  // knots + values + curvatures
  return spline_.knots().size() * (1 + 2 * spline_.values().cols());
}

double SplineModel::bytes_per_sample() const {
  return 8.0 * static_cast<double>(2 * spline_.values().cols());
}

// ---------------------------------------------------------------------------
// Evaluation and throughput
// ---------------------------------------------------------------------------

double nearest_rank_percentile(Eigen::VectorXd values, double p) {
  if (values.size() == 0) throw std::invalid_argument("nearest_rank_percentile: empty sample");
  if (!(p > 0.0 && p <= 100.0)) {
    throw std::invalid_argument("nearest_rank_percentile: p out of (0, 100]");
  }
  std::sort(values.data(), values.data() + values.size());
  const auto n = values.size();
  const auto rank = static_cast<Eigen::Index>(std::ceil(p / 100.0 * n));
  return values[std::clamp<Eigen::Index>(rank, 1, n) - 1];
}

MismatchReport evaluate(const CoefficientPredictor& predictor, const Eigen::VectorXd& test_q,
                        const FiducialModel& fiducial, const EimModel& eim) {
  if (test_q.size() == 0) throw std::invalid_argument("evaluate: empty test set");
  if (predictor.coeff_count() != eim.size()) {
    throw std::invalid_argument("evaluate: predictor coefficient count != interpolant nodes");
  }

  MismatchReport report;
  for (Eigen::Index i = 0; i < test_q.size(); ++i) {
    if (test_q[i] < predictor.q_lo() || test_q[i] > predictor.q_hi()) {
      ++report.extrapolated_count;
    }
  }
  if (report.extrapolated_count > 0) {
    std::cerr << "evaluate: " << report.extrapolated_count
              << " test points outside the trained interval [" << predictor.q_lo() << ", "
              << predictor.q_hi() << "] (extrapolation)\n";
  }

  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::MatrixXcd coeffs = predictor.predict(test_q);
  const auto t1 = std::chrono::steady_clock::now();
  report.wall_time_per_batch = std::chrono::duration<double>(t1 - t0).count();

  report.per_sample.resize(test_q.size());
  for (Eigen::Index i = 0; i < test_q.size(); ++i) {
    const ComplexWaveform truth =
        align_to(fiducial.generate(test_q[i], eim.gen_grid), eim.peak_index, eim.length());
    const ComplexWaveform approx = eim_reconstruct(coeffs.row(i).transpose(), eim);
    report.per_sample[i] = mismatch(truth, approx);
  }

  report.min = report.per_sample.minCoeff();
  report.max = report.per_sample.maxCoeff();
  report.median = nearest_rank_percentile(report.per_sample, 50.0);
  report.p95 = nearest_rank_percentile(report.per_sample, 95.0);
  return report;
}

BenchmarkReport benchmark_predictor(const CoefficientPredictor& predictor,
                                    const std::vector<int>& batch_sizes, int repetitions) {
  if (repetitions < 1) throw std::invalid_argument("benchmark_predictor: repetitions < 1");
  BenchmarkReport report;
  report.repetitions = repetitions;
  report.parameter_count = predictor.parameter_count();
  report.bytes_per_sample = predictor.bytes_per_sample();
  report.est_max_batch_4gib = 4.0 * 1024.0 * 1024.0 * 1024.0 / predictor.bytes_per_sample();

  for (int batch : batch_sizes) {
    if (batch <= 0) throw std::invalid_argument("benchmark_predictor: batch size must be > 0");
    Eigen::VectorXd q(batch);
    const double lo = predictor.q_lo();
    const double hi = predictor.q_hi();
    for (int i = 0; i < batch; ++i) {
      q[i] = batch == 1 ? lo : lo + (hi - lo) * i / (batch - 1);
    }

    for (int warm = 0; warm < 2; ++warm) {
      volatile double sink = predictor.predict(q).sum().real();
      (void)sink;
    }
    std::vector<double> times(repetitions);
    for (int rep = 0; rep < repetitions; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      volatile double sink = predictor.predict(q).sum().real();
      (void)sink;
      const auto t1 = std::chrono::steady_clock::now();
      times[rep] = std::chrono::duration<double>(t1 - t0).count();
    }
    std::sort(times.begin(), times.end());
    const double median = times[repetitions / 2];
    report.rows.push_back(BatchTiming{batch, median, batch / median});
  }
  return report;
}

}  // namespace gwsurr
