#include <doctest.h>

#include <cmath>

#include "gwsurr/config.hpp"
#include "gwsurr/surrogate.hpp"
#include "test_helpers.hpp"

using namespace gwsurr;

namespace {

struct Desk {
  WaveformSet train;
  ReducedBasis basis;
  EimModel eim;
  CoefficientDataset dataset;
};

// Shared small pipeline: building it once keeps this file fast.
const Desk& desk() {
  static const Desk d = [] {
    Desk out;
    const NewtonianChirpModel model(default_coalescence_time());
    out.train = build_training_set(model, equispaced_q(1.0, 2.0, 80), default_grid());
    out.basis = greedy_build(out.train, 1e-10);
    out.eim = build_eim(out.basis);
    out.dataset = build_dataset(out.train, out.eim);
    return out;
  }();
  return d;
}

/// Predictor that returns the true node values: the evaluation oracle.
class ExactPredictor final : public CoefficientPredictor {
 public:
  explicit ExactPredictor(const EimModel& eim) : eim_(eim) {}
  Eigen::MatrixXcd predict(const Eigen::VectorXd& q) const override {
    const NewtonianChirpModel model(default_coalescence_time());
    Eigen::MatrixXcd out(q.size(), eim_.size());
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      const auto truth =
          align_to(model.generate(q[i], eim_.gen_grid), eim_.peak_index, eim_.length());
      out.row(i) = eim_coefficients(truth, eim_).transpose();
    }
    return out;
  }
  int coeff_count() const override { return eim_.size(); }
  double q_lo() const override { return 1.0; }
  double q_hi() const override { return 2.0; }
  long parameter_count() const override { return 0; }
  double bytes_per_sample() const override { return 16.0 * eim_.size(); }

 private:
  const EimModel& eim_;
};

}  // namespace

TEST_CASE("natural cubic spline") {
  SUBCASE("interpolates the knots exactly") {
    Eigen::VectorXd x(6);
    x << 0.0, 0.7, 1.1, 2.0, 3.5, 4.0;
    Eigen::MatrixXd y(6, 2);
    for (int i = 0; i < 6; ++i) {
      y(i, 0) = std::sin(2.0 * x[i]);
      y(i, 1) = x[i] * x[i] - 3.0;
    }
    const NaturalCubicSpline s(x, y);
    const Eigen::MatrixXd at = s.eval(x);
    CHECK((at - y).cwiseAbs().maxCoeff() <= 1e-10);
  }

  SUBCASE("reproduces linear data exactly between knots") {
    Eigen::VectorXd x(5);
    x << 1.0, 1.2, 1.9, 2.6, 3.0;
    Eigen::MatrixXd y(5, 1);
    y.col(0) = 2.5 * x.array() - 0.75;
    const NaturalCubicSpline s(x, y);
    const Eigen::VectorXd probe = Eigen::VectorXd::LinSpaced(41, 1.0, 3.0);
    const Eigen::MatrixXd at = s.eval(probe);
    for (int i = 0; i < probe.size(); ++i) {
      CHECK(std::abs(at(i, 0) - (2.5 * probe[i] - 0.75)) <= 1e-10);
    }
  }

  SUBCASE("approximates a smooth function between knots") {
    const int n = 200;
    Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(n, 0.0, 3.0);
    Eigen::MatrixXd y(n, 1);
    y.col(0) = x.array().sin();
    const NaturalCubicSpline s(x, y);
    const Eigen::VectorXd probe = Eigen::VectorXd::LinSpaced(777, 0.1, 2.9);
    const Eigen::MatrixXd at = s.eval(probe);
    for (int i = 0; i < probe.size(); ++i) {
      CHECK(std::abs(at(i, 0) - std::sin(probe[i])) <= 1e-6);
    }
  }

  SUBCASE("input validation") {
    Eigen::VectorXd x(3);
    x << 0.0, 0.0, 1.0;
    CHECK_THROWS_AS(NaturalCubicSpline(x, Eigen::MatrixXd::Zero(3, 1)), std::invalid_argument);
    CHECK_THROWS_AS(NaturalCubicSpline(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Zero(1, 1)),
                    std::invalid_argument);
  }
}

TEST_CASE("spline baseline model") {
  const auto& d = desk();
  const auto model = fit_spline_baseline(d.dataset);

  SUBCASE("knot evaluation returns the training coefficients") {
    const Eigen::MatrixXcd at = model.predict(d.dataset.q);
    const Eigen::MatrixXcd expect = unstack_complex(d.dataset.a);
    CHECK((at - expect).cwiseAbs().maxCoeff() <= 1e-10);
  }

  SUBCASE("duplicate knots and short datasets are rejected") {
    CoefficientDataset dup = d.dataset;
    dup.q[1] = dup.q[0];
    CHECK_THROWS_WITH_AS(fit_spline_baseline(dup), doctest::Contains("duplicate"),
                         std::invalid_argument);
    CoefficientDataset tiny;
    tiny.q = Eigen::VectorXd::LinSpaced(3, 1.0, 2.0);
    tiny.a = Eigen::MatrixXd::Zero(3, 4);
    tiny.mean = Eigen::VectorXd::Zero(4);
    tiny.std = Eigen::VectorXd::Ones(4);
    CHECK_THROWS_AS(fit_spline_baseline(tiny), std::invalid_argument);
  }
}

TEST_CASE("nearest-rank percentiles") {
  Eigen::VectorXd v(5);
  v << 5.0, 1.0, 4.0, 2.0, 3.0;
  CHECK(nearest_rank_percentile(v, 50.0) == 3.0);   // ceil(2.5) = 3rd smallest
  CHECK(nearest_rank_percentile(v, 95.0) == 5.0);   // ceil(4.75) = 5th
  CHECK(nearest_rank_percentile(v, 100.0) == 5.0);
  CHECK(nearest_rank_percentile(v, 1.0) == 1.0);
  CHECK_THROWS_AS(nearest_rank_percentile(v, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(nearest_rank_percentile(Eigen::VectorXd(), 50.0), std::invalid_argument);
}

TEST_CASE("regressor construction and prediction") {
  const auto& d = desk();
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.batch_size = 16;
  cfg.lr0 = 1e-3;
  cfg.schedule_gamma = 0.95;
  cfg.schedule_step_epochs = 150;
  cfg.seed = 4242;

  const auto spec = NetworkSpec::parse("S-8-8", 1, d.dataset.stacked_dim());
  const auto model = train_regressor(d.dataset, CoefficientDataset{}, spec, cfg, 1.0, 2.0);

  SUBCASE("layer chain matches the spec string") {
    REQUIRE(model.net.layer_count() == 6);
    CHECK(model.net.layer(0).kind() == "spiral");
    CHECK(model.net.layer(1).in_width() == 2);
    CHECK(model.net.layer(5).out_width() == d.dataset.stacked_dim());
  }

  SUBCASE("history covers every epoch, no val split requested") {
    CHECK(model.history.train_loss.size() == 30);
    CHECK(model.history.val_loss.empty());
  }

  SUBCASE("duplicated q values predict identical rows") {
    Eigen::VectorXd q(3);
    q << 1.5, 1.5, 1.5;
    const Eigen::MatrixXcd out = model.predict(q);
    CHECK(out.row(0) == out.row(1));
    CHECK(out.row(1) == out.row(2));
  }

  SUBCASE("batched equals one-at-a-time bit-exactly") {
    Rng rng(97);
    Eigen::VectorXd q(257);
    for (int i = 0; i < q.size(); ++i) q[i] = rng.uniform(1.0, 2.0);
    const Eigen::MatrixXcd batched = model.predict(q);
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      const Eigen::MatrixXcd one = model.predict(q.segment(i, 1));
      CHECK(batched.row(i) == one.row(0));
    }
  }

  SUBCASE("baseline networks map q into [-1, 1]") {
    const auto plain_spec = NetworkSpec::parse("8", 1, d.dataset.stacked_dim());
    const auto plain = train_regressor(d.dataset, CoefficientDataset{}, plain_spec, cfg, 1.0, 2.0);
    const Eigen::MatrixXd mapped = plain.map_inputs(d.dataset.q);
    CHECK(mapped.minCoeff() >= -1.0 - 1e-12);
    CHECK(mapped.maxCoeff() <= 1.0 + 1e-12);
    CHECK(mapped(0, 0) == doctest::Approx(-1.0));
    // spiral networks consume raw q
    CHECK(model.map_inputs(d.dataset.q) == d.dataset.q);
  }
}

TEST_CASE("evaluate") {
  const auto& d = desk();
  const NewtonianChirpModel fiducial(default_coalescence_time());
  const ExactPredictor oracle(d.eim);

  Eigen::VectorXd test_q(21);
  Rng rng(101);
  for (int i = 0; i < test_q.size(); ++i) test_q[i] = rng.uniform(1.0, 2.0);

  SUBCASE("exact coefficients give tiny mismatch everywhere") {
    const auto report = evaluate(oracle, test_q, fiducial, d.eim);
    CHECK(report.max <= 1e-8);
    CHECK(report.extrapolated_count == 0);
    CHECK(report.per_sample.size() == test_q.size());
  }

  SUBCASE("statistics are ordered and permutation invariant") {
    const auto report = evaluate(oracle, test_q, fiducial, d.eim);
    CHECK(report.max >= report.p95);
    CHECK(report.p95 >= report.median);
    CHECK(report.median >= report.min);
    CHECK(report.min >= 0.0);

    Eigen::VectorXd shuffled = test_q.reverse();
    const auto report2 = evaluate(oracle, shuffled, fiducial, d.eim);
    CHECK(report.max == report2.max);
    CHECK(report.median == report2.median);
    CHECK(report.p95 == report2.p95);
  }

  SUBCASE("out-of-interval points are flagged") {
    Eigen::VectorXd wide(3);
    wide << 1.5, 2.5, 3.0;  // last two sit beyond the trained interval
    const auto report = evaluate(oracle, wide, fiducial, d.eim);
    CHECK(report.extrapolated_count == 2);
  }

  SUBCASE("empty test set throws") {
    CHECK_THROWS_AS(evaluate(oracle, Eigen::VectorXd(), fiducial, d.eim),
                    std::invalid_argument);
  }
}

TEST_CASE("benchmark_predictor") {
  const auto& d = desk();
  const ExactPredictor oracle(d.eim);

  CHECK_THROWS_AS(benchmark_predictor(oracle, {0}), std::invalid_argument);
  CHECK_THROWS_AS(benchmark_predictor(oracle, {8}, 0), std::invalid_argument);

  const auto report = benchmark_predictor(oracle, {1, 4}, 3);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].batch_size == 1);
  CHECK(report.rows[1].batch_size == 4);
  for (const auto& row : report.rows) {
    CHECK(row.median_seconds > 0.0);
    CHECK(row.vectors_per_second > 0.0);
  }
  CHECK(report.est_max_batch_4gib > 0.0);
}
