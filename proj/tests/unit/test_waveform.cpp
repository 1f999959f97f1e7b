#include <doctest.h>

#include <cmath>
#include <complex>

#include "gwsurr/waveform.hpp"
#include "test_helpers.hpp"

using namespace gwsurr;
using gwsurr::testing::random_waveform;

namespace {

// Closed-form endpoint evaluation of the accumulated phase at q=1 on the
// default grid, frozen from a 40-digit scalar script.
constexpr double kTotalPhaseQ1 = 247.04598276026824732;

const std::complex<double> kImag{0.0, 1.0};

TimeGrid small_grid() { return TimeGrid(0.0, 1.0, 64); }

}  // namespace

TEST_CASE("TimeGrid validates its invariants") {
  CHECK_THROWS_AS(TimeGrid(1.0, 1.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(2.0, 1.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 1), std::invalid_argument);
  const TimeGrid g(0.0, 4990.0, 4096);
  CHECK(g.dt() == doctest::Approx(4990.0 / 4095.0));
  CHECK(g.time(0) == 0.0);
  CHECK(g.time(g.n_samples - 1) == doctest::Approx(4990.0));
}

TEST_CASE("chirp model basics") {
  const NewtonianChirpModel model(default_coalescence_time());

  SUBCASE("equal masses give nu = 1/4 exactly") {
    CHECK(NewtonianChirpModel::symmetric_mass_ratio(1.0) == 0.25);
  }

  SUBCASE("generation is deterministic") {
    const auto h1 = model.generate(1.0, default_grid());
    const auto h2 = model.generate(1.0, default_grid());
    CHECK(h1.values == h2.values);
    CHECK(mismatch(h1, h2) <= 1e-12);
  }

  SUBCASE("domain errors") {
    CHECK_THROWS_AS(model.generate(0.5, default_grid()), std::domain_error);
    const NewtonianChirpModel early(100.0);  // t_c inside the grid
    CHECK_THROWS_AS(early.generate(1.0, default_grid()), std::domain_error);
  }

  SUBCASE("unit norm and monotone phase") {
    const auto grid = default_grid();
    const auto h = model.generate(1.3, grid);
    CHECK(std::abs(waveform_norm(h) - 1.0) < 1e-12);
    for (int k = 1; k < grid.n_samples; ++k) {
      CHECK(model.phase(1.3, grid.time(k)) > model.phase(1.3, grid.time(k - 1)));
    }
    // instantaneous frequency increases toward coalescence
    const double dt = grid.dt();
    double prev = model.phase(1.3, grid.time(1)) - model.phase(1.3, grid.time(0));
    for (int k = 2; k < grid.n_samples; ++k) {
      const double step = model.phase(1.3, grid.time(k)) - model.phase(1.3, grid.time(k - 1));
      CHECK(step > prev);
      prev = step;
    }
    (void)dt;
  }

  SUBCASE("accumulated phase matches the closed-form oracle") {
    const auto grid = default_grid();
    const double total = std::abs(model.phase(1.0, grid.t_end) - model.phase(1.0, grid.t_start));
    CHECK(total == doctest::Approx(kTotalPhaseQ1).epsilon(1e-12));
  }

  SUBCASE("phase is monotone in q at fixed t") {
    const auto grid = default_grid();
    for (const double t : {0.0, 1000.0, grid.t_end}) {
      double prev = model.phase(1.0, t);
      for (double q = 1.1; q <= 8.0; q += 0.1) {
        const double cur = model.phase(q, t);
        CHECK(cur < prev);
        prev = cur;
      }
    }
  }
}

TEST_CASE("inner product") {
  Rng rng(7);
  const auto grid = small_grid();
  const auto h = random_waveform(grid, rng);

  SUBCASE("unit norm gives <h,h> = 1") {
    const auto ip = inner_product(h, h);
    CHECK(std::abs(ip - std::complex<double>(1.0, 0.0)) < 1e-12);
  }

  SUBCASE("scalar linearity, <h, i h> = i") {
    const ComplexWaveform ih{grid, kImag * h.values};
    const auto ip = inner_product(h, ih);
    CHECK(std::abs(ip - kImag) < 1e-12);
  }

  SUBCASE("conjugate symmetry") {
    const auto g = random_waveform(grid, rng);
    CHECK(std::abs(inner_product(h, g) - std::conj(inner_product(g, h))) < 1e-14);
  }

  SUBCASE("length-4 vectors match a hand-computed sum, dt = 1") {
    // dt = 1 grid: t in [0, 3] with 4 samples
    const TimeGrid g4(0.0, 3.0, 4);
    ComplexWaveform a{g4, Eigen::VectorXcd(4)};
    ComplexWaveform b{g4, Eigen::VectorXcd(4)};
    a.values << std::complex<double>(0.4, -1.2), std::complex<double>(-0.3, 0.8),
        std::complex<double>(1.5, 0.25), std::complex<double>(-0.75, -0.5);
    b.values << std::complex<double>(1.0, 0.5), std::complex<double>(0.6, -1.1),
        std::complex<double>(-0.2, 0.0), std::complex<double>(0.9, 2.0);
    // brute-force four-term sum of conj(a_k) * b_k
    std::complex<double> expected{0.0, 0.0};
    for (int k = 0; k < 4; ++k) expected += std::conj(a.values[k]) * b.values[k];
    CHECK(std::abs(inner_product(a, b) - expected) < 1e-15);
  }

  SUBCASE("grid mismatch throws") {
    const auto other = random_waveform(TimeGrid(0.0, 2.0, 64), rng);
    CHECK_THROWS_AS(inner_product(h, other), std::invalid_argument);
  }
}

TEST_CASE("normalize") {
  Rng rng(11);
  const auto grid = small_grid();
  const auto h = random_waveform(grid, rng);

  SUBCASE("idempotent on unit-norm input") {
    const auto n = normalize(h);
    CHECK((n.values - h.values).norm() < 1e-12);
  }

  SUBCASE("removes scale") {
    const ComplexWaveform doubled{grid, 2.0 * h.values};
    const auto n = normalize(doubled);
    CHECK((n.values - h.values).norm() < 1e-12);
  }

  SUBCASE("constant ones with L=100, dt=0.01 stays all ones") {
    const TimeGrid g(0.0, 0.99, 100);
    CHECK(g.dt() == doctest::Approx(0.01).epsilon(1e-15));
    const ComplexWaveform ones{g, Eigen::VectorXcd::Ones(100)};
    const auto n = normalize(ones);
    for (int k = 0; k < 100; ++k) {
      CHECK(n.values[k].real() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(n.values[k].imag() == 0.0);
    }
  }

  SUBCASE("zero norm throws") {
    const ComplexWaveform zero{grid, Eigen::VectorXcd::Zero(grid.n_samples)};
    CHECK_THROWS_AS(normalize(zero), std::domain_error);
  }
}

TEST_CASE("overlap and mismatch") {
  Rng rng(13);
  const auto grid = small_grid();
  const auto h = random_waveform(grid, rng);
  const ComplexWaveform neg{grid, -h.values};
  const ComplexWaveform rot{grid, kImag * h.values};

  CHECK(overlap(h, h) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(overlap(h, neg) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(overlap(h, rot)) < 1e-12);

  CHECK(mismatch(h, h) <= 1e-12);
  CHECK(mismatch(h, neg) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mismatch(h, rot) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inner product properties on random pairs") {
  Rng rng(17);
  const auto grid = small_grid();
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_waveform(grid, rng, false);
    const auto b = random_waveform(grid, rng, false);
    // Cauchy-Schwarz
    CHECK(std::abs(inner_product(a, b)) <= waveform_norm(a) * waveform_norm(b) + 1e-12);

    const auto an = normalize(a);
    const auto bn = normalize(b);
    // overlap identity O = 1 - ||h - hs||^2 / 2
    const double diff2 = (an.values - bn.values).squaredNorm() * grid.dt();
    CHECK(std::abs(overlap(an, bn) - (1.0 - 0.5 * diff2)) <= 1e-10);
    const double m = mismatch(an, bn);
    CHECK(m >= -1e-12);
    CHECK(m <= 2.0 + 1e-12);
  }
}

namespace {

// Pluggable model whose |h| peak moves with q, to exercise the generic
// shift-and-crop alignment path.
class MovingPeakModel final : public FiducialModel {
 public:
  ComplexWaveform generate(double q, const TimeGrid& grid) const override {
    ComplexWaveform h{grid, Eigen::VectorXcd(grid.n_samples)};
    const double center = grid.t_start + (grid.t_end - grid.t_start) * (0.3 + 0.05 * q);
    const double width = 0.05 * (grid.t_end - grid.t_start);
    for (int k = 0; k < grid.n_samples; ++k) {
      const double t = grid.time(k);
      const double env = std::exp(-0.5 * std::pow((t - center) / width, 2));
      h.values[k] = env * std::exp(kImag * (3.0 * t));
    }
    return normalize(h);
  }
};

}  // namespace

TEST_CASE("build_training_set") {
  const NewtonianChirpModel model(default_coalescence_time());
  const auto grid = default_grid();

  SUBCASE("single q gives one unit-norm row") {
    const auto set = build_training_set(model, {1.5}, grid);
    CHECK(set.size() == 1);
    CHECK(std::abs(waveform_norm(set.row(0)) - 1.0) < 1e-12);
  }

  SUBCASE("duplicate q values give identical rows") {
    const auto set = build_training_set(model, {1.2, 1.2}, grid);
    CHECK(set.waveforms.row(0) == set.waveforms.row(1));
  }

  SUBCASE("empty q list throws") {
    CHECK_THROWS_AS(build_training_set(model, {}, grid), std::invalid_argument);
  }

  SUBCASE("chirp alignment is the identity, peak at the last sample") {
    const auto set = build_training_set(model, {1.0, 1.25, 1.5, 1.75, 2.0}, grid);
    CHECK(set.length() == grid.n_samples);
    CHECK(set.peak_index == grid.n_samples - 1);
    for (int i = 0; i < set.size(); ++i) {
      CHECK(std::abs(waveform_norm(set.row(i)) - 1.0) < 1e-12);
      // row equals the plain generated waveform (no shift, no crop)
      const auto direct = model.generate(set.q_values[i], grid);
      CHECK((set.waveforms.row(i).transpose() - direct.values).norm() < 1e-14);
    }
  }

  SUBCASE("moving peaks take the generic shift-and-crop path") {
    const MovingPeakModel moving;
    const TimeGrid g(0.0, 1.0, 512);
    const auto set = build_training_set(moving, {1.0, 2.0, 4.0, 8.0}, g);
    CHECK(set.length() < g.n_samples);
    for (int i = 0; i < set.size(); ++i) {
      // every aligned row peaks at the shared index
      int peak = 0;
      for (int k = 1; k < set.length(); ++k) {
        if (std::abs(set.waveforms(i, k)) > std::abs(set.waveforms(i, peak))) peak = k;
      }
      CHECK(peak == set.peak_index);
      CHECK(std::abs(waveform_norm(set.row(i)) - 1.0) < 1e-12);
    }
    // align_to prepares a fresh waveform exactly like the set rows
    const auto fresh = align_to(moving.generate(2.0, g), set.peak_index, set.length());
    CHECK((fresh.values - set.waveforms.row(1).transpose()).norm() < 1e-14);
  }
}
