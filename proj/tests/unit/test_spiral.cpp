#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gwsurr/spiral.hpp"
#include "gwsurr/nnet.hpp"
#include "test_helpers.hpp"

using namespace gwsurr;
using gwsurr::testing::rel_error;

namespace {

constexpr double kPi = std::numbers::pi;

// Frozen by direct 40-digit substitution of the toy parameters
// w = -3*pi, b = 3, alpha = 1, beta = 3/pi at q = 1.
constexpr double kToyTheta = -6.4247779607693797154;
constexpr double kToySx = -5.0838203825623125568;
constexpr double kToySy = 0.72468102114481015759;

Eigen::VectorXd scalar(double v) {
  Eigen::VectorXd q(1);
  q[0] = v;
  return q;
}

}  // namespace

TEST_CASE("spiral_forward pointwise values") {
  SUBCASE("unit circle at q = pi/2") {
    const SpiralParams p{1.0, 0.0, 1.0, 0.0};
    const auto out = spiral_forward(scalar(kPi / 2.0), p);
    CHECK(std::abs(out(0, 0)) < 1e-12);
    CHECK(out(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("w = b = 0 collapses to (alpha, 0)") {
    const SpiralParams p{0.0, 0.0, 2.5, 7.0};
    for (double q : {-3.0, 0.0, 1.7}) {
      const auto out = spiral_forward(scalar(q), p);
      CHECK(out(0, 0) == 2.5);
      CHECK(out(0, 1) == 0.0);
    }
  }

  SUBCASE("toy spiral parameters reproduce the substitution oracle") {
    const SpiralParams p{-3.0 * kPi, 3.0, 1.0, 3.0 / kPi};
    SpiralCache cache;
    const auto out = spiral_forward(scalar(1.0), p, &cache);
    CHECK(cache.theta[0] == doctest::Approx(kToyTheta).epsilon(1e-14));
    CHECK(out(0, 0) == doctest::Approx(kToySx).epsilon(1e-14));
    CHECK(out(0, 1) == doctest::Approx(kToySy).epsilon(1e-14));
  }
}

TEST_CASE("spiral_backward closed-form cases") {
  SUBCASE("zero upstream gradient gives zero parameter gradients") {
    const SpiralParams p{1.2, -0.3, 0.8, 0.1};
    SpiralCache cache;
    spiral_forward(scalar(1.5), p, &cache);
    const auto g = spiral_backward(Eigen::MatrixXd::Zero(1, 2), cache, p);
    CHECK(g.w == 0.0);
    CHECK(g.b == 0.0);
    CHECK(g.alpha == 0.0);
    CHECK(g.beta == 0.0);
  }

  SUBCASE("theta = 0 with grad (1,0): dalpha=1, dbeta=0, db=beta") {
    const SpiralParams p{0.0, 0.0, 1.7, 0.6};
    SpiralCache cache;
    const double q = 2.3;
    spiral_forward(scalar(q), p, &cache);
    Eigen::MatrixXd grad(1, 2);
    grad << 1.0, 0.0;
    const auto g = spiral_backward(grad, cache, p);
    CHECK(g.alpha == doctest::Approx(1.0));
    CHECK(g.beta == doctest::Approx(0.0));
    CHECK(g.b == doctest::Approx(p.beta));
    CHECK(g.w == doctest::Approx(p.beta * q));
  }
}

TEST_CASE("spiral gradients match central finite differences") {
  Rng rng(41);
  const double step = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd q(3);
    for (int i = 0; i < 3; ++i) q[i] = rng.uniform(1.0, 8.0);
    Eigen::VectorXd params(4);
    params << rng.uniform(-8.0, 8.0), rng.uniform(-4.0, 4.0), rng.uniform(-2.0, 2.0),
        rng.uniform(-2.0, 2.0);
    Eigen::MatrixXd grad_out(3, 2);
    for (int i = 0; i < grad_out.size(); ++i) {
      grad_out(i / 2, i % 2) = rng.uniform(-1.0, 1.0);
    }

    // scalar objective sum(grad_out .* spiral(q))
    const auto value = [&]() {
      const SpiralParams p{params[0], params[1], params[2], params[3]};
      return (spiral_forward(q, p).array() * grad_out.array()).sum();
    };
    const Eigen::VectorXd fd = gwsurr::testing::finite_difference_gradient(params, value, step);

    const SpiralParams p{params[0], params[1], params[2], params[3]};
    SpiralCache cache;
    spiral_forward(q, p, &cache);
    const auto g = spiral_backward(grad_out, cache, p);
    Eigen::VectorXd analytic(4);
    analytic << g.w, g.b, g.alpha, g.beta;

    CHECK(rel_error(analytic, fd) <= 1e-7);
  }
}

TEST_CASE("spiral geometric invariants") {
  Rng rng(43);

  SUBCASE("radius law |alpha + beta*theta|") {
    for (int trial = 0; trial < 50; ++trial) {
      const SpiralParams p{rng.uniform(-6.0, 6.0), rng.uniform(-3.0, 3.0),
                           rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
      SpiralCache cache;
      const auto out = spiral_forward(scalar(rng.uniform(1.0, 8.0)), p, &cache);
      const double radius = std::hypot(out(0, 0), out(0, 1));
      CHECK(std::abs(radius - std::abs(p.alpha + p.beta * cache.theta[0])) <= 1e-12);
    }
  }

  SUBCASE("full-turn shift of b") {
    const double q = 1.37;
    SUBCASE("beta = 0: outputs unchanged") {
      const SpiralParams p{2.0, 0.5, 1.3, 0.0};
      SpiralParams shifted = p;
      shifted.b += 2.0 * kPi;
      const auto a = spiral_forward(scalar(q), p);
      const auto b = spiral_forward(scalar(q), shifted);
      CHECK(std::abs(a(0, 0) - b(0, 0)) <= 1e-12);
      CHECK(std::abs(a(0, 1) - b(0, 1)) <= 1e-12);
    }
    SUBCASE("beta != 0: radius grows by exactly 2*pi*beta") {
      const SpiralParams p{2.0, 0.5, 1.3, 0.25};
      SpiralParams shifted = p;
      shifted.b += 2.0 * kPi;
      SpiralCache c1, c2;
      const auto a = spiral_forward(scalar(q), p, &c1);
      const auto b = spiral_forward(scalar(q), shifted, &c2);
      const double r1 = std::hypot(a(0, 0), a(0, 1));
      const double r2 = std::hypot(b(0, 0), b(0, 1));
      CHECK(std::abs((r2 - r1) - 2.0 * kPi * p.beta) <= 1e-12);
    }
  }
}

TEST_CASE("default spiral initialization spans one and a half turns") {
  const auto p = default_spiral_init(1.0, 2.0);
  CHECK(p.w * 1.0 + p.b == doctest::Approx(0.0));
  CHECK(p.w * 2.0 + p.b == doctest::Approx(3.0 * kPi));
  CHECK(p.alpha == 1.0);
  // the radius roughly doubles across the interval
  CHECK(p.alpha + p.beta * (p.w * 2.0 + p.b) == doctest::Approx(2.0));
  CHECK_THROWS_AS(default_spiral_init(2.0, 2.0), std::invalid_argument);
}
