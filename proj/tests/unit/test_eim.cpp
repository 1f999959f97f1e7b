#include <doctest.h>

#include <cmath>

#include "gwsurr/config.hpp"
#include "gwsurr/eim.hpp"
#include "test_helpers.hpp"

using namespace gwsurr;

namespace {

struct Pipeline {
  WaveformSet set;
  ReducedBasis basis;
  EimModel eim;
};

Pipeline small_pipeline(int n = 60) {
  const NewtonianChirpModel model(default_coalescence_time());
  Pipeline p;
  p.set = build_training_set(model, equispaced_q(1.0, 2.0, n), default_grid());
  p.basis = greedy_build(p.set, 1e-10);
  p.eim = build_eim(p.basis);
  return p;
}

}  // namespace

TEST_CASE("build_eim on a single basis vector") {
  const auto set = build_training_set(NewtonianChirpModel(default_coalescence_time()), {1.0},
                                      default_grid());
  const auto rb = greedy_build(set, 1e-10);
  REQUIRE(rb.size() == 1);
  const auto eim = build_eim(rb);
  REQUIRE(eim.size() == 1);

  // node sits at the amplitude argmax of e_1
  int expect = 0;
  for (int k = 1; k < rb.length(); ++k) {
    if (std::abs(rb.basis(0, k)) > std::abs(rb.basis(0, expect))) expect = k;
  }
  CHECK(eim.node_indices[0] == expect);

  // B = e_1 / e_1(T_1)
  const Eigen::VectorXcd expected = rb.basis.row(0).transpose() / rb.basis(0, expect);
  CHECK((eim.interpolant.col(0) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("EIM interpolation properties") {
  const auto p = small_pipeline();
  const int m = p.eim.size();
  REQUIRE(m > 1);

  SUBCASE("nodes are distinct, ascending, and deterministic") {
    for (int j = 1; j < m; ++j) CHECK(p.eim.node_indices[j] > p.eim.node_indices[j - 1]);
    const auto again = build_eim(p.basis);
    CHECK(p.eim.node_indices == again.node_indices);
    CHECK(p.eim.interpolant == again.interpolant);
    CHECK(p.eim.v_condition == again.v_condition);
  }

  SUBCASE("rows of B at the nodes form the identity") {
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) {
        const std::complex<double> expect = (i == j) ? 1.0 : 0.0;
        CHECK(std::abs(p.eim.interpolant(p.eim.node_indices[j], i) - expect) <= 1e-10);
      }
    }
  }

  SUBCASE("interpolant reproduces every basis vector everywhere") {
    for (int i = 0; i < m; ++i) {
      const auto e = p.basis.basis_waveform(i);
      const Eigen::VectorXcd a = eim_coefficients(e, p.eim);
      const Eigen::VectorXcd rebuilt = p.eim.interpolant * a;
      CHECK((rebuilt - e.values).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }

  SUBCASE("node matrix condition is finite and reproducible") {
    CHECK(std::isfinite(p.eim.v_condition));
    CHECK(p.eim.v_condition >= 1.0);
  }

  SUBCASE("eim_coefficients returns node samples") {
    const auto h = p.set.row(3);
    const auto a = eim_coefficients(h, p.eim);
    for (int j = 0; j < m; ++j) CHECK(a[j] == h.values[p.eim.node_indices[j]]);
  }

  SUBCASE("reconstruction is exact at nodes before normalization") {
    const auto h = p.set.row(7);
    const auto a = eim_coefficients(h, p.eim);
    const Eigen::VectorXcd raw = p.eim.interpolant * a;
    for (int j = 0; j < m; ++j) {
      CHECK(std::abs(raw[p.eim.node_indices[j]] - a[j]) <= 1e-10);
    }
  }

  SUBCASE("training waveforms round-trip through their node values") {
    for (int i : {0, p.set.size() / 2, p.set.size() - 1}) {
      const auto h = p.set.row(i);
      const auto rebuilt = eim_reconstruct(eim_coefficients(h, p.eim), p.eim);
      CHECK(mismatch(h, rebuilt) <= 1e-10);
    }
  }

  SUBCASE("zero coefficients raise the zero-norm error") {
    CHECK_THROWS_AS(eim_reconstruct(Eigen::VectorXcd::Zero(m), p.eim), std::domain_error);
  }

  SUBCASE("length mismatches throw") {
    CHECK_THROWS_AS(eim_reconstruct(Eigen::VectorXcd::Ones(m + 1), p.eim),
                    std::invalid_argument);
    Rng rng(5);
    const auto other = gwsurr::testing::random_waveform(TimeGrid(0.0, 1.0, 32), rng);
    CHECK_THROWS_AS(eim_coefficients(other, p.eim), std::invalid_argument);
  }
}

TEST_CASE("coefficient datasets") {
  const auto p = small_pipeline();
  const auto ds = build_dataset(p.set, p.eim);
  const int m = p.eim.size();

  SUBCASE("rows are eim coefficients, stacked real-then-imaginary") {
    REQUIRE(ds.size() == p.set.size());
    REQUIRE(ds.stacked_dim() == 2 * m);
    for (int i : {0, 5, p.set.size() - 1}) {
      const auto a = eim_coefficients(p.set.row(i), p.eim);
      for (int j = 0; j < m; ++j) {
        CHECK(ds.a(i, j) == a[j].real());
        CHECK(ds.a(i, m + j) == a[j].imag());
      }
    }
  }

  SUBCASE("training columns standardize to zero mean unit variance") {
    const Eigen::MatrixXd z = ds.standardized();
    for (int c = 0; c < ds.stacked_dim(); ++c) {
      CHECK(std::abs(z.col(c).mean()) <= 1e-10);
      const double var = (z.col(c).array() - z.col(c).mean()).square().sum() / ds.size();
      CHECK(std::abs(std::sqrt(var) - 1.0) <= 1e-10);
    }
  }

  SUBCASE("standardize then destandardize is the identity") {
    const Eigen::MatrixXd round = ds.destandardize(ds.standardized());
    CHECK((round - ds.a).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("rows come out ordered by q even for shuffled input") {
    const NewtonianChirpModel model(default_coalescence_time());
    const auto shuffled =
        build_training_set(model, {1.8, 1.0, 1.4, 1.2, 1.6}, default_grid());
    const auto ds2 = build_dataset(shuffled, p.eim);
    for (int i = 1; i < ds2.size(); ++i) CHECK(ds2.q[i] > ds2.q[i - 1]);
  }

  SUBCASE("single-row dataset forces std to 1") {
    const NewtonianChirpModel model(default_coalescence_time());
    const auto one = build_training_set(model, {1.5}, default_grid());
    const auto ds1 = build_dataset(one, p.eim);
    CHECK(ds1.size() == 1);
    CHECK((ds1.std.array() == 1.0).all());
    CHECK((ds1.standardized().array() == 0.0).all());
  }

  SUBCASE("external statistics are adopted verbatim") {
    const auto with_stats = build_dataset(p.set, p.eim, ds.mean, ds.std);
    CHECK(with_stats.mean == ds.mean);
    CHECK(with_stats.std == ds.std);
    CHECK(with_stats.a == ds.a);
  }

  SUBCASE("stack and unstack are inverse") {
    const Eigen::MatrixXcd back = unstack_complex(ds.a);
    CHECK(stack_complex(back) == ds.a);
  }
}

TEST_CASE("degenerate basis is rejected when building the interpolant") {
  // two identical rows cannot produce distinct, well-conditioned nodes
  const auto set = build_training_set(NewtonianChirpModel(default_coalescence_time()), {1.3},
                                      default_grid());
  const auto rb = greedy_build(set, 1e-10);
  ReducedBasis twisted = rb;
  twisted.basis.conservativeResize(2, rb.length());
  twisted.basis.row(1) = twisted.basis.row(0);
  CHECK_THROWS_AS(build_eim(twisted), std::runtime_error);
}
