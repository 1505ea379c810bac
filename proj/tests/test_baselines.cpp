#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "metagrad/baselines.hpp"
#include "metagrad/errors.hpp"
#include "metagrad/rng.hpp"
#include "test_util.hpp"

using namespace metagrad;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("ogdt steps") {
  OgdT ogd(DomainSpec(L2Ball{2.0}), 1.0, 2);
  // eta_1 = 1/(sqrt(1)*1), step to (-1, 0)
  ogd.observe(vec2(1, 0));
  CHECK(ogd.prediction().isApprox(vec2(-1, 0)));
  // zero gradient: no movement
  ogd.observe(vec2(0, 0));
  CHECK(ogd.prediction().isApprox(vec2(-1, 0)));
  // a huge step is radially rescaled back onto the ball
  OgdT clipped(DomainSpec(L2Ball{0.5}), 10.0, 2);
  clipped.observe(vec2(0, 2));
  CHECK(clipped.prediction().norm() == doctest::Approx(0.5));
}

TEST_CASE("ogdnorm steps") {
  OgdNorm ogd(DomainSpec(L2Ball{5.0}), 1.0, 2);
  ogd.observe(vec2(3, 4));  // eta = 1/5
  CHECK(ogd.prediction().isApprox(vec2(-0.6, -0.8)));

  OgdNorm two(DomainSpec(L2Ball{5.0}), 1.0, 2);
  two.observe(vec2(1, 0));
  two.observe(vec2(1, 0));  // eta_2 = 1/sqrt(2)
  CHECK(two.prediction()(0) ==
        doctest::Approx(-1.0 - 1.0 / std::sqrt(2.0)));

  OgdNorm idle(DomainSpec(L2Ball{1.0}), 1.0, 2);
  idle.observe(vec2(0, 0));
  CHECK(idle.prediction().isZero(0.0));
}

TEST_CASE("adagrad diagonal steps") {
  AdaGradDiag ada(DomainSpec(Box{vec2(1, 1)}), 1.0, 2);
  ada.observe(vec2(2, 0));  // eta_{1,1} = 1/2, step -1, clamp at -1
  CHECK(ada.prediction().isApprox(vec2(-1, 0)));

  AdaGradDiag idle(DomainSpec(Box{vec2(1, 1)}), 1.0, 2);
  idle.observe(vec2(0, 0));
  CHECK(idle.prediction().isZero(0.0));
}

TEST_CASE("diag-metric box projection equals the grid oracle (d=2)") {
  // one adagrad step solves argmin_w w^T g + sum_i (w_i - w_i^t)^2/(2 eta_i)
  // over the box; brute-force the quadratic on a fine lattice
  SplitMix64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const double sigma = rng.uniform(0.3, 3.0);
    AdaGradDiag ada(DomainSpec(Box{vec2(1, 1)}), sigma, 2);
    const Eigen::VectorXd g1 = testutil::random_vector(rng, 2, -2, 2);
    ada.observe(g1);  // builds per-coordinate rates
    const Eigen::VectorXd w_t = ada.prediction();
    const Eigen::VectorXd g = testutil::random_vector(rng, 2, -2, 2);
    // replicate the internal state to know eta_i
    Eigen::VectorXd sq(2);
    for (int i = 0; i < 2; ++i) sq(i) = g1(i) * g1(i) + g(i) * g(i);
    ada.observe(g);
    const Eigen::VectorXd got = ada.prediction();

    double best_val = 1e300;
    Eigen::VectorXd best = w_t;
    const int n = 801;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Eigen::VectorXd w(2);
        w << -1 + 2.0 * i / (n - 1), -1 + 2.0 * j / (n - 1);
        double val = w.dot(g);
        for (int k = 0; k < 2; ++k) {
          if (sq(k) > 0) {
            const double eta_k = sigma / std::sqrt(sq(k));
            val += (w(k) - w_t(k)) * (w(k) - w_t(k)) / (2.0 * eta_k);
          }
        }
        if (val < best_val) {
          best_val = val;
          best = w;
        }
      }
    }
    CHECK((got - best).cwiseAbs().maxCoeff() < 3e-3);
  }
}

TEST_CASE("iterates stay feasible") {
  SplitMix64 rng(11);
  OgdT a(DomainSpec(L2Ball{1.0}), 2.0, 3);
  OgdNorm b(DomainSpec(L2Ball{1.0}), 2.0, 3);
  AdaGradDiag c(DomainSpec(Box{Eigen::VectorXd::Constant(3, 1.0)}), 2.0, 3);
  const DomainSpec ball(L2Ball{1.0});
  const DomainSpec box(Box{Eigen::VectorXd::Constant(3, 1.0)});
  for (int t = 0; t < 500; ++t) {
    const Eigen::VectorXd g = testutil::random_vector(rng, 3, -5, 5);
    a.observe(g);
    b.observe(g);
    c.observe(g);
    CHECK(contains(ball, a.prediction(), 1e-12));
    CHECK(contains(ball, b.prediction(), 1e-12));
    CHECK(contains(box, c.prediction(), 1e-12));
  }
}

TEST_CASE("domain pairing is validated") {
  CHECK_THROWS_AS(OgdT(DomainSpec(Box{vec2(1, 1)}), 1.0, 2), ConfigError);
  CHECK_THROWS_AS(AdaGradDiag(DomainSpec(L2Ball{1.0}), 1.0, 2), ConfigError);
}
