#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "metagrad/errors.hpp"
#include "metagrad/losses.hpp"
#include "metagrad/rng.hpp"
#include "test_util.hpp"

using namespace metagrad;

TEST_CASE("loss values at pinned points") {
  Eigen::VectorXd w(2), x(2);
  w << 0, 0;
  x << 1, 1;
  CHECK(loss_value(LossKind::hinge, w, x, 1.0) == doctest::Approx(1.0));

  w << 1, 1;  // w^T x = 2
  CHECK(loss_value(LossKind::squared, w, x, 3.0) == doctest::Approx(1.0));

  w << 0, 0;  // log(1 + e^0) = ln 2
  CHECK(loss_value(LossKind::logistic, w, x, -1.0) ==
        doctest::Approx(std::log(2.0)));
}

TEST_CASE("loss gradients at pinned points") {
  Eigen::VectorXd x(2);
  x << 0.5, -1.0;

  Eigen::VectorXd w = 0.5 / x.squaredNorm() * x;  // w^T x = 0.5, margin < 1
  CHECK(loss_gradient(LossKind::hinge, w, x, 1.0).isApprox(-x));

  w = 2.0 / x.squaredNorm() * x;  // margin > 1
  CHECK(loss_gradient(LossKind::hinge, w, x, 1.0).isZero(0.0));

  w = 1.0 / x.squaredNorm() * x;  // w^T x = 1, y = 3: sign(1-3) x = -x
  CHECK(loss_gradient(LossKind::absolute, w, x, 3.0).isApprox(-x));
}

TEST_CASE("kink subgradients are the zero vector") {
  Eigen::VectorXd x(2), w(2);
  x << 2, 1;
  w = x / x.squaredNorm();  // w^T x = 1 exactly: hinge margin 1
  CHECK(loss_gradient(LossKind::hinge, w, x, 1.0).isZero(0.0));
  CHECK(loss_gradient(LossKind::absolute, w, x, 1.0).isZero(0.0));
}

TEST_CASE("input errors") {
  Eigen::VectorXd w(2), x(3);
  w.setZero();
  x.setZero();
  CHECK_THROWS_AS(loss_value(LossKind::hinge, w, x, 1.0), ConfigError);
  Eigen::VectorXd x2(2);
  x2.setZero();
  CHECK_THROWS_AS(loss_value(LossKind::hinge, w, x2, 0.5), ConfigError);
  CHECK_THROWS_AS(loss_gradient(LossKind::logistic, w, x2, 2.0), ConfigError);
  CHECK_NOTHROW(loss_value(LossKind::squared, w, x2, 0.5));
}

TEST_CASE("gradient matches central finite differences away from kinks") {
  SplitMix64 rng(7);
  const double h = 1e-6;
  double worst = 0;
  int checked = 0;
  while (checked < 1000) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 5);
    const Eigen::VectorXd w = testutil::random_vector(rng, d, -2, 2);
    const Eigen::VectorXd x = testutil::random_vector(rng, d, -2, 2);
    const double y_cls = rng.next_double() < 0.5 ? 1.0 : -1.0;
    const double y_reg = rng.uniform(-2, 2);
    for (LossKind kind : {LossKind::hinge, LossKind::logistic,
                          LossKind::absolute, LossKind::squared}) {
      const double y = is_classification_loss(kind) ? y_cls : y_reg;
      const double z = w.dot(x);
      // keep a safety margin around the kinks of hinge and absolute
      if (kind == LossKind::hinge && std::abs(y * z - 1.0) < 1e-2) continue;
      if (kind == LossKind::absolute && std::abs(z - y) < 1e-2) continue;
      const Eigen::VectorXd g = loss_gradient(kind, w, x, y);
      for (int i = 0; i < d; ++i) {
        Eigen::VectorXd wp = w, wm = w;
        wp(i) += h;
        wm(i) -= h;
        const double fd = (loss_value(kind, wp, x, y) -
                           loss_value(kind, wm, x, y)) /
                          (2 * h);
        worst = std::max(worst, testutil::rel_err(g(i), fd));
      }
      ++checked;
    }
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("gradient factorizes exactly as h'(w^T x) * x") {
  SplitMix64 rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 6);
    const Eigen::VectorXd w = testutil::random_vector(rng, d, -2, 2);
    const Eigen::VectorXd x = testutil::random_vector(rng, d, -2, 2);
    const double y_cls = rng.next_double() < 0.5 ? 1.0 : -1.0;
    for (LossKind kind : {LossKind::hinge, LossKind::logistic,
                          LossKind::absolute, LossKind::squared}) {
      const double y = is_classification_loss(kind) ? y_cls : 0.3;
      const double hp = scalar_loss_derivative(kind, w.dot(x), y);
      const Eigen::VectorXd g = loss_gradient(kind, w, x, y);
      for (int i = 0; i < d; ++i) CHECK(g(i) == hp * x(i));
    }
  }
}
