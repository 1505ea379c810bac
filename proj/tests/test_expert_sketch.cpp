#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "metagrad/errors.hpp"
#include "metagrad/expert_full.hpp"
#include "metagrad/expert_sketch.hpp"
#include "metagrad/rng.hpp"
#include "test_util.hpp"

using namespace metagrad;

namespace {

// dense oracle for H = (sigma^-2 I + 2 eta^2 S S^T)^-1
Eigen::MatrixXd h_oracle(const SketchExpert& e) {
  const int k = 2 * e.rank_param();
  const Eigen::MatrixXd inv =
      Eigen::MatrixXd::Identity(k, k) / (e.sigma() * e.sigma()) +
      2 * e.eta() * e.eta() * e.sketch() * e.sketch().transpose();
  return inv.inverse();
}

double h_consistency_error(const SketchExpert& e) {
  const int k = 2 * e.rank_param();
  const Eigen::MatrixXd lhs =
      e.hmat() * (Eigen::MatrixXd::Identity(k, k) / (e.sigma() * e.sigma()) +
                  2 * e.eta() * e.eta() * e.sketch() * e.sketch().transpose());
  return (lhs - Eigen::MatrixXd::Identity(k, k)).norm() /
         Eigen::MatrixXd::Identity(k, k).norm();
}

}  // namespace

TEST_CASE("ingest writes rows m..2m and keeps H consistent") {
  SplitMix64 rng(3);
  SketchExpert e(0.25, 1.0, 3, /*m=*/2);
  CHECK(e.tau() == 0);
  const Eigen::VectorXd g1 = testutil::random_vector(rng, 3);
  e.ingest(g1);
  CHECK(e.tau() == 1);
  // first gradient of the epoch occupies row m (1-based)
  CHECK(e.sketch().row(1).transpose().isApprox(g1));
  CHECK(e.sketch().row(0).isZero(0.0));
  CHECK((e.hmat() - h_oracle(e)).norm() < 1e-10);
  const Eigen::VectorXd g2 = testutil::random_vector(rng, 3);
  e.ingest(g2);
  CHECK((e.hmat() - h_oracle(e)).norm() < 1e-10);
}

TEST_CASE("zero gradient adds a zero row and leaves H unchanged") {
  SketchExpert e(0.5, 1.0, 2, 2);
  const Eigen::MatrixXd h_before = e.hmat();
  e.ingest(Eigen::VectorXd::Zero(2));
  CHECK(e.tau() == 1);
  CHECK(e.hmat() == h_before);
  CHECK(e.sketch().isZero(0.0));
}

TEST_CASE("epoch cycles after m+1 ingests, restoring the zero-row invariant") {
  SplitMix64 rng(5);
  const int m = 3;
  SketchExpert e(0.25, 1.0, 4, m);
  for (int i = 0; i < m + 1; ++i) {
    CHECK(e.tau() == i);
    e.ingest(testutil::random_vector(rng, 4));
  }
  CHECK(e.tau() == 0);
  CHECK(e.compress_count() == 1);
  // rows m..2m (1-based) zero at epoch start
  for (int r = m - 1; r < 2 * m; ++r) CHECK(e.sketch().row(r).isZero(0.0));
  CHECK(h_consistency_error(e) < 1e-10);
}

TEST_CASE("compression: orthonormal inputs shrink away entirely (d=2, m=1)") {
  SketchExpert e(0.5, 1.0, 2, 1);
  Eigen::VectorXd e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  e.ingest(e1);  // tau 0 -> 1
  e.ingest(e2);  // tau == m: compress; singular values of I2 are 1,1
  CHECK(e.compress_count() == 1);
  CHECK(e.sketch().isZero(1e-12));
  CHECK(e.shrinkage_sum() == doctest::Approx(1.0));
}

TEST_CASE("compression: rank <= m-1 inputs are kept exactly (d=1, m=2)") {
  SketchExpert e(0.25, 1.0, 1, 2);
  Eigen::VectorXd g(1);
  g << 0.7;
  double sq = 0;
  for (int i = 0; i < 3; ++i) {
    e.ingest(g);
    sq += g(0) * g(0);
  }
  CHECK(e.compress_count() == 1);
  CHECK(e.shrinkage_sum() == 0.0);
  const Eigen::MatrixXd gram = e.sketch().transpose() * e.sketch();
  CHECK(gram(0, 0) == doctest::Approx(sq).epsilon(1e-12));
}

TEST_CASE("compression trace identity") {
  SplitMix64 rng(7);
  const int m = 3, d = 6;
  SketchExpert e(0.125, 1.0, d, m);
  for (int i = 0; i < m; ++i) e.ingest(testutil::random_vector(rng, d));
  // capture S-tilde right before compression: current rows plus the next g
  Eigen::MatrixXd s_tilde = e.sketch();
  const Eigen::VectorXd g_last = testutil::random_vector(rng, d);
  s_tilde.row(2 * m - 1) = g_last.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(s_tilde);
  const auto& sv = svd.singularValues();
  // tr(S_new^T S_new) = sum_i (sigma_i^2 - sigma_m^2), rows are orthogonal
  double expected_trace = 0;
  const double smsq = sv(m - 1) * sv(m - 1);
  for (int i = 0; i < m; ++i) {
    expected_trace += std::max(sv(i) * sv(i) - smsq, 0.0);
  }
  e.ingest(g_last);
  CHECK((e.sketch().transpose() * e.sketch()).trace() ==
        doctest::Approx(expected_trace).epsilon(1e-10));
}

TEST_CASE("sketched slab projection reduces to Euclidean when S = 0") {
  SketchExpert e(0.5, 1.0, 2, 2);
  Eigen::VectorXd x(2), pushed(2), zero2 = Eigen::VectorXd::Zero(2);
  x << 1, 0;
  pushed << 2, 0;
  e.update(Eigen::VectorXd::Zero(2), zero2, pushed);  // mean <- (2,0), S has a zero row
  DomainSpec slab(Slab{1.0, x});
  Eigen::VectorXd target(2);
  target << 1, 0;
  CHECK(e.predict(slab).isApprox(target, 1e-12));

  // feasible mean is untouched
  SketchExpert fresh(0.5, 1.0, 2, 2);
  CHECK(fresh.predict(slab) == fresh.mean());
}

TEST_CASE("mean update with an empty sketch is plain mirror descent") {
  // S = 0: mean <- w - sigma^2 * g_hat
  SketchExpert e(0.5, 2.0, 2, 1);
  Eigen::VectorXd g(2), zero2 = Eigen::VectorXd::Zero(2);
  g << 0.25, -0.5;
  e.mean_update(g, zero2, zero2);
  const Eigen::VectorXd expected = -4.0 * (0.5 * g);  // -sigma^2 eta g
  CHECK(e.mean().isApprox(expected, 1e-12));

  // g = 0 keeps the expert at its projected point
  SketchExpert idle(0.5, 1.0, 2, 1);
  Eigen::VectorXd w(2);
  w << 0.3, -0.1;
  idle.update(Eigen::VectorXd::Zero(2), zero2, w);
  CHECK(idle.mean() == w);
}

TEST_CASE("scalar oracle: sketched update matches the full expert") {
  // sigma=1, eta=1/2, g=1 from zero state: mean -1/3 all routes
  SketchExpert sk(0.5, 1.0, 1, 2);
  FullExpert full(0.5, 1.0, 1);
  Eigen::VectorXd g(1), zero1 = Eigen::VectorXd::Zero(1);
  g << 1;
  sk.update(g, zero1, zero1);
  full.update(g, zero1, zero1);
  CHECK(sk.mean()(0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(sk.mean()(0) == doctest::Approx(full.mean()(0)).epsilon(1e-12));
}

TEST_CASE("H consistency over a long random stream (d=20, m=5)") {
  SplitMix64 rng(11);
  SketchExpert e(0.0625, 1.0, 20, 5);
  Eigen::VectorXd w_ctrl = Eigen::VectorXd::Zero(20);
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    const Eigen::VectorXd g = testutil::random_vector(rng, 20);
    e.update(g, w_ctrl, e.mean());
    worst = std::max(worst, h_consistency_error(e));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("frequent-directions guarantee (dense eigen oracle, d=20, m=5)") {
  SplitMix64 rng(13);
  const int d = 20, m = 5;
  SketchExpert e(0.03125, 1.0, d, m);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  for (int t = 0; t < 300; ++t) {
    const Eigen::VectorXd g = testutil::random_vector(rng, d);
    gram += g * g.transpose();
    e.ingest(g);
  }
  const Eigen::MatrixXd diff = gram - e.sketch().transpose() * e.sketch();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(diff);
  CHECK(eig.eigenvalues().minCoeff() > -1e-8);  // 0 <= G^T G - S^T S
  CHECK(eig.eigenvalues().maxCoeff() <=
        e.shrinkage_sum() + 1e-8);  // ... <= Delta I
  CHECK(e.compress_count() == 300 / (m + 1));  // one SVD per m+1 ingests
}

TEST_CASE("exact subspace regime: sketch matches the full expert per round") {
  SplitMix64 rng(17);
  const int d = 10, m = 4, t_max = 500;
  // gradients confined to a fixed (m-1)-dimensional subspace
  Eigen::MatrixXd basis(d, m - 1);
  for (int j = 0; j < m - 1; ++j) basis.col(j) = testutil::random_unit(rng, d);
  SketchExpert sk(0.0625, 1.0, d, m);
  FullExpert full(0.0625, 1.0, d);
  DomainSpec slab(Slab{1.0, Eigen::VectorXd::Zero(d)});
  double worst = 0;
  for (int t = 0; t < t_max; ++t) {
    Eigen::VectorXd x = basis * testutil::random_vector(rng, m - 1);
    if (x.norm() < 1e-6) continue;
    x.normalize();
    slab.set_slab_direction(x);
    const Eigen::VectorXd w_sk = sk.predict(slab);
    const Eigen::VectorXd w_full = full.predict(slab);
    worst = std::max(worst, (w_sk - w_full).norm());
    const Eigen::VectorXd w_ctrl = rng.uniform(-0.9, 0.9) * x;
    const Eigen::VectorXd g = rng.uniform(-1, 1) * x;
    sk.update(g, w_ctrl, w_sk);
    full.update(g, w_ctrl, w_full);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("non-slab domains are rejected") {
  SketchExpert e(0.5, 1.0, 2, 1);
  CHECK_THROWS_AS(e.predict(DomainSpec(L2Ball{1.0})), ConfigError);
}
