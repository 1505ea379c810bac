#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "metagrad/domain.hpp"
#include "metagrad/rng.hpp"

namespace testutil {

inline Eigen::VectorXd random_vector(metagrad::SplitMix64& rng, int dim,
                                     double lo = -1.0, double hi = 1.0) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

inline Eigen::VectorXd random_unit(metagrad::SplitMix64& rng, int dim) {
  for (;;) {
    Eigen::VectorXd v = random_vector(rng, dim);
    const double n = v.norm();
    if (n > 1e-3) return v / n;
  }
}

// Dense-grid maximization of |(w - w_t)^T g| over the domain, the
// independent oracle for range_bound on d <= 3 instances. The ball is
// sampled over a dense angular grid of its boundary (plus interior radii),
// the box over a dense lattice including its vertices, and the slab over a
// dense grid of the one coordinate w^T x that matters.
inline double range_bound_grid_oracle(const metagrad::DomainSpec& domain,
                                      const Eigen::VectorXd& w_t,
                                      const Eigen::VectorXd& g) {
  const int d = static_cast<int>(w_t.size());
  double best = 0.0;
  const auto consider = [&](const Eigen::VectorXd& w) {
    best = std::max(best, std::abs((w - w_t).dot(g)));
  };
  if (domain.is_ball()) {
    const double r = domain.ball().radius;
    const std::vector<double> radii = {0.0, 0.5 * r, r};
    if (d == 1) {
      for (double rad : radii) {
        consider(Eigen::VectorXd::Constant(1, rad));
        consider(Eigen::VectorXd::Constant(1, -rad));
      }
    } else if (d == 2) {
      for (double rad : radii) {
        for (int i = 0; i < 4001; ++i) {
          const double th = 2 * M_PI * i / 4001.0;
          Eigen::VectorXd w(2);
          w << rad * std::cos(th), rad * std::sin(th);
          consider(w);
        }
      }
    } else {
      for (double rad : radii) {
        for (int i = 0; i <= 400; ++i) {
          const double th = M_PI * i / 400.0;
          for (int j = 0; j < 800; ++j) {
            const double ph = 2 * M_PI * j / 800.0;
            Eigen::VectorXd w(3);
            w << rad * std::sin(th) * std::cos(ph),
                rad * std::sin(th) * std::sin(ph), rad * std::cos(th);
            consider(w);
          }
        }
      }
    }
  } else if (domain.is_box()) {
    const Eigen::VectorXd& hw = domain.box().half_widths;
    const int n = 21;  // odd: lattice contains all vertices exactly
    std::vector<int> idx(d, 0);
    for (;;) {
      Eigen::VectorXd w(d);
      for (int i = 0; i < d; ++i) {
        w(i) = -hw(i) + 2.0 * hw(i) * idx[i] / (n - 1);
      }
      consider(w);
      int i = 0;
      while (i < d && ++idx[i] == n) idx[i++] = 0;
      if (i == d) break;
    }
  } else {
    const metagrad::Slab& s = domain.slab();
    const double xx = s.direction.squaredNorm();
    if (xx == 0.0) return 0.0;
    // the objective depends on w only through w^T x in [-C, C]
    for (int i = 0; i <= 4000; ++i) {
      const double a = -s.bound + 2.0 * s.bound * i / 4000.0;
      consider((a / xx) * s.direction);
    }
  }
  return best;
}

// Numerically robust relative mismatch
inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace testutil
