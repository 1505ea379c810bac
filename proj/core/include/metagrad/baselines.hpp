#pragma once

#include <Eigen/Core>

#include "metagrad/domain.hpp"

namespace metagrad {

// Mirror-descent baselines. Zero-history denominators take no step
// (convention 0*g/0 -> 0); no epsilon stabilizer is added.

// OGD with time-decreasing rate eta_t = sigma / (sqrt(t) * max_{s<=t} ||g_s||),
// the max including round t. Domain: L2 ball.
class OgdT {
 public:
  OgdT(DomainSpec domain, double sigma, int dim);
  const Eigen::VectorXd& prediction() const { return w_; }
  void observe(const Eigen::VectorXd& g);

 private:
  DomainSpec domain_;
  double sigma_;
  Eigen::VectorXd w_;
  double max_grad_norm_ = 0.0;
  long t_ = 0;
};

// OGD with norm-adaptive rate eta_t = sigma / sqrt(sum_{s<=t} ||g_s||^2).
// Domain: L2 ball.
class OgdNorm {
 public:
  OgdNorm(DomainSpec domain, double sigma, int dim);
  const Eigen::VectorXd& prediction() const { return w_; }
  void observe(const Eigen::VectorXd& g);

 private:
  DomainSpec domain_;
  double sigma_;
  Eigen::VectorXd w_;
  double grad_sq_sum_ = 0.0;
};

// Diagonal AdaGrad, eta_{t,i} = sigma / sqrt(sum_{s<=t} g_{s,i}^2) per
// dimension. Domain: box, where the diagonal-metric projection is a
// per-coordinate clamp.
class AdaGradDiag {
 public:
  AdaGradDiag(DomainSpec domain, double sigma, int dim);
  const Eigen::VectorXd& prediction() const { return w_; }
  void observe(const Eigen::VectorXd& g);

 private:
  DomainSpec domain_;
  double sigma_;
  Eigen::VectorXd w_;
  Eigen::VectorXd grad_sq_sum_;
};

}  // namespace metagrad
