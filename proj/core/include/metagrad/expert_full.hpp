#pragma once

#include <Eigen/Core>

#include "metagrad/domain.hpp"

namespace metagrad {

// Full-matrix eta-expert: continuous exponential weights on the quadratic
// surrogate, equivalent to an ONS-style update. Maintains both the
// covariance Sigma and its inverse Lambda so that
//   Lambda = sigma^-2 I + 2 eta^2 sum_{s=a}^{t} g_s g_s^T,
//   Sigma  = Lambda^-1,
// with Sherman-Morrison updates and a periodic direct recompute of Sigma to
// cap floating-point drift on long runs.
class FullExpert {
 public:
  using Vector = Eigen::VectorXd;
  using Domain = DomainSpec;

  FullExpert(double eta, double sigma, int dim, long wake_round = 1);

  // Greedy projection of the mean in the Lambda metric. Supported pairings:
  // slab (closed form), 1-D box (clamp), and any domain that already
  // contains the mean. Other pairings are a configuration error; they are
  // rejected when an experiment is set up, never mid-run.
  Vector predict(const Domain& domain) const;

  // g is the gradient at the controller's prediction; w_expert is this
  // expert's own (projected) prediction for the round.
  void update(const Vector& g, const Vector& w_controller,
              const Vector& w_expert);

  double eta() const { return eta_; }
  double sigma() const { return sigma_; }
  long wake_round() const { return wake_round_; }
  int dim() const { return static_cast<int>(mean_.size()); }
  const Vector& mean() const { return mean_; }  // unprojected
  const Eigen::MatrixXd& covariance() const { return cov_; }
  const Eigen::MatrixXd& precision() const { return prec_; }

  // direct-inverse refresh cadence for Sigma
  static constexpr long kRecomputePeriod = 1L << 14;

 private:
  double eta_;
  double sigma_;
  long wake_round_;
  Vector mean_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd prec_;
  long updates_ = 0;
};

}  // namespace metagrad
