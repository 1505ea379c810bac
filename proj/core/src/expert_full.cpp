#include "metagrad/expert_full.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "metagrad/errors.hpp"

namespace metagrad {

FullExpert::FullExpert(double eta, double sigma, int dim, long wake_round)
    : eta_(eta), sigma_(sigma), wake_round_(wake_round) {
  if (!(eta > 0)) throw ConfigError("expert eta must be > 0");
  if (!(sigma > 0)) throw ConfigError("expert sigma must be > 0");
  if (dim < 1) throw ConfigError("expert dimension must be >= 1");
  mean_ = Vector::Zero(dim);
  cov_ = sigma * sigma * Eigen::MatrixXd::Identity(dim, dim);
  prec_ = Eigen::MatrixXd::Identity(dim, dim) / (sigma * sigma);
}

FullExpert::Vector FullExpert::predict(const Domain& domain) const {
  if (domain.is_slab()) {
    const Slab& s = domain.slab();
    const double excess = shrink(s.direction.dot(mean_), s.bound);
    if (excess == 0.0) return mean_;
    const Vector cov_x = cov_ * s.direction;
    const double denom = s.direction.dot(cov_x);
    if (!(denom > 0)) {
      throw NumericalError("slab projection: x^T Sigma x not positive");
    }
    return mean_ - (excess / denom) * cov_x;
  }
  if (contains(domain, mean_)) return mean_;
  if (domain.is_box() && mean_.size() == 1) {
    // 1-D Mahalanobis projection reduces to a clamp.
    const double hw = domain.box().half_widths(0);
    Vector w(1);
    w(0) = std::clamp(mean_(0), -hw, hw);
    return w;
  }
  throw ConfigError(
      "full expert: no closed-form projection for this domain pairing");
}

void FullExpert::update(const Vector& g, const Vector& w_controller,
                        const Vector& w_expert) {
  if (g.isZero(0.0)) {
    mean_ = w_expert;
    return;
  }
  const double two_eta_sq = 2.0 * eta_ * eta_;
  const Vector cov_g = cov_ * g;
  const double denom = 1.0 + two_eta_sq * g.dot(cov_g);
  cov_.noalias() -= (two_eta_sq / denom) * (cov_g * cov_g.transpose());
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
  prec_.noalias() += two_eta_sq * (g * g.transpose());
  if (++updates_ % kRecomputePeriod == 0) {
    cov_ = prec_.llt().solve(
        Eigen::MatrixXd::Identity(prec_.rows(), prec_.cols()));
    cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
  }
  const double factor = 1.0 + 2.0 * eta_ * (w_expert - w_controller).dot(g);
  mean_.noalias() = w_expert - (factor * eta_) * (cov_ * g);
}

}  // namespace metagrad
