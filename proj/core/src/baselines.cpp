#include "metagrad/baselines.hpp"

#include <cmath>

#include "metagrad/errors.hpp"

namespace metagrad {

OgdT::OgdT(DomainSpec domain, double sigma, int dim)
    : domain_(std::move(domain)), sigma_(sigma) {
  if (!domain_.is_ball()) throw ConfigError("ogdt requires an L2 ball domain");
  if (!(sigma > 0)) throw ConfigError("sigma must be > 0");
  w_ = Eigen::VectorXd::Zero(dim);
}

void OgdT::observe(const Eigen::VectorXd& g) {
  ++t_;
  max_grad_norm_ = std::max(max_grad_norm_, g.norm());
  if (max_grad_norm_ == 0.0) return;
  const double eta = sigma_ / (std::sqrt(static_cast<double>(t_)) * max_grad_norm_);
  w_ = project(domain_, w_ - eta * g);
}

OgdNorm::OgdNorm(DomainSpec domain, double sigma, int dim)
    : domain_(std::move(domain)), sigma_(sigma) {
  if (!domain_.is_ball()) throw ConfigError("ogdnorm requires an L2 ball domain");
  if (!(sigma > 0)) throw ConfigError("sigma must be > 0");
  w_ = Eigen::VectorXd::Zero(dim);
}

void OgdNorm::observe(const Eigen::VectorXd& g) {
  grad_sq_sum_ += g.squaredNorm();
  if (grad_sq_sum_ == 0.0) return;
  const double eta = sigma_ / std::sqrt(grad_sq_sum_);
  w_ = project(domain_, w_ - eta * g);
}

AdaGradDiag::AdaGradDiag(DomainSpec domain, double sigma, int dim)
    : domain_(std::move(domain)), sigma_(sigma) {
  if (!domain_.is_box()) throw ConfigError("adagrad requires a box domain");
  if (!(sigma > 0)) throw ConfigError("sigma must be > 0");
  if (domain_.box().half_widths.size() != dim) {
    throw ConfigError("adagrad: box dimension mismatch");
  }
  w_ = Eigen::VectorXd::Zero(dim);
  grad_sq_sum_ = Eigen::VectorXd::Zero(dim);
}

void AdaGradDiag::observe(const Eigen::VectorXd& g) {
  const Eigen::VectorXd& hw = domain_.box().half_widths;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    grad_sq_sum_(i) += g(i) * g(i);
    if (grad_sq_sum_(i) == 0.0) continue;  // zero gradient history: no step
    const double eta = sigma_ / std::sqrt(grad_sq_sum_(i));
    w_(i) = std::clamp(w_(i) - eta * g(i), -hw(i), hw(i));
  }
}

}  // namespace metagrad
