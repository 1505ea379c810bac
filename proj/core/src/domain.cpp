#include "metagrad/domain.hpp"

#include <cmath>
#include <limits>

#include "metagrad/errors.hpp"

namespace metagrad {

DomainSpec::DomainSpec(L2Ball ball) : v_(std::move(ball)) {
  if (!(std::get<L2Ball>(v_).radius >= 0)) {
    throw ConfigError("L2 ball radius must be >= 0");
  }
}

DomainSpec::DomainSpec(Box box) : v_(std::move(box)) {
  if ((std::get<Box>(v_).half_widths.array() < 0).any()) {
    throw ConfigError("box half-widths must be >= 0");
  }
}

DomainSpec::DomainSpec(Slab slab) : v_(std::move(slab)) {
  if (!(std::get<Slab>(v_).bound >= 0)) {
    throw ConfigError("slab bound must be >= 0");
  }
}

const L2Ball& DomainSpec::ball() const {
  if (!is_ball()) throw ConfigError("domain is not an L2 ball");
  return std::get<L2Ball>(v_);
}

const Box& DomainSpec::box() const {
  if (!is_box()) throw ConfigError("domain is not a box");
  return std::get<Box>(v_);
}

const Slab& DomainSpec::slab() const {
  if (!is_slab()) throw ConfigError("domain is not a slab");
  return std::get<Slab>(v_);
}

void DomainSpec::set_slab_direction(const Eigen::VectorXd& x) {
  if (!is_slab()) throw ConfigError("domain is not a slab");
  std::get<Slab>(v_).direction = x;
}

double shrink(double y, double c) {
  const double excess = std::abs(y) - c;
  if (excess <= 0) return 0.0;
  return y > 0 ? excess : -excess;
}

bool contains(const DomainSpec& domain, const Eigen::VectorXd& w, double tol) {
  if (domain.is_ball()) return w.norm() <= domain.ball().radius + tol;
  if (domain.is_box()) {
    return (w.array().abs() <= domain.box().half_widths.array() + tol).all();
  }
  const Slab& s = domain.slab();
  return std::abs(s.direction.dot(w)) <= s.bound + tol;
}

Eigen::VectorXd project(const DomainSpec& domain, const Eigen::VectorXd& w) {
  if (domain.is_ball()) {
    const double r = domain.ball().radius;
    const double n = w.norm();
    if (n <= r) return w;
    if (r == 0.0) return Eigen::VectorXd::Zero(w.size());
    return w * (r / n);
  }
  if (domain.is_box()) {
    const Eigen::VectorXd& hw = domain.box().half_widths;
    return w.cwiseMin(hw).cwiseMax(-hw);
  }
  // Single linear constraint |x^T w| <= C: closed-form step along x.
  const Slab& s = domain.slab();
  const double xx = s.direction.squaredNorm();
  if (xx == 0.0) return w;  // degenerate slab is all of R^d
  const double excess = shrink(s.direction.dot(w), s.bound);
  if (excess == 0.0) return w;
  return w - (excess / xx) * s.direction;
}

double range_bound(const DomainSpec& domain, const Eigen::VectorXd& w_t,
                   const Eigen::VectorXd& g) {
  if (domain.is_ball()) {
    return domain.ball().radius * g.norm() + std::abs(w_t.dot(g));
  }
  if (domain.is_box()) {
    const Eigen::VectorXd& hw = domain.box().half_widths;
    return hw.cwiseProduct(g.cwiseAbs()).sum() + std::abs(w_t.dot(g));
  }
  const Slab& s = domain.slab();
  const double gmax = g.cwiseAbs().maxCoeff();
  if (gmax == 0.0) return 0.0;
  const double xx = s.direction.squaredNorm();
  if (xx == 0.0) return std::numeric_limits<double>::infinity();
  const double c = s.direction.dot(g) / xx;
  const double residual = (g - c * s.direction).cwiseAbs().maxCoeff();
  if (residual > 1e-9 * gmax) {
    // g not parallel to x_t: unbounded in the orthogonal directions.
    return std::numeric_limits<double>::infinity();
  }
  return std::abs(c) * (s.bound + std::abs(w_t.dot(s.direction)));
}

}  // namespace metagrad
