#include "metagrad/coord.hpp"

#include "metagrad/errors.hpp"

namespace metagrad {

CoordMetaGrad::CoordMetaGrad(Eigen::VectorXd half_widths, double sigma)
    : half_widths_(std::move(half_widths)) {
  const int d = static_cast<int>(half_widths_.size());
  if (d < 1) throw ConfigError("coordinate algorithm needs dimension >= 1");
  if ((half_widths_.array() < 0).any()) {
    throw ConfigError("rectangle half-widths must be >= 0");
  }
  dims_.reserve(d);
  for (int i = 0; i < d; ++i) {
    dims_.emplace_back(0.0, [sigma](double eta, long wake_round) {
      return ScalarExpert(eta, sigma, wake_round);
    });
  }
  prediction_ = Eigen::VectorXd::Zero(d);
}

const Eigen::VectorXd& CoordMetaGrad::predict() {
  for (int i = 0; i < dim(); ++i) {
    prediction_(i) = dims_[i].predict(Interval{half_widths_(i)});
  }
  return prediction_;
}

void CoordMetaGrad::observe(const Eigen::VectorXd& g) {
  if (g.size() != half_widths_.size()) {
    throw ConfigError("coordinate observe: gradient dimension mismatch");
  }
  for (int i = 0; i < dim(); ++i) {
    const double b = coord_range_bound(half_widths_(i), prediction_(i), g(i));
    dims_[i].observe(g(i), b);
  }
}

long CoordMetaGrad::reset_count() const {
  long n = 0;
  for (const auto& c : dims_) n += c.reset_count();
  return n;
}

std::size_t CoordMetaGrad::active_count() const {
  std::size_t n = 0;
  for (const auto& c : dims_) n = std::max(n, c.active_count());
  return n;
}

std::size_t CoordMetaGrad::max_active_count() const {
  std::size_t n = 0;
  for (const auto& c : dims_) n = std::max(n, c.max_active_count());
  return n;
}

double CoordMetaGrad::b_max() const {
  double b = 0;
  for (const auto& c : dims_) b = std::max(b, c.b_max());
  return b;
}

}  // namespace metagrad
