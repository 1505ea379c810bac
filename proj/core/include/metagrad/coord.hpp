#pragma once

#include <Eigen/Core>
#include <vector>

#include "metagrad/controller.hpp"
#include "metagrad/scalar_expert.hpp"

namespace metagrad {

// Per-dimension range bound over [-d_i, d_i]: (D_i + |w_i|) * |g_i|.
inline double coord_range_bound(double d_i, double w_i, double g_i) {
  return (d_i + std::abs(w_i)) * std::abs(g_i);
}

// Coordinate-wise variant: one independent scalar controller-and-expert-pool
// instance per dimension over a rectangular domain, fed the 1-D losses
// w -> w * g_{t,i}. The joint prediction is exactly the concatenation of the
// per-dimension predictions; no cross-dimension state exists. sigma is
// shared across dimensions.
class CoordMetaGrad {
 public:
  CoordMetaGrad(Eigen::VectorXd half_widths, double sigma);

  const Eigen::VectorXd& predict();
  void observe(const Eigen::VectorXd& g);

  int dim() const { return static_cast<int>(half_widths_.size()); }
  const Controller<ScalarExpert>& dimension(int i) const { return dims_[i]; }
  long reset_count() const;            // summed over dimensions
  std::size_t active_count() const;      // max over dimensions, current round
  std::size_t max_active_count() const;  // max over dimensions
  double b_max() const;                  // max over dimensions

 private:
  Eigen::VectorXd half_widths_;
  std::vector<Controller<ScalarExpert>> dims_;
  Eigen::VectorXd prediction_;
};

}  // namespace metagrad
