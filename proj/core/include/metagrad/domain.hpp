#pragma once

#include <Eigen/Core>
#include <variant>

namespace metagrad {

// Prediction domains. All variants contain the origin. The slab
// {w : |w^T x| <= C} is time-varying: its direction x must be set fresh each
// round before prediction.
struct L2Ball {
  double radius;
};

struct Box {
  Eigen::VectorXd half_widths;
};

struct Slab {
  double bound;               // C
  Eigen::VectorXd direction;  // x_t, refreshed per round
};

class DomainSpec {
 public:
  explicit DomainSpec(L2Ball ball);
  explicit DomainSpec(Box box);
  explicit DomainSpec(Slab slab);

  bool is_ball() const { return std::holds_alternative<L2Ball>(v_); }
  bool is_box() const { return std::holds_alternative<Box>(v_); }
  bool is_slab() const { return std::holds_alternative<Slab>(v_); }

  const L2Ball& ball() const;
  const Box& box() const;
  const Slab& slab() const;

  void set_slab_direction(const Eigen::VectorXd& x);

 private:
  std::variant<L2Ball, Box, Slab> v_;
};

// sign(y) * max(|y| - c, 0)
double shrink(double y, double c);

bool contains(const DomainSpec& domain, const Eigen::VectorXd& w,
              double tol = 0.0);

// Euclidean projection, exact closed form per variant. Idempotent;
// returns w unchanged when feasible.
Eigen::VectorXd project(const DomainSpec& domain, const Eigen::VectorXd& w);

// Domain-aware gradient size max_{w in U} |(w - w_t)^T g|, exact per variant:
//   ball:  D2*||g||_2 + |w_t^T g|
//   box:   sum_i D_i*|g_i| + |w_t^T g|
//   slab:  |c|*(C + |w_t^T x|) for g = c*x; the slab has infinite diameter
//          orthogonally, so a non-parallel g has no finite bound and yields
//          +inf, which callers must reject.
double range_bound(const DomainSpec& domain, const Eigen::VectorXd& w_t,
                   const Eigen::VectorXd& g);

}  // namespace metagrad
