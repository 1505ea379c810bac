#include <cmath>

#include "metagrad/bench.hpp"
#include "metagrad/controller.hpp"
#include "metagrad/errors.hpp"
#include "metagrad/rng.hpp"
#include "metagrad/scalar_expert.hpp"

namespace metagrad {

SimKind sim_kind_from_string(const std::string& name) {
  if (name == "offline_abs") return SimKind::offline_abs;
  if (name == "stochastic_abs") return SimKind::stochastic_abs;
  throw ConfigError("unknown simulation kind: " + name);
}

const char* to_string(SimKind kind) {
  return kind == SimKind::offline_abs ? "offline_abs" : "stochastic_abs";
}

namespace {

// Right-continuous subderivative of |.|. With the 0-at-kink choice the 1-D
// norm-adaptive iterate is attracted onto the representable optimum 1/4 in
// finite time and stops learning, which destroys the sqrt(T) growth these
// simulations are meant to exhibit; any one-sided choice avoids that.
double sgn(double v) { return v >= 0 ? 1.0 : -1.0; }

// 1-D norm-adaptive mirror descent on [-1,1]; in one dimension the diagonal
// and the norm versions coincide, but we keep separate instances.
struct Ogd1d {
  double sigma;
  double w = 0;
  double grad_sq_sum = 0;
  void observe(double g) {
    grad_sq_sum += g * g;
    if (grad_sq_sum == 0) return;
    w = std::clamp(w - sigma / std::sqrt(grad_sq_sum) * g, -1.0, 1.0);
  }
};

}  // namespace

SimCurves run_simulation(SimKind kind, long t_max, std::uint64_t seed) {
  if (t_max < 1) throw ConfigError("simulation horizon must be >= 1");

  // domain [-1,1]; tunings: sigma = max_u |u| = 1 for the multi-eta method,
  // sigma = max_{w,u} |w-u| / sqrt(2) = sqrt(2) for the mirror-descent ones
  Controller<ScalarExpert> metagrad(0.0, [](double eta, long wake) {
    return ScalarExpert(eta, 1.0, wake);
  });
  Ogd1d adagrad{std::sqrt(2.0)};
  Ogd1d ogdnorm{std::sqrt(2.0)};

  const double comparator = kind == SimKind::offline_abs ? 0.25 : 0.5;
  SplitMix64 rng(seed);

  SimCurves curves;
  curves.metagrad.reserve(t_max);
  curves.adagrad.reserve(t_max);
  curves.ogdnorm.reserve(t_max);
  double regret_mg = 0, regret_ada = 0, regret_ogd = 0;
  const Interval domain{1.0};

  for (long t = 0; t < t_max; ++t) {
    double target = 0.25;
    if (kind == SimKind::stochastic_abs) {
      target = rng.next_double() < 0.6 ? 0.5 : -0.5;  // +1/2 w.p. 0.6
    }
    const double comparator_loss = std::abs(comparator - target);

    const double w_mg = metagrad.predict(domain);
    regret_mg += std::abs(w_mg - target) - comparator_loss;
    const double g_mg = sgn(w_mg - target);
    metagrad.observe(g_mg, (1.0 + std::abs(w_mg)) * std::abs(g_mg));

    regret_ada += std::abs(adagrad.w - target) - comparator_loss;
    adagrad.observe(sgn(adagrad.w - target));

    regret_ogd += std::abs(ogdnorm.w - target) - comparator_loss;
    ogdnorm.observe(sgn(ogdnorm.w - target));

    curves.metagrad.push_back(regret_mg);
    curves.adagrad.push_back(regret_ada);
    curves.ogdnorm.push_back(regret_ogd);
  }
  return curves;
}

}  // namespace metagrad
