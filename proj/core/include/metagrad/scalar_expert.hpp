#pragma once

#include <algorithm>
#include <cmath>

#include "metagrad/errors.hpp"

namespace metagrad {

// 1-D prediction domain [-half_width, half_width].
struct Interval {
  double half_width;
};

// Scalar specialization of the full-matrix eta-expert, used by the
// per-coordinate algorithm. State is plain doubles rather than 1x1
// matrices so a d-dimensional round costs O(d) in total.
class ScalarExpert {
 public:
  using Vector = double;
  using Domain = Interval;

  ScalarExpert(double eta, double sigma, long wake_round = 1)
      : eta_(eta), sigma_(sigma), wake_round_(wake_round) {
    if (!(eta > 0)) throw ConfigError("expert eta must be > 0");
    if (!(sigma > 0)) throw ConfigError("expert sigma must be > 0");
    cov_ = sigma * sigma;
    prec_ = 1.0 / (sigma * sigma);
  }

  double predict(const Interval& domain) const {
    return std::clamp(mean_, -domain.half_width, domain.half_width);
  }

  void update(double g, double w_controller, double w_expert) {
    if (g == 0.0) {
      mean_ = w_expert;
      return;
    }
    const double two_eta_sq = 2.0 * eta_ * eta_;
    const double cov_g = cov_ * g;
    cov_ -= two_eta_sq * cov_g * cov_g / (1.0 + two_eta_sq * g * cov_g);
    prec_ += two_eta_sq * g * g;
    if (++updates_ % kRecomputePeriod == 0) cov_ = 1.0 / prec_;
    const double factor = 1.0 + 2.0 * eta_ * (w_expert - w_controller) * g;
    mean_ = w_expert - factor * eta_ * cov_ * g;
  }

  double eta() const { return eta_; }
  double sigma() const { return sigma_; }
  long wake_round() const { return wake_round_; }
  double mean() const { return mean_; }
  double covariance() const { return cov_; }
  double precision() const { return prec_; }

  static constexpr long kRecomputePeriod = 1L << 14;

 private:
  double eta_;
  double sigma_;
  long wake_round_;
  double mean_ = 0.0;
  double cov_;
  double prec_;
  long updates_ = 0;
};

}  // namespace metagrad
