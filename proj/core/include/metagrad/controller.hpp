#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "metagrad/errors.hpp"

namespace metagrad {

// Learning rates come from the power-of-two grid {2^i : i in Z}. Grid points
// are stored as integer exponents so interval-membership tests never drift;
// eta is materialized as an exact power of two.
namespace eta_grid {

inline constexpr int kMinExponent = -1074;  // smallest double exponent
inline constexpr int kMaxExponent = 1023;

inline double value(int exponent) { return std::ldexp(1.0, exponent); }

// Largest integer e with 2^e <= x, for finite x > 0.
inline int exponent_at_most(double x) {
  if (std::isinf(x)) return kMaxExponent;
  int e = std::ilogb(x);
  while (e < kMaxExponent && std::ldexp(1.0, e + 1) <= x) ++e;
  while (e > kMinExponent && std::ldexp(1.0, e) > x) --e;
  return e;
}

}  // namespace eta_grid

// Half-open window of active exponents: i such that lo_value < 2^i <=
// hi_value, clamped to the representable exponent range. Empty when lo > hi.
struct ExponentRange {
  int lo = 1;
  int hi = 0;
  bool empty() const { return lo > hi; }
  int size() const { return empty() ? 0 : hi - lo + 1; }
  bool contains(int e) const { return e >= lo && e <= hi; }
};

// Active learning rates for the round following history (wake_sum, b_prev),
// where wake_sum = sum_{s<t} b_s * B_{s-1}/B_s and b_prev = B_{t-1}:
// empty while B_{t-1} = 0, otherwise the grid intersected with
//   ( 1 / (2*(wake_sum + B_{t-1})),  1 / (2*B_{t-1}) ].
// The interval is open at the lower end and closed at the upper end.
inline ExponentRange active_exponent_range(double wake_sum, double b_prev) {
  if (!(b_prev > 0)) return {};
  const double hi = 1.0 / (2.0 * b_prev);
  const double lo = 1.0 / (2.0 * (wake_sum + b_prev));
  ExponentRange r;
  r.hi = eta_grid::exponent_at_most(hi);
  r.lo = eta_grid::exponent_at_most(lo) + 1;  // smallest e with 2^e > lo
  if (r.lo < eta_grid::kMinExponent) r.lo = eta_grid::kMinExponent;
  if (r.hi > eta_grid::kMaxExponent) r.hi = eta_grid::kMaxExponent;
  return r;
}

// Surrogate loss eta*r + (eta*r)^2 with r = (u - w_t)^T g_t. Always >= -1/4.
inline double surrogate_loss(double eta, double r) {
  const double z = eta * r;
  return z + z * z;
}

// Clipping factor B_{t-1}/B_t applied to gradients so that next round's
// effective gradient size is predictable; 0 when B_t = 0.
inline double clip_factor(double b_prev, double b_cur) {
  return b_cur > 0 ? b_prev / b_cur : 0.0;
}

template <class Vector>
Vector clip_gradient(const Vector& g, double b_prev, double b_cur) {
  return clip_factor(b_prev, b_cur) * g;
}

// Reset condition: a new epoch starts after the first round t with
// B_t > B_tau * sum_{s<=t} b_s/B_s, strict inequality.
inline bool reset_due(double b_cur, double epoch_anchor, double reset_sum) {
  return b_cur > epoch_anchor * reset_sum;
}

namespace detail {

inline double logsumexp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (std::isinf(m)) return m;
  double s = 0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

inline double dot(double a, double b) { return a * b; }
inline double dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.dot(b);
}

}  // namespace detail

// Aggregated prediction sum_eta p(eta) eta w^eta / sum_eta p(eta) eta:
// expert weights are tilted by their learning rates, favoring larger eta.
template <class Vector>
Vector tilted_mixture(const std::vector<double>& weights,
                      const std::vector<double>& etas,
                      const std::vector<Vector>& predictions, Vector zero) {
  Vector num = std::move(zero);
  double den = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double tilt = weights[i] * etas[i];
    num += tilt * predictions[i];
    den += tilt;
  }
  return num / den;
}

// Exponential-weights update on the clipped surrogate losses, in log domain,
// renormalized so the total mass over the active set is preserved.
inline void update_weights_log(std::vector<double>& ln_w,
                               const std::vector<double>& losses) {
  const double mass_before = detail::logsumexp(ln_w);
  std::vector<double> shifted(ln_w.size());
  for (std::size_t i = 0; i < ln_w.size(); ++i) shifted[i] = ln_w[i] - losses[i];
  const double mass_after = detail::logsumexp(shifted);
  const double correction = mass_before - mass_after;
  for (std::size_t i = 0; i < ln_w.size(); ++i) ln_w[i] = shifted[i] + correction;
}

// Controller for the multiple-learning-rate scheme: maintains the dynamic
// eta grid, starts/stops eta-experts, aggregates their predictions by
// weights tilted with eta, updates sleeping-expert weights on clipped
// surrogate losses, and resets epochs on gradient-scale jumps.
//
// Expert must provide:
//   using Vector = ...;   using Domain = ...;
//   Vector predict(const Domain&) const;
//   void update(const Vector& g, const Vector& w_controller,
//               const Vector& w_expert);
//
// A controller instance is single-writer: predict() then observe(), one
// round at a time. Distinct instances share nothing.
template <class Expert>
class Controller {
 public:
  using Vector = typename Expert::Vector;
  using Domain = typename Expert::Domain;
  // (eta, wake round) -> fresh expert state
  using Factory = std::function<Expert(double, long)>;

  Controller(Vector zero, Factory factory)
      : zero_(std::move(zero)),
        prediction_(zero_),
        factory_(std::move(factory)) {}

  // Phase 1 of round t: refresh the active set (spawning new experts with
  // weight 1, dropping expired ones for good), project the active experts
  // onto the revealed domain, and aggregate. With no expert awake the
  // default prediction is the origin.
  const Vector& predict(const Domain& domain) {
    if (awaiting_observe_) throw ConfigError("predict called twice in a round");
    const ExponentRange range = active_exponent_range(wake_sum_, b_prev_);
    for (auto it = slots_.begin(); it != slots_.end();) {
      if (!range.contains(it->first)) {
        it = slots_.erase(it);  // expired: loses all relevance
      } else {
        ++it;
      }
    }
    if (!range.empty()) {
      for (int e = range.lo; e <= range.hi; ++e) {
        if (!slots_.count(e)) {
          slots_.emplace(
              e, Slot{0.0, factory_(eta_grid::value(e), round_ + 1), zero_});
        }
      }
    }
    if (slots_.size() > max_active_) max_active_ = slots_.size();

    if (slots_.empty()) {
      prediction_ = zero_;
    } else {
      scratch_weights_.clear();
      scratch_etas_.clear();
      scratch_preds_.clear();
      for (auto& [e, slot] : slots_) {
        slot.last_prediction = slot.expert.predict(domain);
        scratch_weights_.push_back(std::exp(slot.ln_weight));
        scratch_etas_.push_back(eta_grid::value(e));
        scratch_preds_.push_back(slot.last_prediction);
      }
      prediction_ =
          tilted_mixture(scratch_weights_, scratch_etas_, scratch_preds_, zero_);
    }
    awaiting_observe_ = true;
    return prediction_;
  }

  // Phase 2 of round t: feed the gradient at the controller's prediction
  // together with its range bound b_t. Every active expert is updated with
  // the unclipped surrogate; controller weights move on the clipped ones,
  // unless the round triggers a reset.
  void observe(const Vector& g, double b) {
    if (!awaiting_observe_) throw ConfigError("observe called before predict");
    if (!(b >= 0) || !std::isfinite(b)) {
      throw ConfigError("range bound b_t must be finite and >= 0");
    }
    const double b_cur = std::max(b_prev_, b);

    for (auto& [e, slot] : slots_) {
      slot.expert.update(g, prediction_, slot.last_prediction);
    }

    reset_sum_ += b_cur > 0 ? b / b_cur : 0.0;
    if (reset_due(b_cur, epoch_anchor_, reset_sum_)) {
      for (auto& [e, slot] : slots_) slot.ln_weight = 0.0;
      epoch_anchor_ = b_cur;
      ++reset_count_;
    } else if (!slots_.empty()) {
      const double factor = clip_factor(b_prev_, b_cur);
      const double wg = detail::dot(prediction_, g);
      std::vector<double> ln_w, losses;
      ln_w.reserve(slots_.size());
      losses.reserve(slots_.size());
      for (auto& [e, slot] : slots_) {
        const double r_clipped =
            factor * (detail::dot(slot.last_prediction, g) - wg);
        ln_w.push_back(slot.ln_weight);
        losses.push_back(surrogate_loss(eta_grid::value(e), r_clipped));
      }
      update_weights_log(ln_w, losses);
      std::size_t i = 0;
      for (auto& [e, slot] : slots_) slot.ln_weight = ln_w[i++];
    }

    wake_sum_ += b_cur > 0 ? b * (b_prev_ / b_cur) : 0.0;
    b_prev_ = b_cur;
    ++round_;
    awaiting_observe_ = false;
  }

  const Vector& prediction() const { return prediction_; }
  long rounds() const { return round_; }
  double b_max() const { return b_prev_; }  // B_t after observe
  double wake_sum() const { return wake_sum_; }
  double reset_sum() const { return reset_sum_; }
  double epoch_anchor() const { return epoch_anchor_; }
  long reset_count() const { return reset_count_; }
  std::size_t active_count() const { return slots_.size(); }
  std::size_t max_active_count() const { return max_active_; }

  std::vector<int> active_exponents() const {
    std::vector<int> v;
    v.reserve(slots_.size());
    for (const auto& [e, slot] : slots_) v.push_back(e);
    return v;
  }

  // (exponent, weight) pairs for the active set
  std::vector<std::pair<int, double>> weights() const {
    std::vector<std::pair<int, double>> v;
    v.reserve(slots_.size());
    for (const auto& [e, slot] : slots_) {
      v.emplace_back(e, std::exp(slot.ln_weight));
    }
    return v;
  }

  const Expert* expert(int exponent) const {
    auto it = slots_.find(exponent);
    return it == slots_.end() ? nullptr : &it->second.expert;
  }

 private:
  struct Slot {
    double ln_weight;  // ln p_t(eta); new experts start at weight 1
    Expert expert;
    Vector last_prediction;
  };

  Vector zero_;
  Vector prediction_;
  Factory factory_;
  // std::map keeps experts ordered by exponent: iteration order, and hence
  // floating-point accumulation order, is deterministic.
  std::map<int, Slot> slots_;
  double b_prev_ = 0.0;     // B_{t-1}
  double wake_sum_ = 0.0;   // sum b_s * B_{s-1}/B_s
  double reset_sum_ = 0.0;  // sum b_s / B_s
  double epoch_anchor_ = 0.0;  // B_tau at the current epoch start
  long round_ = 0;
  long reset_count_ = 0;
  std::size_t max_active_ = 0;
  bool awaiting_observe_ = false;
  std::vector<double> scratch_weights_, scratch_etas_;
  std::vector<Vector> scratch_preds_;
};

}  // namespace metagrad
