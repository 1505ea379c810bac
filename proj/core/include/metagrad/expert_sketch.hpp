#pragma once

#include <Eigen/Core>

#include "metagrad/domain.hpp"

namespace metagrad {

// Sketched eta-expert: the covariance is approximated through a Frequent
// Directions sketch S (2m x d) maintained in epochs of m+1 gradients, with
//   H = (sigma^-2 I_{2m} + 2 eta^2 S S^T)^-1
// kept in step by rank-one updates while the epoch fills and restored from an
// SVD when it compresses. Projection and mean updates are Woodbury forms
// touching only S and H, so a round costs O(m d) amortised.
class SketchExpert {
 public:
  using Vector = Eigen::VectorXd;
  using Domain = DomainSpec;

  SketchExpert(double eta, double sigma, int dim, int sketch_rank,
               long wake_round = 1);

  // Closed-form slab projection using the sketch from the previous round.
  Vector predict(const Domain& domain) const;

  // Full round step: sketches this round's gradient first, then moves the
  // mean.
  void update(const Vector& g, const Vector& w_controller,
              const Vector& w_expert);

  // Frequent Directions ingest of one gradient: writes g^T to row m+tau
  // (1-based) of S; while tau < m the inverse H is maintained by two
  // rank-one steps, and at tau = m the epoch compresses.
  void ingest(const Vector& g);

  // Woodbury-form mean update; expects this round's g already ingested.
  void mean_update(const Vector& g, const Vector& w_controller,
                   const Vector& w_expert);

  double eta() const { return eta_; }
  double sigma() const { return sigma_; }
  long wake_round() const { return wake_round_; }
  int dim() const { return static_cast<int>(mean_.size()); }
  int rank_param() const { return m_; }  // sketch size is 2m
  int tau() const { return tau_; }       // epoch phase, (t - a) mod (m+1)
  const Vector& mean() const { return mean_; }
  const Eigen::MatrixXd& sketch() const { return sketch_; }
  const Eigen::MatrixXd& hmat() const { return h_; }
  long compress_count() const { return compress_count_; }
  // sum over compressions of the m-th squared singular value
  double shrinkage_sum() const { return shrinkage_sum_; }

 private:
  void compress();

  double eta_;
  double sigma_;
  int m_;
  long wake_round_;
  Vector mean_;
  Eigen::MatrixXd sketch_;  // S, 2m x d
  Eigen::MatrixXd h_;       // H, 2m x 2m
  int tau_ = 0;
  long compress_count_ = 0;
  double shrinkage_sum_ = 0.0;
};

}  // namespace metagrad
