#include "metagrad/expert_sketch.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "metagrad/errors.hpp"

namespace metagrad {

SketchExpert::SketchExpert(double eta, double sigma, int dim, int sketch_rank,
                           long wake_round)
    : eta_(eta), sigma_(sigma), m_(sketch_rank), wake_round_(wake_round) {
  if (!(eta > 0)) throw ConfigError("expert eta must be > 0");
  if (!(sigma > 0)) throw ConfigError("expert sigma must be > 0");
  if (dim < 1) throw ConfigError("expert dimension must be >= 1");
  if (sketch_rank < 1) throw ConfigError("sketch rank m must be >= 1");
  mean_ = Vector::Zero(dim);
  sketch_ = Eigen::MatrixXd::Zero(2 * m_, dim);
  h_ = sigma * sigma * Eigen::MatrixXd::Identity(2 * m_, 2 * m_);
}

SketchExpert::Vector SketchExpert::predict(const Domain& domain) const {
  const Slab& s = domain.slab();
  const Eigen::VectorXd& x = s.direction;
  const double excess = shrink(x.dot(mean_), s.bound);
  if (excess == 0.0) return mean_;
  const double two_eta_sq = 2.0 * eta_ * eta_;
  const Eigen::VectorXd sx = sketch_ * x;
  const Eigen::VectorXd h_sx = h_ * sx;
  const Eigen::VectorXd dir = x - two_eta_sq * (sketch_.transpose() * h_sx);
  const double denom = x.squaredNorm() - two_eta_sq * sx.dot(h_sx);
  if (!(denom > 0)) {
    throw NumericalError("sketched slab projection: denominator not positive");
  }
  return mean_ - (excess / denom) * dir;
}

void SketchExpert::ingest(const Vector& g) {
  if (g.size() != mean_.size()) {
    throw ConfigError("sketch ingest: gradient dimension mismatch");
  }
  const int row = m_ - 1 + tau_;  // paper rows are 1-based: row m + tau
  sketch_.row(row) = g.transpose();
  if (tau_ < m_) {
    if (!g.isZero(0.0)) {
      const double two_eta_sq = 2.0 * eta_ * eta_;
      Eigen::VectorXd q = two_eta_sq * (sketch_ * g);
      q(row) -= two_eta_sq * 0.5 * g.squaredNorm();
      // (H^-1 + q e^T + e q^T)^-1 via two Sherman-Morrison steps
      const Eigen::VectorXd h_q = h_ * q;          // H q (H symmetric)
      const Eigen::VectorXd h_e = h_.col(row);     // H e
      const double e_h_q = h_q(row);
      Eigen::MatrixXd h_tilde =
          h_ - (h_q * h_e.transpose()) / (1.0 + e_h_q);
      const Eigen::VectorXd ht_e = h_tilde.col(row);
      const Eigen::VectorXd ht_q = h_tilde.transpose() * q;
      const double q_ht_e = q.dot(ht_e);
      h_ = h_tilde - (ht_e * ht_q.transpose()) / (1.0 + q_ht_e);
      h_ = 0.5 * (h_ + h_.transpose()).eval();
    }
    ++tau_;
  } else {
    compress();
    tau_ = 0;
  }
}

void SketchExpert::compress() {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sketch_, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Eigen::MatrixXd& v = svd.matrixV();  // d x min(2m, d)
  const int p = static_cast<int>(sv.size());
  const double sm_sq = p >= m_ ? sv(m_ - 1) * sv(m_ - 1) : 0.0;
  shrinkage_sum_ += sm_sq;
  sketch_.setZero();
  for (int i = 0; i < m_ && i < p; ++i) {
    const double shifted = sv(i) * sv(i) - sm_sq;
    if (shifted > 0) {
      sketch_.row(i) = std::sqrt(shifted) * v.col(i).transpose();
    }
  }
  const double inv_sigma_sq = 1.0 / (sigma_ * sigma_);
  const double two_eta_sq = 2.0 * eta_ * eta_;
  h_.setZero();
  for (int i = 0; i < 2 * m_; ++i) {
    const double shifted =
        (i < m_ && i < p) ? std::max(sv(i) * sv(i) - sm_sq, 0.0) : 0.0;
    h_(i, i) = 1.0 / (inv_sigma_sq + two_eta_sq * shifted);
  }
  ++compress_count_;
}

void SketchExpert::update(const Vector& g, const Vector& w_controller,
                          const Vector& w_expert) {
  ingest(g);
  mean_update(g, w_controller, w_expert);
}

void SketchExpert::mean_update(const Vector& g, const Vector& w_controller,
                               const Vector& w_expert) {
  if (g.isZero(0.0)) {
    mean_ = w_expert;
    return;
  }
  const double factor = 1.0 + 2.0 * eta_ * (w_expert - w_controller).dot(g);
  const Eigen::VectorXd g_hat = (factor * eta_) * g;
  const double two_eta_sq = 2.0 * eta_ * eta_;
  const Eigen::VectorXd s_ghat = sketch_ * g_hat;
  mean_.noalias() =
      w_expert - sigma_ * sigma_ *
                     (g_hat - two_eta_sq * (sketch_.transpose() * (h_ * s_ghat)));
}

}  // namespace metagrad
