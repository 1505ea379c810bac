#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <memory>

#include "metagrad/baselines.hpp"
#include "metagrad/bench.hpp"
#include "metagrad/controller.hpp"
#include "metagrad/coord.hpp"
#include "metagrad/domain.hpp"
#include "metagrad/errors.hpp"
#include "metagrad/expert_full.hpp"
#include "metagrad/expert_sketch.hpp"

namespace metagrad {

GradTrace::GradTrace(int dim) {
  if (dim < 1 || dim > 64) {
    throw ConfigError("gradient trace supports 1 <= d <= 64");
  }
  outer_ = Eigen::MatrixXd::Zero(dim, dim);
}

void GradTrace::add(const Eigen::VectorXd& g) {
  if (g.size() != outer_.rows()) {
    throw ConfigError("gradient trace: dimension mismatch");
  }
  if (rounds_ >= 100000) {
    throw ConfigError("gradient trace capped at 100000 rounds");
  }
  outer_.selfadjointView<Eigen::Lower>().rankUpdate(g);
  sq_sum_ += g.squaredNorm();
  ++rounds_;
}

int GradTrace::effective_rank(double rel_tol) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      Eigen::MatrixXd(outer_.selfadjointView<Eigen::Lower>()));
  const auto& ev = eig.eigenvalues();
  const double lambda_max = ev.size() ? ev.maxCoeff() : 0.0;
  if (!(lambda_max > 0)) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > rel_tol * lambda_max) ++rank;
  }
  return rank;
}

BoundCheck bound_check(double lin_regret, double v_u, double u_norm,
                       double sigma, double b_t, long t,
                       const GradTrace& trace) {
  BoundCheck result;
  result.lhs = lin_regret;
  if (!(b_t > 0)) {  // no effective gradients: the regret is trivially zero
    result.rhs = 0;
    result.ok = true;
    return result;
  }
  const int rank = trace.effective_rank();
  const double log_horizon = std::log(std::max(
      std::ceil(2.0 * std::log2(static_cast<double>(std::max(t, 1L)))), 1.0));
  double z = 2.0 * log_horizon + 0.5;
  if (rank > 0) {
    z += rank * std::log1p(sigma * sigma * trace.sq_sum() /
                           (2.0 * b_t * b_t * rank));
  }
  const double term = u_norm * u_norm / (2.0 * sigma * sigma) + z;
  result.rhs = 2.5 * std::sqrt(std::max(v_u, 0.0) * term) + 5.0 * b_t * term +
               2.0 * b_t;
  result.ok = result.lhs <= result.rhs;
  return result;
}

namespace {

// Uniform per-round interface the harness drives. predict() may depend on
// the revealed feature vector (the slab direction); observe() receives the
// gradient at the returned prediction.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual const Eigen::VectorXd& predict(const Eigen::VectorXd& x) = 0;
  virtual void observe(const Eigen::VectorXd& x, const Eigen::VectorXd& g) = 0;
  virtual long resets() const { return 0; }
  virtual std::size_t max_active() const { return 0; }
  virtual std::size_t active_now() const { return 0; }
  virtual double b_max() const { return b_max_; }
  virtual bool multi_eta() const { return false; }

 protected:
  double b_max_ = 0;
};

template <class Expert>
class SlabLearner final : public Learner {
 public:
  SlabLearner(int dim, double slab_bound,
              typename Controller<Expert>::Factory factory)
      : domain_(Slab{slab_bound, Eigen::VectorXd::Zero(dim)}),
        controller_(Eigen::VectorXd::Zero(dim), std::move(factory)) {}

  const Eigen::VectorXd& predict(const Eigen::VectorXd& x) override {
    domain_.set_slab_direction(x);
    return controller_.predict(domain_);
  }

  void observe(const Eigen::VectorXd& x, const Eigen::VectorXd& g) override {
    const double b = range_bound(domain_, controller_.prediction(), g);
    if (!std::isfinite(b)) {
      throw ConfigError(
          "slab range bound is infinite: gradient not parallel to x_t");
    }
    controller_.observe(g, b);
    b_max_ = controller_.b_max();
  }

  long resets() const override { return controller_.reset_count(); }
  std::size_t max_active() const override {
    return controller_.max_active_count();
  }
  std::size_t active_now() const override { return controller_.active_count(); }
  bool multi_eta() const override { return true; }

 private:
  DomainSpec domain_;
  Controller<Expert> controller_;
};

class CoordLearner final : public Learner {
 public:
  CoordLearner(int dim, double half_width, double sigma)
      : algo_(Eigen::VectorXd::Constant(dim, half_width), sigma) {}

  const Eigen::VectorXd& predict(const Eigen::VectorXd&) override {
    return algo_.predict();
  }
  void observe(const Eigen::VectorXd&, const Eigen::VectorXd& g) override {
    algo_.observe(g);
    b_max_ = algo_.b_max();
  }
  long resets() const override { return algo_.reset_count(); }
  std::size_t max_active() const override { return algo_.max_active_count(); }
  std::size_t active_now() const override { return algo_.active_count(); }
  bool multi_eta() const override { return true; }

 private:
  CoordMetaGrad algo_;
};

template <class Base>
class BaselineLearner final : public Learner {
 public:
  BaselineLearner(DomainSpec domain, double sigma, int dim)
      : domain_(domain), base_(std::move(domain), sigma, dim) {}

  const Eigen::VectorXd& predict(const Eigen::VectorXd&) override {
    return base_.prediction();
  }
  void observe(const Eigen::VectorXd&, const Eigen::VectorXd& g) override {
    b_max_ = std::max(b_max_, range_bound(domain_, base_.prediction(), g));
    base_.observe(g);
  }

 private:
  DomainSpec domain_;
  Base base_;
};

std::unique_ptr<Learner> make_learner(const AlgoSpec& algo, int dim,
                                      double sigma, const DomainSizes& sizes) {
  switch (algo.kind) {
    case Algo::ogdt:
      return std::make_unique<BaselineLearner<OgdT>>(
          DomainSpec(L2Ball{sizes.d2}), sigma, dim);
    case Algo::ogdnorm:
      return std::make_unique<BaselineLearner<OgdNorm>>(
          DomainSpec(L2Ball{sizes.d2}), sigma, dim);
    case Algo::adagrad:
      return std::make_unique<BaselineLearner<AdaGradDiag>>(
          DomainSpec(Box{Eigen::VectorXd::Constant(dim, sizes.dinf)}), sigma,
          dim);
    case Algo::mgco:
      return std::make_unique<CoordLearner>(dim, sizes.dinf, sigma);
    case Algo::mgfull:
      return std::make_unique<SlabLearner<FullExpert>>(
          dim, sizes.c, [sigma, dim](double eta, long wake) {
            return FullExpert(eta, sigma, dim, wake);
          });
    case Algo::mgf: {
      const int m = algo.sketch_m;
      if (m < 1) throw ConfigError("mgf requires sketch rank m >= 1");
      return std::make_unique<SlabLearner<SketchExpert>>(
          dim, sizes.c, [sigma, dim, m](double eta, long wake) {
            return SketchExpert(eta, sigma, dim, m, wake);
          });
    }
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace

RunRecord run_experiment(const DenseDataset& data,
                         const ExperimentConfig& config,
                         const Eigen::VectorXd& u_star,
                         const DomainSizes& sizes, GradTrace* trace) {
  const auto start = std::chrono::steady_clock::now();
  const long rows = data.y.size();
  const int dim = static_cast<int>(data.x.cols());
  if (u_star.size() != dim) throw ConfigError("comparator dimension mismatch");

  // u* is interior by construction (domains are overprovisioned 3x); clip
  // rounding-level violations, reject anything larger.
  Eigen::VectorXd u = u_star;
  {
    const DomainSpec ball(L2Ball{sizes.d2});
    const DomainSpec box(Box{Eigen::VectorXd::Constant(dim, sizes.dinf)});
    for (const DomainSpec* d : {&ball, &box}) {
      const Eigen::VectorXd projected = project(*d, u);
      const double moved = (projected - u).norm();
      if (moved > 1e-6) {
        throw ConfigError("comparator lies outside the sized domain");
      }
      u = projected;
    }
  }

  const double sigma =
      config.sigma_override.value_or(config.sigma_factor *
                                     theoretical_sigma(config.algo, u_star));
  if (!(sigma > 0)) {
    throw ConfigError("sigma is not positive; degenerate comparator?");
  }
  auto learner = make_learner(config.algo, dim, sigma, sizes);

  RunRecord record;
  record.dataset = data.name.empty() ? config.dataset : data.name;
  record.loss = to_string(config.loss);
  record.algo = to_string(config.algo);
  record.sigma_factor = config.sigma_factor;
  record.seed = config.seed;
  record.sigma = sigma;
  record.t = rows;
  record.dim = data.raw_dim;
  record.round_losses.reserve(rows);
  if (learner->multi_eta()) record.active_trace.reserve(rows);

  double algo_loss = 0;
  for (long t = 0; t < rows; ++t) {
    const Eigen::VectorXd x = data.x.row(t).transpose();
    const double y = data.y(t);
    const Eigen::VectorXd& w = learner->predict(x);
    const double loss = loss_value(config.loss, w, x, y);
    const Eigen::VectorXd g = loss_gradient(config.loss, w, x, y);
    algo_loss += loss;
    record.round_losses.push_back(loss);
    const double slack = (w - u).dot(g);
    record.lin_regret += slack;
    record.v_t += slack * slack;
    if (trace) trace->add(g);
    learner->observe(x, g);
    if (learner->multi_eta()) {
      record.active_trace.push_back(static_cast<int>(learner->active_now()));
    }
  }

  record.comparator_loss = cumulative_loss(data, config.loss, u);
  record.regret = algo_loss - record.comparator_loss;
  record.b_t = learner->b_max();
  record.resets = learner->resets();
  record.max_active = learner->max_active();
  record.wallclock_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                start)
          .count();
  return record;
}

RunRecord run_experiment(const DenseDataset& data,
                         const ExperimentConfig& config, GradTrace* trace) {
  const Eigen::VectorXd u_star = solve_comparator(data, config.loss);
  const DomainSizes sizes = size_domains(data, u_star);
  return run_experiment(data, config, u_star, sizes, trace);
}

}  // namespace metagrad
