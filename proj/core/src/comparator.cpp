#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "metagrad/bench.hpp"
#include "metagrad/errors.hpp"

namespace metagrad {

AlgoSpec parse_algo(const std::string& name) {
  if (name == "ogdt") return {Algo::ogdt};
  if (name == "ogdnorm") return {Algo::ogdnorm};
  if (name == "adagrad") return {Algo::adagrad};
  if (name == "mgco") return {Algo::mgco};
  if (name == "mgfull") return {Algo::mgfull};
  if (name.rfind("mgf:", 0) == 0 || name.rfind("mgf", 0) == 0) {
    const std::string digits =
        name.rfind("mgf:", 0) == 0 ? name.substr(4) : name.substr(3);
    if (!digits.empty()) {
      char* end = nullptr;
      const long m = std::strtol(digits.c_str(), &end, 10);
      if (end == digits.c_str() + digits.size() && m >= 1) {
        return {Algo::mgf, static_cast<int>(m)};
      }
    }
    throw ConfigError("sketched method needs a rank, e.g. mgf:5");
  }
  throw ConfigError("unknown algorithm: " + name);
}

std::string to_string(const AlgoSpec& algo) {
  switch (algo.kind) {
    case Algo::ogdt: return "ogdt";
    case Algo::ogdnorm: return "ogdnorm";
    case Algo::adagrad: return "adagrad";
    case Algo::mgco: return "mgco";
    case Algo::mgfull: return "mgfull";
    case Algo::mgf: return "mgf:" + std::to_string(algo.sketch_m);
  }
  return "?";
}

double cumulative_loss(const DenseDataset& data, LossKind loss,
                       const Eigen::VectorXd& u) {
  const Eigen::VectorXd z = data.x * u;
  double total = 0;
  for (long t = 0; t < data.y.size(); ++t) {
    total += scalar_loss(loss, z(t), data.y(t));
  }
  return total;
}

namespace {

Eigen::VectorXd batch_subgradient(const DenseDataset& data, LossKind loss,
                                  const Eigen::VectorXd& u) {
  const Eigen::VectorXd z = data.x * u;
  Eigen::VectorXd coeff(data.y.size());
  for (long t = 0; t < data.y.size(); ++t) {
    coeff(t) = scalar_loss_derivative(loss, z(t), data.y(t));
  }
  return data.x.transpose() * coeff;
}

Eigen::VectorXd least_squares_comparator(const DenseDataset& data) {
  // exact minimizer of sum (y_t - x_t^T u)^2; min-norm when rank deficient
  return data.x.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV)
      .solve(data.y);
}

}  // namespace

Eigen::VectorXd solve_comparator(const DenseDataset& data, LossKind loss) {
  if (loss == LossKind::squared) return least_squares_comparator(data);

  const long rows = data.y.size();
  const int dim = static_cast<int>(data.x.cols());
  Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd best = avg;

  const double f0 = cumulative_loss(data, loss, u);
  // step scale: first step moves ||u|| by about one unit; use the mean of
  // per-example gradient norms (the mean gradient itself can cancel)
  double norm_sum = 0;
  for (long t = 0; t < rows; ++t) {
    norm_sum += std::abs(scalar_loss_derivative(loss, 0.0, data.y(t))) *
                data.x.row(t).norm();
  }
  const double g0 = norm_sum / static_cast<double>(rows);
  const double c = g0 > 0 ? 1.0 / g0 : 1.0;

  constexpr long kMaxIters = 100000;
  constexpr long kPatience = 1000;
  constexpr double kMinImprovement = 1e-9;
  double best_obj = f0;
  long best_iter = 0;
  for (long k = 1; k <= kMaxIters; ++k) {
    const Eigen::VectorXd g =
        batch_subgradient(data, loss, u) / static_cast<double>(rows);
    u -= (c / std::sqrt(static_cast<double>(k))) * g;
    avg += (u - avg) / static_cast<double>(k);
    const double obj = cumulative_loss(data, loss, avg);
    if (obj > 10.0 * std::max(f0, 1.0)) {
      throw NumericalError(
          "comparator solve diverged; rescale the features (e.g. --normalize)");
    }
    if (obj < best_obj - kMinImprovement) {
      best_obj = obj;
      best = avg;
      best_iter = k;
    } else if (k - best_iter >= kPatience) {
      break;
    }
  }
  return best;
}

DomainSizes size_domains(const DenseDataset& data,
                         const Eigen::VectorXd& u_star) {
  DomainSizes sizes;
  sizes.d2 = 3.0 * u_star.norm();
  sizes.dinf = 3.0 * u_star.cwiseAbs().maxCoeff();
  sizes.c = 3.0 * (data.x * u_star).cwiseAbs().maxCoeff();
  return sizes;
}

double theoretical_sigma(const AlgoSpec& algo, const Eigen::VectorXd& u_star) {
  const double l2 = u_star.norm();
  const double linf = u_star.cwiseAbs().maxCoeff();
  switch (algo.kind) {
    case Algo::mgfull:
    case Algo::mgf: return l2;
    case Algo::mgco: return linf;
    // mirror descent on a ball of radius 3||u*||: max distance to the
    // comparator is 4||u*||, divided by sqrt(2)
    case Algo::ogdt:
    case Algo::ogdnorm: return std::sqrt(8.0) * l2;
    case Algo::adagrad: return std::sqrt(8.0) * linf;
  }
  return l2;
}

std::vector<double> hypertune_grid() {
  std::vector<double> grid;
  grid.reserve(28);
  for (int j = -7; j <= -4; ++j) grid.push_back(std::ldexp(1.0, j));
  for (int k = 0; k <= 23; ++k) grid.push_back(0.125 + k / 8.0);
  return grid;
}

}  // namespace metagrad
