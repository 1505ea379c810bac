#include "metagrad/losses.hpp"

#include <cmath>

#include "metagrad/errors.hpp"

namespace metagrad {

LossKind loss_from_string(const std::string& name) {
  if (name == "hinge") return LossKind::hinge;
  if (name == "logistic") return LossKind::logistic;
  if (name == "absolute") return LossKind::absolute;
  if (name == "squared") return LossKind::squared;
  throw ConfigError("unknown loss: " + name);
}

const char* to_string(LossKind kind) {
  switch (kind) {
    case LossKind::hinge: return "hinge";
    case LossKind::logistic: return "logistic";
    case LossKind::absolute: return "absolute";
    case LossKind::squared: return "squared";
  }
  return "?";
}

bool is_classification_loss(LossKind kind) {
  return kind == LossKind::hinge || kind == LossKind::logistic;
}

namespace {

void check_label(LossKind kind, double y) {
  if (is_classification_loss(kind) && y != 1.0 && y != -1.0) {
    throw ConfigError(std::string(to_string(kind)) +
                      " loss requires labels in {-1,+1}");
  }
}

// log(1 + exp(s)) without overflow
double log1p_exp(double s) {
  if (s > 0) return s + std::log1p(std::exp(-s));
  return std::log1p(std::exp(s));
}

}  // namespace

double scalar_loss(LossKind kind, double z, double y) {
  check_label(kind, y);
  switch (kind) {
    case LossKind::hinge: return std::max(0.0, 1.0 - y * z);
    case LossKind::logistic: return log1p_exp(-y * z);
    case LossKind::absolute: return std::abs(z - y);
    case LossKind::squared: return (y - z) * (y - z);
  }
  return 0.0;
}

double scalar_loss_derivative(LossKind kind, double z, double y) {
  check_label(kind, y);
  switch (kind) {
    case LossKind::hinge: return y * z < 1.0 ? -y : 0.0;
    case LossKind::logistic: return -y / (1.0 + std::exp(y * z));
    case LossKind::absolute:
      return z > y ? 1.0 : (z < y ? -1.0 : 0.0);
    case LossKind::squared: return 2.0 * (z - y);
  }
  return 0.0;
}

namespace {

double inner(const Eigen::VectorXd& w, const Eigen::VectorXd& x) {
  if (w.size() != x.size()) {
    throw ConfigError("loss: dimension mismatch between w and x");
  }
  return w.dot(x);
}

}  // namespace

double loss_value(LossKind kind, const Eigen::VectorXd& w,
                  const Eigen::VectorXd& x, double y) {
  return scalar_loss(kind, inner(w, x), y);
}

Eigen::VectorXd loss_gradient(LossKind kind, const Eigen::VectorXd& w,
                              const Eigen::VectorXd& x, double y) {
  return scalar_loss_derivative(kind, inner(w, x), y) * x;
}

}  // namespace metagrad
