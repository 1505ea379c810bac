#pragma once

#include <Eigen/Core>
#include <string>

namespace metagrad {

// Convex losses of the form f(w) = h(w^T x) with scalar link h depending on
// the label y. Classification losses (hinge, logistic) require y in {-1,+1}.
enum class LossKind { hinge, logistic, absolute, squared };

LossKind loss_from_string(const std::string& name);
const char* to_string(LossKind kind);
bool is_classification_loss(LossKind kind);

// h(z; y)
double scalar_loss(LossKind kind, double z, double y);

// Subderivative h'(z; y). Kinks resolve to 0: hinge at margin exactly 1 and
// absolute at residual exactly 0 both return 0 (valid subgradients,
// deterministic).
double scalar_loss_derivative(LossKind kind, double z, double y);

// f(w) = h(w^T x; y)
double loss_value(LossKind kind, const Eigen::VectorXd& w,
                  const Eigen::VectorXd& x, double y);

// Subgradient of f at w; always factorizes as h'(w^T x) * x.
Eigen::VectorXd loss_gradient(LossKind kind, const Eigen::VectorXd& w,
                              const Eigen::VectorXd& x, double y);

}  // namespace metagrad
