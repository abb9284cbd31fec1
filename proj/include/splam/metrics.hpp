#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace splam {

inline double rmse(const Eigen::VectorXd& predictions, const Eigen::VectorXd& truth) {
  if (predictions.size() != truth.size())
    throw std::invalid_argument("rmse: length mismatch");
  if (predictions.size() == 0) throw std::invalid_argument("rmse: empty input");
  return std::sqrt((predictions - truth).squaredNorm() / static_cast<double>(truth.size()));
}

/// Misclassification rate from the sign of the linear predictor (0 counts
/// as +1); labels must be +-1.
inline double misclass(const Eigen::VectorXd& linear_predictor, const Eigen::VectorXd& labels) {
  if (linear_predictor.size() != labels.size())
    throw std::invalid_argument("misclass: length mismatch");
  if (labels.size() == 0) throw std::invalid_argument("misclass: empty input");
  Eigen::Index wrong = 0;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    const double sign = linear_predictor[i] >= 0.0 ? 1.0 : -1.0;
    if (sign != labels[i]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(labels.size());
}

}  // namespace splam
