#pragma once

#include <Eigen/Dense>

namespace dex {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Euclidean norm of the positive part, ||max(v, 0)||.
inline double positive_part_norm(const Vector& v) {
  return v.cwiseMax(0.0).norm();
}

}  // namespace dex
