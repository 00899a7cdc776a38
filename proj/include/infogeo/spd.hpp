#pragma once

#include <Eigen/Dense>

#include "infogeo/specfun.hpp"

namespace infogeo {

/// Symmetric positive-definite matrix with a cached eigendecomposition.
class SpdMatrix {
public:
  /// Validates symmetry and positivity (eigenvalues > 1e-13 * trace).
  explicit SpdMatrix(const Eigen::MatrixXd& a);

  [[nodiscard]] const Eigen::MatrixXd& matrix() const { return a_; }
  [[nodiscard]] int dim() const { return static_cast<int>(a_.rows()); }
  [[nodiscard]] const Eigen::VectorXd& eigenvalues() const { return evals_; }
  [[nodiscard]] const Eigen::MatrixXd& eigenvectors() const { return evecs_; }

  [[nodiscard]] Eigen::MatrixXd sqrt() const;
  [[nodiscard]] Eigen::MatrixXd inv_sqrt() const;
  [[nodiscard]] Eigen::MatrixXd inverse() const;
  [[nodiscard]] double log_det() const;

private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd evals_;
  Eigen::MatrixXd evecs_;
};

/// Tangent vectors at a point of P_n are symmetric matrices.
using SpdTangent = Eigen::MatrixXd;

/// V f(D) V^t for a symmetric matrix.
template <class F>
[[nodiscard]] Eigen::MatrixXd symmetric_function(const Eigen::MatrixXd& s, F f) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()));
  const Eigen::VectorXd d = es.eigenvalues().unaryExpr(f);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

/// tr(x^-1 u x^-1 v).
[[nodiscard]] double affine_metric(const SpdMatrix& x, const SpdTangent& u, const SpdTangent& v);

[[nodiscard]] double affine_distance_sq(const SpdMatrix& x, const SpdMatrix& y);
[[nodiscard]] double affine_distance(const SpdMatrix& x, const SpdMatrix& y);

[[nodiscard]] SpdMatrix spd_exp(const SpdMatrix& x, const SpdTangent& u);
[[nodiscard]] SpdTangent spd_log(const SpdMatrix& x, const SpdMatrix& y);

/// P_n = R x SP_n: tau = log det x, s = e^{-tau/n} x, u = u1 + u2 with u1 the trace part.
struct DeRhamSplit {
  double tau;
  SpdMatrix s;
  SpdTangent u1;
  SpdTangent u2;
};

[[nodiscard]] DeRhamSplit derham_split(const SpdMatrix& x, const SpdTangent& u);

/// g x g^t.
[[nodiscard]] SpdMatrix congruence(const Eigen::MatrixXd& g, const SpdMatrix& x);
[[nodiscard]] SpdTangent congruence(const Eigen::MatrixXd& g, const SpdTangent& u);

}  // namespace infogeo
