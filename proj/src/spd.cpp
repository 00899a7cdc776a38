#include "infogeo/spd.hpp"

#include <cmath>
#include <stdexcept>

namespace infogeo {

namespace {

void check_same_dim(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("spd: dimension mismatch");
}

void check_symmetric(const Eigen::MatrixXd& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) throw std::invalid_argument(std::string(what) + ": not square");
  if (!a.allFinite()) throw DomainError(std::string(what) + ": non-finite entry");
  const double scale = a.cwiseAbs().maxCoeff();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError(std::string(what) + ": not symmetric");
}

}  // namespace

SpdMatrix::SpdMatrix(const Eigen::MatrixXd& a) {
  check_symmetric(a, "SpdMatrix");
  a_ = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a_);
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
  if (!(evals_.minCoeff() > 1e-13 * a_.trace())) throw DomainError("SpdMatrix: not positive definite");
}

Eigen::MatrixXd SpdMatrix::sqrt() const {
  return evecs_ * evals_.cwiseSqrt().asDiagonal() * evecs_.transpose();
}

Eigen::MatrixXd SpdMatrix::inv_sqrt() const {
  return evecs_ * evals_.cwiseSqrt().cwiseInverse().asDiagonal() * evecs_.transpose();
}

Eigen::MatrixXd SpdMatrix::inverse() const {
  return evecs_ * evals_.cwiseInverse().asDiagonal() * evecs_.transpose();
}

double SpdMatrix::log_det() const { return evals_.array().log().sum(); }

double affine_metric(const SpdMatrix& x, const SpdTangent& u, const SpdTangent& v) {
  check_same_dim(x.matrix(), u);
  check_same_dim(x.matrix(), v);
  // L^{-1} u L^{-t} with x = L L^t
  const Eigen::LLT<Eigen::MatrixXd> llt(x.matrix());
  const auto l = llt.matrixL();
  const Eigen::MatrixXd a = l.solve(l.solve(u).transpose());
  const Eigen::MatrixXd b = l.solve(l.solve(v).transpose());
  return (a.cwiseProduct(b.transpose())).sum();
}

double affine_distance_sq(const SpdMatrix& x, const SpdMatrix& y) {
  check_same_dim(x.matrix(), y.matrix());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(y.matrix(), x.matrix(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& l = es.eigenvalues();
  if (!(l.minCoeff() > 0.0)) throw DomainError("affine_distance: not positive definite");
  return l.array().log().square().sum();
}

double affine_distance(const SpdMatrix& x, const SpdMatrix& y) { return std::sqrt(affine_distance_sq(x, y)); }

SpdMatrix spd_exp(const SpdMatrix& x, const SpdTangent& u) {
  check_same_dim(x.matrix(), u);
  const Eigen::MatrixXd w = x.inv_sqrt();
  const Eigen::MatrixXd r = x.sqrt();
  const Eigen::MatrixXd e = symmetric_function(w * u * w, [](double l) { return std::exp(l); });
  return SpdMatrix(r * e * r);
}

SpdTangent spd_log(const SpdMatrix& x, const SpdMatrix& y) {
  check_same_dim(x.matrix(), y.matrix());
  const Eigen::MatrixXd w = x.inv_sqrt();
  const Eigen::MatrixXd r = x.sqrt();
  const Eigen::MatrixXd l = symmetric_function(w * y.matrix() * w, [](double v) {
    if (!(v > 0.0)) throw DomainError("spd_log: not positive definite");
    return std::log(v);
  });
  const Eigen::MatrixXd out = r * l * r;
  return 0.5 * (out + out.transpose());
}

DeRhamSplit derham_split(const SpdMatrix& x, const SpdTangent& u) {
  check_same_dim(x.matrix(), u);
  const int n = x.dim();
  const double tau = x.log_det();
  SpdMatrix s(std::exp(-tau / n) * x.matrix());
  const double tr = (x.inverse() * u).trace();
  SpdTangent u1 = (tr / n) * x.matrix();
  SpdTangent u2 = u - u1;
  return {tau, std::move(s), std::move(u1), std::move(u2)};
}

SpdMatrix congruence(const Eigen::MatrixXd& g, const SpdMatrix& x) {
  const Eigen::MatrixXd m = g * x.matrix() * g.transpose();
  return SpdMatrix(0.5 * (m + m.transpose()));
}

SpdTangent congruence(const Eigen::MatrixXd& g, const SpdTangent& u) {
  const Eigen::MatrixXd m = g * u * g.transpose();
  return 0.5 * (m + m.transpose());
}

}  // namespace infogeo
