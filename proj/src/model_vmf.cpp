#include "infogeo/model_vmf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "infogeo/specfun.hpp"

namespace infogeo {

namespace {

void check_eta(double eta) {
  if (!std::isfinite(eta) || eta < 0.0) throw DomainError("vmf: eta must be finite and >= 0");
}

}  // namespace

VmfModel::VmfModel(int n) : n_(n) {
  if (n < 2 || n > 64) throw std::invalid_argument("VmfModel: need 2 <= n <= 64");
  // Riccati A' = 1 - (n-1)A/eta - A^2 gives c_k = -sum_{i+j=k-1} c_i c_j / (2k + n).
  coeffs_.push_back(1.0 / n);
  for (int k = 1; k < 30; ++k) {
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += coeffs_[i] * coeffs_[k - 1 - i];
    coeffs_.push_back(-s / (2.0 * k + n));
  }
  // Same equation in 1/eta: A = sum_m b_m eta^{-m}, b_m = ((m - n) b_{m-1} - sum_{i=1}^{m-1} b_i b_{m-i}) / 2.
  asym_.push_back(1.0);
  for (int m = 1; m < 60; ++m) {
    double s = 0.0;
    for (int i = 1; i < m; ++i) s += asym_[i] * asym_[m - i];
    asym_.push_back(((m - n) * asym_[m - 1] - s) / 2.0);
  }
}

double VmfModel::asymptotic_switch() const { return 100.0; }

MeanDerivatives VmfModel::mean_derivatives(double eta) const {
  check_eta(eta);
  MeanDerivatives d{};
  if (eta < kSeriesSwitch) {
    const double e2 = eta * eta;
    double pw = 1.0;  // eta^{2k}
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      const double m = 2.0 * k + 1.0;
      const double c = coeffs_[k];
      d.a += c * pw * eta;
      d.a1 += c * m * pw;
      if (k > 0) d.a2 += c * m * (m - 1.0) * pw / eta;
      if (k > 0) d.a3 += c * m * (m - 1.0) * (m - 2.0) * pw / e2;
      pw *= e2;
    }
    if (eta == 0.0) {
      d.a2 = 0.0;
      d.a3 = 6.0 * coeffs_[1];
    }
    return d;
  }
  if (eta >= asymptotic_switch()) {
    // stop once terms fall below 1e-17 relative to A' ~ 1/eta^2
    const double x = 1.0 / eta;
    double pw = 1.0;  // eta^{-m}
    for (std::size_t m = 0; m < asym_.size(); ++m) {
      const double t = asym_[m] * pw;
      if (m > 3 && std::abs(t) < 1e-17 * x) break;
      const double mm = static_cast<double>(m);
      d.a += t;
      d.a1 -= mm * t * x;
      d.a2 += mm * (mm + 1.0) * t * x * x;
      d.a3 -= mm * (mm + 1.0) * (mm + 2.0) * t * x * x * x;
      pw *= x;
    }
    return d;
  }
  const double k = n_ - 1.0;
  d.a = bessel_ratio(nu(), eta);
  if (eta < kDerivativeSeriesSwitch) {
    // the Riccati forms of A'' and A''' cancel like 1/eta^2 near the origin
    const double e2 = eta * eta;
    double pw = 1.0;  // eta^{2k}
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      const double m = 2.0 * j + 1.0;
      if (j > 0) d.a2 += coeffs_[j] * m * (m - 1.0) * pw / eta;
      if (j > 0) d.a3 += coeffs_[j] * m * (m - 1.0) * (m - 2.0) * pw / e2;
      pw *= e2;
    }
    d.a1 = 1.0 - k * d.a / eta - d.a * d.a;
    return d;
  }
  d.a1 = 1.0 - k * d.a / eta - d.a * d.a;
  d.a2 = k * d.a / (eta * eta) - k * d.a1 / eta - 2.0 * d.a * d.a1;
  d.a3 = -2.0 * k * d.a / (eta * eta * eta) + 2.0 * k * d.a1 / (eta * eta) - k * d.a2 / eta -
         2.0 * d.a1 * d.a1 - 2.0 * d.a * d.a2;
  return d;
}

double VmfModel::psi(double eta) const {
  check_eta(eta);
  const double v = nu();
  if (eta == 0.0) return std::log(2.0) + v * std::log(std::numbers::pi) - std::lgamma(v);
  return v * std::log(2.0 * std::numbers::pi) + (1.0 - v) * std::log(eta) + log_bessel_i(v - 1.0, eta);
}

double VmfModel::psi_pp(double eta) const {
  check_eta(eta);
  if (eta < kSeriesSwitch || eta >= asymptotic_switch()) return mean_derivatives(eta).a1;
  const BesselRatios r = bessel_ratio_pair(nu(), eta);
  return 1.0 / n_ + (n_ - 1.0) / n_ * r.r2 - r.r1 * r.r1;
}

double VmfModel::beta_sq_over_eta_sq(double eta) const {
  check_eta(eta);
  if (eta < kSeriesSwitch) {
    double s = 0.0, pw = 1.0;
    for (double c : coeffs_) { s += c * pw; pw *= eta * eta; }
    return s;
  }
  // (1/n)(1 - I_{nu+1}/I_{nu-1}) = A / eta
  return bessel_ratio(nu(), eta) / eta;
}

double VmfModel::beta_sq(double eta) const { return eta * eta * beta_sq_over_eta_sq(eta); }

double VmfModel::log_density(const Eigen::VectorXd& x, const Eigen::VectorXd& z) const {
  if (x.size() != n_ || z.size() != n_) throw std::invalid_argument("vmf: dimension mismatch");
  if (std::abs(x.norm() - 1.0) > 1e-10) throw DomainError("vmf: x must be a unit vector");
  return x.dot(z) - psi(z.norm());
}

double VmfModel::fisher_metric(const Eigen::VectorXd& z, const Eigen::VectorXd& u) const {
  if (z.size() != n_ || u.size() != n_) throw std::invalid_argument("vmf: dimension mismatch");
  if (!z.allFinite() || !u.allFinite()) throw DomainError("vmf: non-finite input");
  const double eta = z.norm();
  if (eta == 0.0) return u.squaredNorm() / n_;
  const Eigen::VectorXd xbar = z / eta;
  const double u_eta = u.dot(xbar);
  const double perp = (u - u_eta * xbar).squaredNorm();
  return psi_pp(eta) * u_eta * u_eta + beta_sq_over_eta_sq(eta) * perp;
}

WarpProfile VmfModel::profile() const {
  const VmfModel m = *this;
  WarpProfile p;
  p.alpha = [m](double e) { return std::sqrt(m.psi_pp(e)); };
  p.dalpha = [m](double e) {
    const MeanDerivatives d = m.mean_derivatives(e);
    return d.a2 / (2.0 * std::sqrt(d.a1));
  };
  p.betas = {[m](double e) { return std::sqrt(m.beta_sq(e)); }};
  // Near 0, beta = eta sqrt(q) with q = A/eta = sum_k c_k eta^{2k}; returns (g', g'') for g = sqrt(q).
  auto small = [m](double e) {
    double q = 0.0, q1 = 0.0, q2 = 0.0;
    double p0 = 1.0, p1 = e, p2 = 1.0;  // eta^{2k}, eta^{2k-1}, eta^{2k-2}
    for (std::size_t k = 0; k < m.coeffs_.size(); ++k) {
      const double kk = 2.0 * k;
      q += m.coeffs_[k] * p0;
      if (k > 0) {
        q1 += kk * m.coeffs_[k] * p1;
        q2 += kk * (kk - 1.0) * m.coeffs_[k] * p2;
        p1 *= e * e;
        p2 *= e * e;
      }
      p0 *= e * e;
    }
    const double g = std::sqrt(q);
    return std::array<double, 3>{g, q1 / (2.0 * g), q2 / (2.0 * g) - q1 * q1 / (4.0 * g * g * g)};
  };
  p.dbetas = {[m, small](double e) {
    if (e < kSeriesSwitch) {
      const auto g = small(e);
      return g[0] + e * g[1];
    }
    const MeanDerivatives d = m.mean_derivatives(e);
    return (d.a + e * d.a1) / (2.0 * std::sqrt(e * d.a));
  }};
  p.d2betas = {[m, small](double e) {
    if (e < kSeriesSwitch) {
      const auto g = small(e);
      return 2.0 * g[1] + e * g[2];
    }
    const MeanDerivatives d = m.mean_derivatives(e);
    const double b = std::sqrt(e * d.a);
    const double b1 = (d.a + e * d.a1) / (2.0 * b);
    return (2.0 * d.a1 + e * d.a2 - 2.0 * b1 * b1) / (2.0 * b);
  }};
  p.block_dims = {n_ - 1};
  p.base_name = "S^" + std::to_string(n_ - 1);
  p.sigma_min = 0.0;
  return p;
}

CurvatureProfile vmf_curvature_profile(const VmfModel& m, const std::vector<double>& eta_grid) {
  if (eta_grid.empty()) throw std::invalid_argument("vmf_curvature_profile: empty grid");
  const WarpProfile p = m.profile();
  CurvatureProfile out;
  double top = 0.0;
  for (double e : eta_grid) {
    if (!(e > 0.0)) throw DomainError("vmf_curvature_profile: grid values must be positive");
    const Curvatures c = curvatures(p, 1.0, e);
    out.eta.push_back(e);
    out.ks.push_back(c.ks);
    out.kr.push_back(c.kr);
    top = std::max(top, e);
  }
  double ks_lo = 1e300, ks_hi = -1e300, kr_lo = 1e300, kr_hi = -1e300;
  int count = 0;
  for (std::size_t i = 0; i < out.eta.size(); ++i) {
    if (out.eta[i] < 0.5 * top) continue;
    out.ks_plateau += out.ks[i];
    out.kr_plateau += out.kr[i];
    ks_lo = std::min(ks_lo, out.ks[i]); ks_hi = std::max(ks_hi, out.ks[i]);
    kr_lo = std::min(kr_lo, out.kr[i]); kr_hi = std::max(kr_hi, out.kr[i]);
    ++count;
  }
  out.ks_plateau /= count;
  out.kr_plateau /= count;
  out.ks_spread = ks_hi - ks_lo;
  out.kr_spread = kr_hi - kr_lo;
  return out;
}

}  // namespace infogeo
