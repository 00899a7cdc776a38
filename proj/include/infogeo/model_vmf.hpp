#pragma once

#include <Eigen/Dense>
#include <vector>

#include "infogeo/warped.hpp"

namespace infogeo {

/// A(eta) = I_nu/I_{nu-1} = psi'(eta) and its first three derivatives.
struct MeanDerivatives {
  double a, a1, a2, a3;
};

/// von Mises-Fisher model on S^{n-1}; parameter z = eta * xbar in R^n.
class VmfModel {
public:
  explicit VmfModel(int n);  ///< 2 <= n <= 64

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] double nu() const { return 0.5 * n_; }

  /// log normalizer; at 0 equals log area of S^{n-1}.
  [[nodiscard]] double psi(double eta) const;
  [[nodiscard]] double psi_pp(double eta) const;
  [[nodiscard]] double beta_sq(double eta) const;
  /// beta^2/eta^2, finite at 0 (= 1/n).
  [[nodiscard]] double beta_sq_over_eta_sq(double eta) const;
  [[nodiscard]] MeanDerivatives mean_derivatives(double eta) const;

  [[nodiscard]] double log_density(const Eigen::VectorXd& x, const Eigen::VectorXd& z) const;
  [[nodiscard]] double fisher_metric(const Eigen::VectorXd& z, const Eigen::VectorXd& u) const;

  /// alpha = sqrt(psi''), beta = sqrt(beta^2), analytic derivatives, K^M = 1.
  [[nodiscard]] WarpProfile profile() const;

  /// Below this eta the power-series branch is used.
  static constexpr double kSeriesSwitch = 1e-3;
  /// Below this eta, A'' and A''' come from the power series (radius >= 2.4 for all n).
  static constexpr double kDerivativeSeriesSwitch = 0.5;
  /// From this eta on, the inverse-power series of the Riccati equation is used.
  [[nodiscard]] double asymptotic_switch() const;

private:
  int n_;
  std::vector<double> coeffs_;  // A(eta) = sum_k coeffs_[k] eta^{2k+1}, 30 terms
  std::vector<double> asym_;    // A(eta) ~ sum_m asym_[m] eta^{-m}
};

struct CurvatureProfile {
  std::vector<double> eta;
  std::vector<double> ks;
  std::vector<double> kr;
  double ks_plateau = 0.0;  ///< mean over eta in [eta_max/2, eta_max]
  double kr_plateau = 0.0;
  double ks_spread = 0.0;   ///< max - min over the same window
  double kr_spread = 0.0;
};

[[nodiscard]] CurvatureProfile vmf_curvature_profile(const VmfModel& m, const std::vector<double>& eta_grid);

}  // namespace infogeo
