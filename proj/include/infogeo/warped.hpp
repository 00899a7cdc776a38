#pragma once

#include <functional>
#include <string>
#include <vector>

namespace infogeo {

using ScalarFn = std::function<double(double)>;

/// Multiply-warped metric (alpha du_sigma)^2 + sum_q beta_q^2 Q(u_q,u_q) on M x (0, inf).
struct WarpProfile {
  ScalarFn alpha;
  std::vector<ScalarFn> betas;
  std::vector<int> block_dims;
  std::string base_name;

  // Optional analytic derivatives in sigma; empty means finite differences.
  ScalarFn dalpha;
  std::vector<ScalarFn> dbetas;
  std::vector<ScalarFn> d2betas;

  /// Smallest admissible sigma (profiles regular at 0 may use 0).
  double sigma_min = 1e-8;
  double sigma_max = 1e8;
  /// Sorted sigma values where the profile's derivatives have kinks (interpolation knots).
  std::vector<double> knots;

  [[nodiscard]] std::size_t blocks() const { return betas.size(); }
  void validate() const;
  void check_sigma(double sigma) const;

  [[nodiscard]] double dalpha_at(double sigma) const;
  [[nodiscard]] double dbeta_at(std::size_t q, double sigma) const;
  [[nodiscard]] double d2beta_at(std::size_t q, double sigma) const;
};

/// u_sigma plus Q(u_q,u_q) for each base block.
struct TangentDecomposition {
  double u_sigma = 0.0;
  std::vector<double> block_norms;
};

[[nodiscard]] double metric_eval(const WarpProfile& p, double sigma, const TangentDecomposition& u);

/// sum_q beta_q^2(sigma) Q(u_q,u_q).
[[nodiscard]] double extrinsic_metric(const WarpProfile& p, double sigma, const std::vector<double>& block_norms);

/// r(sigma1) - r(sigma0) = int alpha; sigma0, sigma1 > 0.
[[nodiscard]] double vertical_distance(const WarpProfile& p, double sigma0, double sigma1);

struct CompletenessReport {
  double r_upper;         ///< r(horizon) - r(sigma_ref)
  double r_lower;         ///< r(sigma_ref) - r(1/horizon)
  double exponent_inf;    ///< fitted p in alpha ~ sigma^p near horizon
  double exponent_zero;   ///< fitted p near 1/horizon
  bool diverging_inf;     ///< p_inf >= -1 (within 0.05)
  bool diverging_zero;    ///< p_zero <= -1 (within 0.05)
};

[[nodiscard]] CompletenessReport completeness_probe(const WarpProfile& p, double sigma_ref, double horizon);

struct Curvatures {
  double ks;  ///< surface (Gauss equation)
  double kr;  ///< radial
};

/// Single-block curvatures; base_curvature is K^M.
[[nodiscard]] Curvatures curvatures(const WarpProfile& p, double base_curvature, double sigma);

/// Central difference of f at x with step h, one Richardson pass.
[[nodiscard]] double richardson_d1(const ScalarFn& f, double x, double h);
[[nodiscard]] double richardson_d2(const ScalarFn& f, double x, double h);

/// alpha^2 = 2d/sigma^2, beta = 1/sigma on R^d; constant curvature -1/(2d).
[[nodiscard]] WarpProfile isotropic_normal_profile(int d);

}  // namespace infogeo
