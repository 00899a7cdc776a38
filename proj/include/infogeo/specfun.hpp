#pragma once

#include <stdexcept>

namespace infogeo {

/// Thrown for arguments outside a function's domain.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Value stored as mantissa * exp(log_scale); mantissa kept in [1e-100, 1e100] or 0.
struct ScaledValue {
  double mantissa = 0.0;
  double log_scale = 0.0;

  [[nodiscard]] double value() const;
  [[nodiscard]] double log() const;
};

/// Modified Bessel function of the first kind I_nu(x), nu >= 0, x >= 0.
[[nodiscard]] ScaledValue bessel_i(double nu, double x);

/// log I_nu(x) for x > 0 (or x = 0, nu = 0).
[[nodiscard]] double log_bessel_i(double nu, double x);

/// I_a(x) / I_{a-1}(x) by continued fraction; a > 0, x > 0.
[[nodiscard]] double bessel_ratio(double a, double x);

struct BesselRatios {
  double r1;  ///< I_nu / I_{nu-1}
  double r2;  ///< I_{nu+1} / I_{nu-1}
};

/// Both ratios; r2 = 1 - (2 nu / x) r1 holds by construction. nu > 0, x > 0.
[[nodiscard]] BesselRatios bessel_ratio_pair(double nu, double x);

}  // namespace infogeo
