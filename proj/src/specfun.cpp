#include "infogeo/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace infogeo {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr double kBig = 1e100;
constexpr double kLogBig = 230.25850929940458;  // log(1e100)
constexpr int kMaxIter = 200000;

void check_args(double nu, double x) {
  if (!std::isfinite(nu) || !std::isfinite(x)) throw DomainError("bessel: non-finite argument");
  if (nu < 0.0) throw DomainError("bessel: negative order");
  if (x < 0.0) throw DomainError("bessel: negative argument");
}

ScaledValue normalize(double m, double ls) {
  if (m == 0.0) return {0.0, 0.0};
  while (std::abs(m) > kBig) { m /= kBig; ls += kLogBig; }
  while (std::abs(m) < 1.0 / kBig) { m *= kBig; ls -= kLogBig; }
  return {m, ls};
}

// Sum_k (x/2)^(2k+nu) / (k! Gamma(k+nu+1)); all terms positive.
ScaledValue series(double nu, double x) {
  const double y = 0.25 * x * x;
  const double lead = nu * std::log(0.5 * x) - std::lgamma(nu + 1.0);
  double term = 1.0, sum = 1.0, extra = 0.0;
  for (int k = 1; k < kMaxIter; ++k) {
    term *= y / (k * (k + nu));
    sum += term;
    if (term < kEps * 0.5 * sum && y < k * (k + nu)) break;
    if (sum > kBig) { sum /= kBig; term /= kBig; extra += kLogBig; }
  }
  return normalize(sum, lead + extra);
}

// Temme / Steed: CF1 for I'/I, CF2 for K_mu, Wronskian; returns I_nu e^{-x} scaled.
ScaledValue large_argument(double nu, double x) {
  const double xi = 1.0 / x;
  const int nl = static_cast<int>(nu + 0.5);
  const double xmu = nu - nl;
  const double xmu2 = xmu * xmu;

  double h = nu * xi;
  if (h < kTiny) h = kTiny;
  double b = 2.0 * nu * xi, d = 0.0, c = h;
  int i = 1;
  for (; i < kMaxIter; ++i) {
    b += 2.0 * xi;
    d = 1.0 / (b + d);
    c = b + 1.0 / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  if (i >= kMaxIter) throw DomainError("bessel: CF1 did not converge");

  // Downward recurrence from nu to mu; ril carries I_mu / I_nu up to exp(log_ril).
  double ril = 1.0, ripl = h * ril, log_ril = 0.0;
  double fact = nu * xi;
  for (int l = nl - 1; l >= 0; --l) {
    const double ritemp = fact * ril + ripl;
    fact -= xi;
    ripl = fact * ritemp + ril;
    ril = ritemp;
    if (std::abs(ril) > kBig) { ril /= kBig; ripl /= kBig; log_ril += kLogBig; }
  }
  const double f = ripl / ril;

  b = 2.0 * (1.0 + x);
  d = 1.0 / b;
  double delh = d;
  h = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25 - xmu2;
  double q = a1;
  c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (i = 2; i < kMaxIter; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  if (i >= kMaxIter) throw DomainError("bessel: CF2 did not converge");
  h = a1 * h;
  const double rkmu = std::sqrt(std::numbers::pi / (2.0 * x)) / s;  // K_mu e^{x}
  const double rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
  const double rkmup = xmu * xi * rkmu - rk1;
  const double rimu = xi / (f * rkmu - rkmup);  // I_mu e^{-x}
  return normalize(rimu / ril, x - log_ril);
}

}  // namespace

double ScaledValue::value() const { return mantissa * std::exp(log_scale); }

double ScaledValue::log() const { return std::log(mantissa) + log_scale; }

ScaledValue bessel_i(double nu, double x) {
  check_args(nu, x);
  if (x == 0.0) return nu == 0.0 ? ScaledValue{1.0, 0.0} : ScaledValue{0.0, 0.0};
  if (x <= std::max(10.0, 2.0 * nu)) return series(nu, x);
  return large_argument(nu, x);
}

double log_bessel_i(double nu, double x) {
  const ScaledValue v = bessel_i(nu, x);
  if (v.mantissa <= 0.0) return -std::numeric_limits<double>::infinity();
  return v.log();
}

double bessel_ratio(double a, double x) {
  if (!std::isfinite(a) || !std::isfinite(x)) throw DomainError("bessel_ratio: non-finite argument");
  if (a <= 0.0) throw DomainError("bessel_ratio: order must be positive");
  if (x <= 0.0) throw DomainError("bessel_ratio: argument must be positive");
  // 1/(b1 + 1/(b2 + ...)), b_j = 2(a + j - 1)/x, modified Lentz.
  double f = kTiny, c = f, d = 0.0;
  for (int j = 1; j < kMaxIter; ++j) {
    const double b = 2.0 * (a + j - 1) / x;
    d = b + d;
    if (d == 0.0) d = kTiny;
    c = b + 1.0 / c;
    if (c == 0.0) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      // Lentz fixes the depth; the bottom-up pass over positive terms rounds only a few ulp.
      double t = 2.0 * (a + j + 7) / x;
      for (int i = j + 7; i >= 1; --i) t = 2.0 * (a + i - 1) / x + 1.0 / t;
      return 1.0 / t;
    }
  }
  throw DomainError("bessel_ratio: continued fraction did not converge");
}

BesselRatios bessel_ratio_pair(double nu, double x) {
  if (!(nu > 0.0)) throw DomainError("bessel_ratio_pair: order must be positive");
  const double rho = bessel_ratio(nu + 1.0, x);  // I_{nu+1}/I_nu
  const double r1 = std::min(1.0 / (2.0 * nu / x + rho), std::nextafter(1.0, 0.0));
  return {r1, rho * r1};
}

}  // namespace infogeo
