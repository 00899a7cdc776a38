#include "infogeo/warped.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

#include "infogeo/specfun.hpp"

namespace infogeo {

namespace {

double fd_step(double sigma) { return std::max(1e-4, 1e-4 * sigma); }

// int_a^b alpha, in log sigma, one piece per decade.
double integrate_alpha(const WarpProfile& p, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  const double la = std::log(a), lb = std::log(b);
  const int pieces = std::max(1, static_cast<int>(std::ceil((lb - la) / std::log(10.0))));
  const double w = (lb - la) / pieces;
  double total = 0.0;
  for (int k = 0; k < pieces; ++k) {
    const double s0 = la + k * w, s1 = (k + 1 == pieces) ? lb : la + (k + 1) * w;
    auto f = [&](double s) {
      const double sig = std::exp(s);
      return p.alpha(sig) * sig;
    };
    // tolerance sits above the ~1e-13 evaluation noise of cancelling profiles
    total += gauss_kronrod<double, 31>::integrate(f, s0, s1, 12, 1e-11);
  }
  return total;
}

double fit_slope(const WarpProfile& p, double lo, double hi) {
  const int m = 21;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    const double x = std::log(lo) + (std::log(hi) - std::log(lo)) * i / (m - 1);
    const double y = std::log(p.alpha(std::exp(x)));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

void WarpProfile::validate() const {
  if (!alpha) throw std::invalid_argument("WarpProfile: missing alpha");
  if (betas.empty()) throw std::invalid_argument("WarpProfile: no blocks");
  if (block_dims.size() != betas.size()) throw std::invalid_argument("WarpProfile: block_dims size mismatch");
  if (!dbetas.empty() && dbetas.size() != betas.size()) throw std::invalid_argument("WarpProfile: dbetas size mismatch");
  if (!d2betas.empty() && d2betas.size() != betas.size()) throw std::invalid_argument("WarpProfile: d2betas size mismatch");
}

void WarpProfile::check_sigma(double sigma) const {
  if (!std::isfinite(sigma) || sigma < sigma_min || sigma > sigma_max)
    throw DomainError("sigma outside profile domain");
}

double WarpProfile::dalpha_at(double sigma) const {
  if (dalpha) return dalpha(sigma);
  return richardson_d1(alpha, sigma, fd_step(sigma));
}

double WarpProfile::dbeta_at(std::size_t q, double sigma) const {
  if (!dbetas.empty() && dbetas[q]) return dbetas[q](sigma);
  return richardson_d1(betas[q], sigma, fd_step(sigma));
}

double WarpProfile::d2beta_at(std::size_t q, double sigma) const {
  if (!d2betas.empty() && d2betas[q]) return d2betas[q](sigma);
  return richardson_d2(betas[q], sigma, fd_step(sigma));
}

double richardson_d1(const ScalarFn& f, double x, double h) {
  const double d_h = (f(x + h) - f(x - h)) / (2.0 * h);
  const double d_h2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
  return (4.0 * d_h2 - d_h) / 3.0;
}

double richardson_d2(const ScalarFn& f, double x, double h) {
  const double f0 = f(x);
  const double d_h = (f(x + h) - 2.0 * f0 + f(x - h)) / (h * h);
  const double g = 0.5 * h;
  const double d_h2 = (f(x + g) - 2.0 * f0 + f(x - g)) / (g * g);
  return (4.0 * d_h2 - d_h) / 3.0;
}

double metric_eval(const WarpProfile& p, double sigma, const TangentDecomposition& u) {
  p.check_sigma(sigma);
  const double a = p.alpha(sigma) * u.u_sigma;
  return a * a + extrinsic_metric(p, sigma, u.block_norms);
}

double extrinsic_metric(const WarpProfile& p, double sigma, const std::vector<double>& block_norms) {
  if (block_norms.size() != p.blocks()) throw std::invalid_argument("extrinsic_metric: block count mismatch");
  double s = 0.0;
  for (std::size_t q = 0; q < p.blocks(); ++q) {
    if (!(block_norms[q] >= 0.0)) throw DomainError("extrinsic_metric: negative block norm");
    const double b = p.betas[q](sigma);
    s += b * b * block_norms[q];
  }
  return s;
}

double vertical_distance(const WarpProfile& p, double sigma0, double sigma1) {
  if (!(sigma0 > 0.0) || !(sigma1 > 0.0)) throw DomainError("vertical_distance: sigma must be positive");
  p.check_sigma(sigma0);
  p.check_sigma(sigma1);
  if (sigma0 == sigma1) return 0.0;
  if (sigma0 > sigma1) return -integrate_alpha(p, sigma1, sigma0);
  return integrate_alpha(p, sigma0, sigma1);
}

CompletenessReport completeness_probe(const WarpProfile& p, double sigma_ref, double horizon) {
  if (!(horizon > sigma_ref) || !(sigma_ref > 0.0)) throw std::invalid_argument("completeness_probe: need horizon > sigma_ref > 0");
  const double lo = std::max(1.0 / horizon, std::max(p.sigma_min, 1e-300));
  CompletenessReport r{};
  r.r_upper = integrate_alpha(p, sigma_ref, horizon);
  r.r_lower = lo < sigma_ref ? integrate_alpha(p, lo, sigma_ref) : 0.0;
  r.exponent_inf = fit_slope(p, horizon / 10.0, horizon);
  r.exponent_zero = fit_slope(p, lo, 10.0 * lo);
  r.diverging_inf = r.exponent_inf >= -1.05;
  r.diverging_zero = r.exponent_zero <= -0.95;
  return r;
}

Curvatures curvatures(const WarpProfile& p, double base_curvature, double sigma) {
  if (p.blocks() != 1) throw std::invalid_argument("curvatures: single-block profile required");
  p.check_sigma(sigma);
  const double a = p.alpha(sigma);
  const double da = p.dalpha_at(sigma);
  const double b = p.betas[0](sigma);
  const double db = p.dbeta_at(0, sigma);
  const double d2b = p.d2beta_at(0, sigma);
  const double br = db / a;                           // d beta / dr
  const double brr = d2b / (a * a) - da * db / (a * a * a);
  return {base_curvature / (b * b) - (br / b) * (br / b), -brr / b};
}

WarpProfile isotropic_normal_profile(int d) {
  if (d < 1) throw std::invalid_argument("isotropic_normal_profile: d >= 1");
  const double c = std::sqrt(2.0 * d);
  WarpProfile p;
  p.alpha = [c](double s) { return c / s; };
  p.dalpha = [c](double s) { return -c / (s * s); };
  p.betas = {[](double s) { return 1.0 / s; }};
  p.dbetas = {[](double s) { return -1.0 / (s * s); }};
  p.d2betas = {[](double s) { return 2.0 / (s * s * s); }};
  p.block_dims = {d};
  p.base_name = "R^" + std::to_string(d);
  return p;
}

}  // namespace infogeo
