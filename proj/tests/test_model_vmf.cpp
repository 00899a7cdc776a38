#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "infogeo/model_vmf.hpp"
#include "infogeo/specfun.hpp"
#include "infogeo/warped.hpp"
#include "support/oracles.hpp"

using namespace infogeo;
using Eigen::VectorXd;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

VectorXd e1(int n) {
  VectorXd v = VectorXd::Zero(n);
  v[0] = 1.0;
  return v;
}

std::vector<double> geometric_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  return g;
}

struct MeanSe {
  double mean, se;
};

MeanSe mean_se(const std::vector<double>& v) {
  double s = 0.0, s2 = 0.0;
  for (double x : v) s += x;
  const double m = s / v.size();
  for (double x : v) s2 += (x - m) * (x - m);
  return {m, std::sqrt(s2 / (v.size() - 1.0) / v.size())};
}
}  // namespace

TEST_CASE("log density examples") {
  for (int n : {2, 3, 5}) {
    const VmfModel m(n);
    const double area = 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
    std::mt19937_64 rng(n);
    CHECK(m.log_density(oracle::random_unit(rng, n), VectorXd::Zero(n)) ==
          doctest::Approx(-std::log(area)).epsilon(1e-14));
  }
  const VmfModel m(3);
  const double psi1 = 1.5 * std::log(2.0 * std::numbers::pi) - 0.5 * std::log(1.0) +
                      std::log(oracle::bessel_i_series(0.5, 1.0, 50));
  CHECK(m.log_density(e1(3), e1(3)) == doctest::Approx(1.0 - psi1).epsilon(1e-14));
  CHECK(m.psi(1.0) == doctest::Approx(psi1).epsilon(1e-14));
}

TEST_CASE("log density invariance under rotations") {
  std::mt19937_64 rng(31);
  for (int n : {2, 3, 5, 8})
    for (int k = 0; k < 100; ++k) {
      const VmfModel m(n);
      const VectorXd x = oracle::random_unit(rng, n);
      const VectorXd z = std::exp(std::normal_distribution<double>(0.0, 2.0)(rng)) * oracle::random_unit(rng, n);
      const Eigen::MatrixXd r = oracle::random_rotation(rng, n);
      const VectorXd rx = (r * x).normalized();
      CHECK(std::abs(m.log_density(rx, r * z) - m.log_density(x, z)) <= 1e-12 * std::max(1.0, z.norm()));
    }
}

TEST_CASE("log density rejects non-unit points") {
  const VmfModel m(3);
  CHECK_THROWS_AS((void)m.log_density(1.01 * e1(3), e1(3)), DomainError);
  CHECK_THROWS_AS((void)m.log_density(e1(2), e1(3)), std::invalid_argument);
  CHECK_THROWS_AS(VmfModel{1}, std::invalid_argument);
}

TEST_CASE("small eta limits") {
  for (int n = 2; n <= 8; ++n) {
    const VmfModel m(n);
    CAPTURE(n);
    CHECK(std::abs(m.psi_pp(1e-4) - 1.0 / n) <= 1e-8);
    CHECK(std::abs(m.beta_sq(1e-4) / 1e-8 - 1.0 / n) <= 1e-6);
    CHECK(m.psi_pp(0.0) == 1.0 / n);
    CHECK(m.beta_sq(0.0) == 0.0);
    CHECK(m.beta_sq_over_eta_sq(0.0) == 1.0 / n);
  }
  CHECK(std::abs(VmfModel(3).psi_pp(1e-9) - 1.0 / 3.0) <= 1e-15);
  CHECK(std::abs(VmfModel(4).beta_sq(0.01) - 2.5e-5) <= 1e-9);
}

TEST_CASE("series branch joins the Bessel branch") {
  for (int n : {2, 3, 4, 7, 16, 64}) {
    const VmfModel m(n);
    const double e = VmfModel::kSeriesSwitch;
    const auto below = m.mean_derivatives(e * (1.0 - 1e-12));
    const auto r = bessel_ratio_pair(m.nu(), e);
    const double bessel_pp = 1.0 / n + (n - 1.0) / n * r.r2 - r.r1 * r.r1;
    CAPTURE(n);
    CHECK(std::abs(below.a - r.r1) <= 1e-9 * r.r1);
    CHECK(std::abs(below.a1 - bessel_pp) <= 1e-9);
    CHECK(std::abs(m.psi_pp(e * (1 - 1e-12)) - m.psi_pp(e)) <= 1e-9);
    CHECK(std::abs(m.beta_sq_over_eta_sq(e * (1 - 1e-12)) - m.beta_sq_over_eta_sq(e)) <= 1e-9);
  }
}

TEST_CASE("inverse-power branch joins the Bessel branch") {
  for (int n : {2, 3, 8, 16, 64}) {
    const VmfModel m(n);
    const double e = m.asymptotic_switch();
    const auto above = m.mean_derivatives(e);
    const auto r = bessel_ratio_pair(m.nu(), e);
    const double bessel_pp = 1.0 / n + (n - 1.0) / n * r.r2 - r.r1 * r.r1;
    CAPTURE(n);
    CHECK(rel(above.a, bessel_ratio(m.nu(), e)) <= 1e-14);
    CHECK(rel(above.a1, bessel_pp) <= 1e-10);
    CHECK(rel(above.a1, (n - 1.0) / (2.0 * e * e)) <= 2.0 * n / e);
  }
  // mpmath, 40 digits: n = 64, eta = 100
  const auto d = VmfModel(64).mean_derivatives(100.0);
  CHECK(rel(d.a, 0.73238019409658214) <= 1e-15);
  CHECK(rel(d.a1, 0.0022197290142059297) <= 1e-14);
  CHECK(rel(d.a2, -3.5805188673175609e-5) <= 1e-13);
  CHECK(rel(d.a3, 8.3757825416093496e-7) <= 1e-12);
}

TEST_CASE("mean derivatives match mpmath reference values") {
  // n = 3: A = coth(eta) - 1/eta
  const VmfModel m(3);
  for (double e : {0.5, 1.0, 3.0, 10.0, 40.0, 300.0, 5e4}) {
    const double a = 1.0 / std::tanh(e) - 1.0 / e;
    const double a1 = 1.0 / (e * e) - 1.0 / std::pow(std::sinh(e), 2);
    const auto d = m.mean_derivatives(e);
    CAPTURE(e);
    CHECK(rel(d.a, a) <= 1e-14);
    CHECK(rel(d.a1, a1) <= 1e-11);
    CHECK(rel(m.psi_pp(e), a1) <= 1e-11);
  }
  // higher derivatives by differentiating the Riccati form, checked by central differences
  for (int n : {2, 5, 8})
    for (double e : {0.01, 0.3, 2.0, 20.0, 150.0, 800.0}) {
      const VmfModel mm(n);
      const double h = 1e-4 * e;
      const auto dp = mm.mean_derivatives(e + h), dm = mm.mean_derivatives(e - h), d = mm.mean_derivatives(e);
      CAPTURE(n);
      CAPTURE(e);
      CHECK(rel((dp.a - dm.a) / (2 * h), d.a1) <= 1e-5);
      CHECK(rel((dp.a1 - dm.a1) / (2 * h), d.a2) <= 1e-5);
      CHECK(rel((dp.a2 - dm.a2) / (2 * h), d.a3) <= 1e-5);
    }
}

TEST_CASE("curvature reference values") {
  struct Ref {
    int n;
    double eta, ks, kr;
  };
  // mpmath, 50 digits, Bessel ratios differentiated numerically
  const Ref refs[] = {{3, 0.253125, -0.00085169734077158698, -0.0017044157900508435},
                      {3, 1.0, -0.012723825403893056, -0.025626991064659541},
                      {3, 200.0, -0.2474937501578243, -0.24999368702810535},
                      {8, 0.253125, -7.9983561984725177e-5, -0.00015992439684313967}};
  for (const auto& r : refs) {
    const auto c = curvatures(VmfModel(r.n).profile(), 1.0, r.eta);
    CAPTURE(r.n);
    CAPTURE(r.eta);
    // Ks = 1/beta^2 - (d_r beta/beta)^2 cancels; allow ~50 ulp of the 1/beta^2 term
    const double b2 = VmfModel(r.n).beta_sq(r.eta);
    CHECK(std::abs(c.ks - r.ks) <= 1e-9 * std::abs(r.ks) + 1e-14 / b2);
    CHECK(rel(c.kr, r.kr) <= 1e-9);
  }
}

TEST_CASE("psi'' and beta^2 agree with sampled moments") {
  const int n = 3;
  const double eta = 2.0;
  const VmfModel m(n);
  oracle::VmfSampler sampler(e1(n), eta);
  std::mt19937_64 rng(32);
  const int count = 1000000;
  std::vector<double> t(count), t2(count), perp(count);
  for (int i = 0; i < count; ++i) {
    t[i] = sampler.sample_t(rng);
    t2[i] = t[i] * t[i];
    perp[i] = eta * eta / (n - 1.0) * (1.0 - t2[i]);
  }
  const auto mt = mean_se(t), mt2 = mean_se(t2), mp = mean_se(perp);
  // Var(t) = E t^2 - (E t)^2; first-order error propagation for its standard error
  const double var = mt2.mean - mt.mean * mt.mean;
  std::vector<double> centred(count);
  for (int i = 0; i < count; ++i) centred[i] = (t[i] - mt.mean) * (t[i] - mt.mean);
  const auto mv = mean_se(centred);
  CHECK(std::abs(mt.mean - m.mean_derivatives(eta).a) <= 3.0 * mt.se);
  CHECK(std::abs(var - m.psi_pp(eta)) <= 3.0 * mv.se);
  CHECK(std::abs(mp.mean - m.beta_sq(eta)) <= 3.0 * mp.se);
}

TEST_CASE("fisher metric examples") {
  const VmfModel m5(5);
  CHECK(m5.fisher_metric(VectorXd::Zero(5), e1(5)) == 0.2);
  std::mt19937_64 rng(33);
  for (int n : {2, 3, 6}) {
    const VmfModel m(n);
    for (int k = 0; k < 20; ++k) {
      const VectorXd xbar = oracle::random_unit(rng, n);
      const double eta = std::exp(std::normal_distribution<double>(0.0, 1.5)(rng));
      const VectorXd u = oracle::random_unit(rng, n) * 1.7;
      const VectorXd z = eta * xbar;
      CHECK(rel(m.fisher_metric(z, 0.4 * xbar), 0.16 * m.psi_pp(z.norm())) <= 1e-13);
      CHECK(m.fisher_metric(1e-4 * xbar, u) == doctest::Approx(u.squaredNorm() / n).epsilon(1e-6));
      CHECK(std::abs(m.fisher_metric(VectorXd::Zero(n), u) - u.squaredNorm() / n) <= 1e-15);
    }
  }
}

TEST_CASE("fisher metric equals the score covariance") {
  const int n = 3;
  const VmfModel m(n);
  const int count = 1000000;
  std::mt19937_64 rng(34);
  for (double eta : {0.5, 2.0, 8.0}) {
    const VectorXd xbar = oracle::random_unit(rng, n);
    const VectorXd z = eta * xbar;
    oracle::VmfSampler sampler(xbar, eta);
    const double a = m.mean_derivatives(eta).a;
    // orthonormal frame: xbar, then two perpendicular directions
    Eigen::MatrixXd frame(n, n);
    frame.col(0) = xbar;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(frame.col(0));
    const Eigen::MatrixXd q = qr.householderQ();
    frame.col(1) = q.col(1);
    frame.col(2) = q.col(2);
    std::vector<std::vector<double>> prod(6, std::vector<double>(count));
    for (int i = 0; i < count; ++i) {
      const VectorXd score = sampler.sample(rng) - a * xbar;  // gradient of log density in z
      const Eigen::Vector3d c = frame.transpose() * score;
      int k = 0;
      for (int r = 0; r < 3; ++r)
        for (int s = r; s < 3; ++s) prod[k++][i] = c[r] * c[s];
    }
    // analytic metric in the same frame: polarization of fisher_metric
    auto metric = [&](const VectorXd& u, const VectorXd& v) {
      return 0.25 * (m.fisher_metric(z, u + v) - m.fisher_metric(z, u - v));
    };
    int k = 0;
    for (int r = 0; r < 3; ++r)
      for (int s = r; s < 3; ++s) {
        const auto est = mean_se(prod[k++]);
        const double exact = metric(frame.col(r), frame.col(s));
        CAPTURE(eta);
        CAPTURE(r);
        CAPTURE(s);
        CHECK(std::abs(est.mean - exact) <= 3.0 * est.se);
      }
    CHECK(rel(metric(frame.col(0), frame.col(0)), m.psi_pp(eta)) <= 1e-12);
    CHECK(rel(metric(frame.col(1), frame.col(1)), m.beta_sq(eta) / (eta * eta)) <= 1e-12);
  }
}

TEST_CASE("curvature profile properties") {
  const auto grid = geometric_grid(0.05, 200.0, 100);
  const double table[] = {-0.50, -0.25, -0.16, -0.12, -0.10, -0.08, -0.07};
  for (int n = 2; n <= 8; ++n) {
    const VmfModel m(n);
    CAPTURE(n);
    const auto prof = vmf_curvature_profile(m, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(prof.ks[i] <= 0.0);
      CHECK(prof.kr[i] <= 0.0);
    }
    const auto small = curvatures(m.profile(), 1.0, 0.01);
    CHECK(std::abs(small.ks) <= 0.02);
    CHECK(std::abs(small.kr) <= 0.02);
    const auto k100 = curvatures(m.profile(), 1.0, 100.0), k200 = curvatures(m.profile(), 1.0, 200.0);
    CHECK(std::abs(k200.ks - k100.ks) <= 0.005);
    CHECK(std::abs(prof.ks_plateau - table[n - 2]) <= 0.01);
    CHECK(std::abs(prof.kr_plateau - table[n - 2]) <= 0.01);
    CHECK(std::abs(prof.kr_plateau + 1.0 / (2.0 * (n - 1))) <= 1e-3);
  }
}

TEST_CASE("psi'' positivity and asymptotic law") {
  for (int n = 2; n <= 8; ++n) {
    const VmfModel m(n);
    for (double e = 1e-6; e <= 1e6; e *= 1.7) CHECK(m.psi_pp(e) > 0.0);
    for (double e : {50.0, 75.0, 100.0, 150.0, 200.0, 1e3, 1e5}) {
      const double ratio = m.psi_pp(e) * 2.0 * e * e / (n - 1.0);
      CAPTURE(n);
      CAPTURE(e);
      CHECK(ratio >= 1.0 - 5.0 / e);
      CHECK(ratio <= 1.0 + 5.0 / e);
    }
  }
}

TEST_CASE("profile is regular at the origin") {
  const VmfModel m(4);
  const auto p = m.profile();
  CHECK(p.sigma_min == 0.0);
  CHECK(p.alpha(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.betas[0](0.0) == 0.0);
  CHECK(p.dbeta_at(0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.d2beta_at(0, 0.0) == 0.0);
  for (double e : {1e-8, 1e-5, 0.999e-3}) {
    const double h = 1e-3 * e;
    CHECK(rel((p.betas[0](e + h) - p.betas[0](e - h)) / (2 * h), p.dbeta_at(0, e)) <= 1e-8);
  }
  const double s = VmfModel::kSeriesSwitch;
  CHECK(std::abs(p.dbeta_at(0, s * (1 - 1e-12)) - p.dbeta_at(0, s)) <= 1e-12);
  CHECK(std::abs(p.d2beta_at(0, s * (1 - 1e-12)) - p.d2beta_at(0, s)) <= 1e-9);
  CHECK_THROWS_AS((void)m.psi_pp(-1.0), DomainError);
}
