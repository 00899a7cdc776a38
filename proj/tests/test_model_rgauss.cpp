#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "infogeo/model_rgauss.hpp"
#include "infogeo/specfun.hpp"
#include "infogeo/warped.hpp"
#include "support/oracles.hpp"

using namespace infogeo;
using Eigen::MatrixXd;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const PsiTable& p2_table() {
  static const PsiTable t = tabulate_psi(2, default_eta_grid(), 100000, 7);
  return t;
}

const PsiTable& p3_table() {
  static const PsiTable t = tabulate_psi(3, default_eta_grid(), 20000, 8);
  return t;
}

double p2_log_z(double sigma) { return std::log(sigma * sigma * std::exp(0.25 * sigma * sigma) * std::erf(0.5 * sigma)); }

std::string csv_of(const PsiTable& t) {
  std::ostringstream os;
  write_psi_table_csv(os, t);
  return os.str();
}
}  // namespace

TEST_CASE("grids") {
  const auto g = default_eta_grid();
  REQUIRE(g.size() == 40);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK(g.front() == doctest::Approx(-0.5 / (0.05 * 0.05)).epsilon(1e-14));
  CHECK(g.back() == doctest::Approx(-0.5 / 25.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)eta_grid_from_sigma(1.0, 2.0, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)eta_grid_from_sigma(2.0, 1.0, 5), std::invalid_argument);
}

TEST_CASE("n = 1 reproduces the Gaussian moments") {
  const auto t = tabulate_psi(1, default_eta_grid(), 30000, 3);
  for (std::size_t i = 0; i < t.eta.size(); ++i) {
    const double s2 = -0.5 / t.eta[i];
    CAPTURE(t.sigma[i]);
    CHECK(std::abs(t.psi_p[i] - s2) <= 3.0 * t.stderr_psi_p[i]);
    CHECK(std::abs(t.psi_pp[i] - 2.0 * s2 * s2) <= 3.0 * t.stderr_psi_pp[i]);
    CHECK(t.psi_pp[i] > 0.0);
  }
}

TEST_CASE("P_2 table matches the closed form") {
  const auto& t = p2_table();
  double se_int = 0.0;
  for (std::size_t i = 0; i < t.eta.size(); ++i) {
    const double s = t.sigma[i];
    const double h = 1e-5 * s;
    const double exact_pp = s * s * s * (oracle::rgauss_p2_psi_p(-0.5 / ((s + h) * (s + h))) -
                                         oracle::rgauss_p2_psi_p(-0.5 / ((s - h) * (s - h)))) / (2.0 * h);
    CAPTURE(s);
    CHECK(std::abs(t.psi_p[i] - oracle::rgauss_p2_psi_p(t.eta[i])) <= 3.0 * t.stderr_psi_p[i]);
    CHECK(std::abs(t.psi_pp[i] - exact_pp) <= 3.0 * t.stderr_psi_pp[i]);
    // psi carries the Monte Carlo error of psi' integrated along the grid
    if (i > 0) se_int += 0.5 * (t.eta[i] - t.eta[i - 1]) * (t.stderr_psi_p[i] + t.stderr_psi_p[i - 1]);
    CHECK(std::abs(t.psi[i] - (p2_log_z(s) - p2_log_z(t.sigma[0]))) <= 3.0 * se_int + 1e-3 * t.psi[i]);
  }
}

TEST_CASE("tables are convex and reproducible") {
  const auto& t = p3_table();
  for (double v : t.psi_pp) CHECK(v > 0.0);
  for (std::size_t i = 1; i < t.psi_p.size(); ++i) CHECK(t.psi_p[i] > t.psi_p[i - 1]);
  const auto grid = eta_grid_from_sigma(0.1, 3.0, 8);
  const auto a = tabulate_psi(3, grid, 10000, 99, 1);
  const auto b = tabulate_psi(3, grid, 10000, 99, 4);
  const auto c = tabulate_psi(3, grid, 10000, 100, 1);
  CHECK(csv_of(a) == csv_of(b));
  CHECK(csv_of(a) != csv_of(c));
}

TEST_CASE("tabulation rejects bad requests") {
  const auto grid = eta_grid_from_sigma(0.1, 3.0, 8);
  CHECK_THROWS_AS((void)tabulate_psi(2, grid, 9999, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)tabulate_psi(13, grid, 10000, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)tabulate_psi(2, {-2.0, -1.0, -0.5}, 10000, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)tabulate_psi(2, {-2.0, -1.0, -0.5, 0.5}, 10000, 1), DomainError);
  CHECK_THROWS_AS((void)tabulate_psi(2, {-2.0, -1.0, -1.5, -0.5}, 10000, 1), std::invalid_argument);
}

TEST_CASE("trace moment of the eigenvalue sample") {
  // sum r_i is N(0, n sigma^2) under the weighted law, since the weight depends on differences only
  const int n = 3;
  const double eta = -0.5 / (1.3 * 1.3);
  const auto smp = draw_eigenvalue_sample(n, eta, 200000, 5);
  double wmax = -1e300;
  for (double lw : smp.log_w) wmax = std::max(wmax, lw);
  double sw = 0.0, sw2 = 0.0, m = 0.0;
  for (std::size_t i = 0; i < smp.r.size(); ++i) {
    const double w = std::exp(smp.log_w[i] - wmax);
    const double tr = smp.r[i].sum();
    sw += w;
    sw2 += w * w;
    m += w * tr * tr / n;
  }
  m /= sw;
  const double ess = sw * sw / sw2;
  const double s2 = -0.5 / eta;
  CHECK(std::abs(m - s2) <= 4.0 * s2 * std::sqrt(2.0 / ess));
}

TEST_CASE("csv round trip") {
  const auto& t = p3_table();
  std::istringstream is(csv_of(t));
  const auto back = read_psi_table_csv(is, 3);
  REQUIRE(back.eta.size() == t.eta.size());
  for (std::size_t i = 0; i < t.eta.size(); ++i) {
    CHECK(rel(back.psi_p[i], t.psi_p[i]) <= 1e-11);
    CHECK(rel(back.psi_pp[i], t.psi_pp[i]) <= 1e-11);
  }
  CHECK(back.samples == t.samples);
  CHECK(back.seed == t.seed);
  std::istringstream bad("eta,sigma\n-1,1\n");
  CHECK_THROWS_AS((void)read_psi_table_csv(bad, 3), std::invalid_argument);
}

TEST_CASE("interpolation") {
  const RGaussModel m(p3_table());
  const auto& t = p3_table();
  for (std::size_t i = 0; i < t.eta.size(); ++i) {
    CHECK(m.psi_p(t.eta[i]) == doctest::Approx(t.psi_p[i]).epsilon(1e-13));
    CHECK(m.psi_pp(t.eta[i]) == doctest::Approx(t.psi_pp[i]).epsilon(1e-13));
  }
  for (double e = m.eta_min(); e < m.eta_max(); e *= 0.93) CHECK(m.psi_pp(e) > 0.0);
  CHECK_THROWS_AS((void)m.psi_p(m.eta_min() * 1.01), DomainError);
  CHECK_THROWS_AS((void)m.psi_p(m.eta_max() * 0.99), DomainError);
  CHECK(m.psi2_p(-1.0) > 0.0);
  CHECK(m.coeffs(-1.0).beta2_sq > 0.0);
  CHECK(m.coeffs(-1.0).beta1_sq == 2.0);
}

TEST_CASE("fisher metric examples and structure") {
  const RGaussModel m(p3_table());
  std::mt19937_64 rng(41);
  for (int k = 0; k < 50; ++k) {
    const SpdMatrix xbar(oracle::random_spd(rng, 3));
    const double eta = -0.5 / std::pow(std::uniform_real_distribution<double>(0.1, 4.0)(rng), 2);
    const MatrixXd u = oracle::random_symmetric(rng, 3);
    CHECK(m.fisher_metric(xbar, eta, 0.7, MatrixXd::Zero(3, 3)) == doctest::Approx(0.49 * m.psi_pp(eta)).epsilon(1e-15));
    CHECK(m.fisher_metric(xbar, eta, 0.7, xbar.matrix()) ==
          doctest::Approx(0.49 * m.psi_pp(eta) - 2.0 * eta * 3.0).epsilon(1e-12));

    const auto sp = derham_split(xbar, u);
    auto metric = [&](double ue, const MatrixXd& v) { return m.fisher_metric(xbar, eta, ue, v); };
    const double i1 = metric(0.0, sp.u1), i2 = metric(0.0, sp.u2);
    const double mixed = 0.25 * (metric(0.0, sp.u1 + sp.u2) - metric(0.0, sp.u1 - sp.u2));
    CHECK(std::abs(mixed) <= 1e-10 * std::sqrt(i1 * i2));
    const double cross = 0.25 * (metric(1.0, u) - metric(-1.0, u));
    CHECK(std::abs(cross) <= 1e-12 * (metric(1.0, u)));

    const double a = std::normal_distribution<double>(0.0, 2.0)(rng), b = std::normal_distribution<double>(0.0, 2.0)(rng);
    CHECK(rel(metric(0.0, a * sp.u1 + b * sp.u2), a * a * i1 + b * b * i2) <= 1e-12);
    const auto c = m.coeffs(eta);
    CHECK(rel(i1, c.beta1_sq * affine_metric(xbar, sp.u1, sp.u1)) <= 1e-12);
    CHECK(rel(i2, c.beta2_sq * affine_metric(xbar, sp.u2, sp.u2)) <= 1e-12);

    const MatrixXd g = oracle::random_gl(rng, 3, oracle::condition(xbar.matrix()));
    CHECK(rel(m.fisher_metric(congruence(g, xbar), eta, 0.3, congruence(g, u)), m.fisher_metric(xbar, eta, 0.3, u)) <= 1e-9);
  }
}

TEST_CASE("generalized mahalanobis") {
  const RGaussModel m(p3_table());
  std::mt19937_64 rng(42);
  const SpdMatrix x(oracle::random_spd(rng, 3));
  CHECK(m.mahalanobis(x, x, 1.0) <= 1e-12);
  for (double c : {0.3, 2.0, 7.5})
    CHECK(m.mahalanobis(x, SpdMatrix(c * x.matrix()), 0.8) == doctest::Approx(std::sqrt(3.0) * std::abs(std::log(c)) / 0.8).epsilon(1e-12));
  const WarpProfile p = m.profile();
  for (int k = 0; k < 100; ++k) {
    const SpdMatrix a(oracle::random_spd(rng, 3)), b(oracle::random_spd(rng, 3));
    const double s = std::uniform_real_distribution<double>(0.1, 4.5)(rng);
    const double d = m.mahalanobis(a, b, s);
    const MatrixXd g = oracle::random_gl(rng, 3, std::max(oracle::condition(a.matrix()), oracle::condition(b.matrix())));
    CHECK(rel(m.mahalanobis(congruence(g, a), congruence(g, b), s), d) <= 1e-9);
    // same quantity from the extrinsic metric of the warp profile along the log map
    const auto sp = derham_split(a, spd_log(a, b));
    const double q = extrinsic_metric(p, s, {affine_metric(a, sp.u1, sp.u1), affine_metric(a, sp.u2, sp.u2)});
    CHECK(rel(d * d, q) <= 1e-9);
  }
}

TEST_CASE("n = 1 degenerates to the classical distance on log-variance") {
  const RGaussModel m(tabulate_psi(1, default_eta_grid(), 10000, 2));
  const SpdMatrix x(MatrixXd::Constant(1, 1, 2.0)), y(MatrixXd::Constant(1, 1, 0.3));
  CHECK(m.mahalanobis(x, y, 1.7) == doctest::Approx(std::abs(std::log(2.0 / 0.3)) / 1.7).epsilon(1e-14));
  CHECK_FALSE(m.coeffs(-1.0).has_beta2);
  CHECK_THROWS_AS((void)m.coeffs(-1.0).checked_beta2_sq(), DomainError);
  CHECK(m.profile().blocks() == 1);
}

TEST_CASE("generic and isonormal mahalanobis") {
  Eigen::VectorXd a(2), b(2);
  a << 0.0, 0.0;
  b << 2.0, 0.0;
  CHECK(isonormal_mahalanobis(a, b, 2.0) == 1.0);
  CHECK(isonormal_mahalanobis(a, a, 2.0) == 0.0);
  CHECK(generic_mahalanobis(1.0 / 2.0, 2.0) == 1.0);
  CHECK(generic_mahalanobis(3.0, 0.0) == 0.0);
  CHECK_THROWS_AS((void)generic_mahalanobis(0.0, 1.0), DomainError);
  CHECK_THROWS_AS((void)isonormal_mahalanobis(a, b, 0.0), DomainError);
}

TEST_CASE("log density") {
  for (int n : {2, 3}) {
    const RGaussModel m(n == 2 ? p2_table() : p3_table());
    std::mt19937_64 rng(43 + n);
    for (int k = 0; k < 100; ++k) {
      const SpdMatrix x(oracle::random_spd(rng, n)), xbar(oracle::random_spd(rng, n));
      const double s = std::uniform_real_distribution<double>(0.2, 4.0)(rng);
      const double lp = m.log_density(x, xbar, s);
      const MatrixXd g = oracle::random_gl(rng, n, std::max(oracle::condition(x.matrix()), oracle::condition(xbar.matrix())));
      CHECK(std::abs(m.log_density(congruence(g, x), congruence(g, xbar), s) - lp) <= 1e-9 * std::max(1.0, std::abs(lp)));
      // trace part and determinant-one part add up
      const double eta = -0.5 / (s * s);
      const auto dx = derham_split(x, MatrixXd::Zero(n, n)), db = derham_split(xbar, MatrixXd::Zero(n, n));
      const double split = -std::pow(dx.tau - db.tau, 2) / (2.0 * n * s * s) - affine_distance_sq(dx.s, db.s) / (2.0 * s * s) - m.psi(eta);
      CHECK(std::abs(split - lp) <= 1e-10 * std::max(1.0, std::abs(lp)));
    }
    const SpdMatrix id(MatrixXd::Identity(n, n));
    CHECK(m.log_density(id, id, 1.0) == -m.psi(-0.5));
  }
}

TEST_CASE("profile in the sigma coordinate") {
  const RGaussModel m(p3_table());
  const auto p = m.profile();
  REQUIRE(p.blocks() == 2);
  for (double s : {0.1, 0.5, 1.0, 3.0}) {
    const double e = -0.5 / (s * s);
    CHECK(rel(p.alpha(s), std::sqrt(m.psi_pp(e)) / (s * s * s)) <= 1e-14);
    CHECK(rel(p.betas[0](s), 1.0 / s) <= 1e-15);
    CHECK(rel(std::pow(p.betas[1](s), 2), m.coeffs(e).beta2_sq) <= 1e-12);
    CHECK(rel(p.dalpha_at(s), richardson_d1(p.alpha, s, 1e-4 * s)) <= 1e-6);
    CHECK(rel(p.dbeta_at(1, s), richardson_d1(p.betas[1], s, 1e-4 * s)) <= 1e-6);
  }
}
