#include "infogeo/model_rgauss.hpp"

#include <algorithm>
#include <cmath>

// Boost 1.74 pchip calls isnan unqualified.
namespace boost::math::interpolators {
using std::isnan;
}
#include <boost/math/interpolators/pchip.hpp>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "infogeo/csv.hpp"

namespace infogeo {

namespace {

constexpr int kBatches = 20;
constexpr int kMaxTabulationDim = 12;

double sigma_of_eta(double eta) { return std::sqrt(-0.5 / eta); }

// Proposal component mean direction: rho_i = (n+1)/2 - i.
Eigen::VectorXd rho_vector(int n) {
  Eigen::VectorXd rho(n);
  for (int i = 0; i < n; ++i) rho[i] = 0.5 * (n + 1) - (i + 1);
  return rho;
}

// log sum_pi exp(<pi(rho), r>) by a DP over column subsets; exact, O(2^n n).
double log_mixture_sum(const Eigen::VectorXd& r, const Eigen::VectorXd& rho) {
  const int n = static_cast<int>(r.size());
  if (n == 1) return 0.0;
  const double mean = r.mean();  // sum rho = 0, so shifting r is free
  std::vector<long double> e(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e[i * n + j] = std::exp(static_cast<long double>(rho[i] * (r[j] - mean)));
  std::vector<long double> f(std::size_t{1} << n, 0.0L);
  f[0] = 1.0L;
  for (std::size_t s = 1; s < f.size(); ++s) {
    const int row = __builtin_popcountll(s) - 1;
    long double acc = 0.0L;
    for (int j = 0; j < n; ++j)
      if (s & (std::size_t{1} << j)) acc += f[s ^ (std::size_t{1} << j)] * e[row * n + j];
    f[s] = acc;
  }
  return static_cast<double>(std::log(f.back()));
}

double log_sinh_product(const Eigen::VectorXd& r) {
  double s = 0.0;
  for (int i = 0; i < r.size(); ++i)
    for (int j = i + 1; j < r.size(); ++j) {
      const double a = 0.5 * std::abs(r[i] - r[j]);
      if (a == 0.0) return -std::numeric_limits<double>::infinity();
      s += a + std::log1p(-std::exp(-2.0 * a)) - std::log(2.0);
    }
  return s;
}

double log_weight(const Eigen::VectorXd& r, const Eigen::VectorXd& rho) {
  return log_sinh_product(r) - log_mixture_sum(r, rho);
}

std::mt19937_64 batch_rng(std::uint64_t seed, int batch) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(batch)};
  return std::mt19937_64(seq);
}

std::uint64_t batch_size(std::uint64_t samples, int batch) {
  return samples / kBatches + (static_cast<std::uint64_t>(batch) < samples % kBatches ? 1 : 0);
}

struct BatchMoments {
  double log_scale = -std::numeric_limits<double>::infinity();
  double s0 = 0.0;    // sum of weights, relative to exp(log_scale)
  double mean = 0.0;  // weighted mean of d^2
  double var = 0.0;   // weighted variance of d^2
};

// Draws one batch of standard normals and evaluates every grid point on them.
std::vector<BatchMoments> run_batch(int n, const std::vector<double>& eta_grid, std::uint64_t count,
                                    std::uint64_t seed, int batch) {
  std::mt19937_64 rng = batch_rng(seed, batch);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd xi(n, static_cast<long>(count));
  for (long k = 0; k < xi.cols(); ++k)
    for (int i = 0; i < n; ++i) xi(i, k) = normal(rng);
  const Eigen::VectorXd rho = rho_vector(n);
  std::vector<BatchMoments> out(eta_grid.size());
  std::vector<double> lw(count), d2(count);
  for (std::size_t g = 0; g < eta_grid.size(); ++g) {
    const double s = sigma_of_eta(eta_grid[g]);
    double mx = -std::numeric_limits<double>::infinity();
    for (std::uint64_t k = 0; k < count; ++k) {
      const Eigen::VectorXd r = s * s * rho + s * xi.col(static_cast<long>(k));
      lw[k] = log_weight(r, rho);
      d2[k] = r.squaredNorm();
      mx = std::max(mx, lw[k]);
    }
    BatchMoments& m = out[g];
    m.log_scale = mx;
    double s0 = 0.0, s1 = 0.0;
    for (std::uint64_t k = 0; k < count; ++k) {
      lw[k] = std::exp(lw[k] - mx);
      s0 += lw[k];
      s1 += lw[k] * d2[k];
    }
    m.s0 = s0;
    m.mean = s1 / s0;
    double s2 = 0.0;
    for (std::uint64_t k = 0; k < count; ++k) s2 += lw[k] * (d2[k] - m.mean) * (d2[k] - m.mean);
    m.var = s2 / s0;
  }
  return out;
}

void validate_grid(const std::vector<double>& eta_grid) {
  if (eta_grid.size() < 4) throw std::invalid_argument("psi grid: need at least 4 points");
  for (std::size_t i = 0; i < eta_grid.size(); ++i) {
    if (!(eta_grid[i] < 0.0) || !std::isfinite(eta_grid[i])) throw DomainError("psi grid: eta must be negative");
    if (i && !(eta_grid[i] > eta_grid[i - 1])) throw std::invalid_argument("psi grid: eta must be strictly increasing");
  }
}

}  // namespace

std::vector<double> eta_grid_from_sigma(double sigma_min, double sigma_max, int count) {
  if (!(sigma_min > 0.0) || !(sigma_max > sigma_min) || count < 2)
    throw std::invalid_argument("eta grid: need 0 < sigma_min < sigma_max and count >= 2");
  std::vector<double> g(static_cast<std::size_t>(count));
  const double la = std::log(sigma_min), lb = std::log(sigma_max);
  for (int i = 0; i < count; ++i) {
    const double s = std::exp(la + (lb - la) * i / (count - 1));
    g[static_cast<std::size_t>(i)] = -0.5 / (s * s);
  }
  return g;
}

std::vector<double> default_eta_grid() { return eta_grid_from_sigma(0.05, 5.0, 40); }

int default_thread_count() {
  if (const char* env = std::getenv("INFOGEO_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

EigenvalueSample draw_eigenvalue_sample(int n, double eta, std::uint64_t samples, std::uint64_t seed) {
  if (n < 1 || n > kMaxTabulationDim) throw std::invalid_argument("eigenvalue sample: need 1 <= n <= 12");
  if (!(eta < 0.0)) throw DomainError("eigenvalue sample: eta must be negative");
  std::mt19937_64 rng = batch_rng(seed, 0);
  std::normal_distribution<double> normal;
  const Eigen::VectorXd rho = rho_vector(n);
  const double s = sigma_of_eta(eta);
  EigenvalueSample out;
  out.r.reserve(samples);
  out.log_w.reserve(samples);
  for (std::uint64_t k = 0; k < samples; ++k) {
    Eigen::VectorXd xi(n);
    for (int i = 0; i < n; ++i) xi[i] = normal(rng);
    Eigen::VectorXd r = s * s * rho + s * xi;
    out.log_w.push_back(log_weight(r, rho));
    out.r.push_back(std::move(r));
  }
  return out;
}

PsiTable tabulate_psi(int n, const std::vector<double>& eta_grid, std::uint64_t samples, std::uint64_t seed,
                      int threads) {
  if (n < 1 || n > kMaxTabulationDim) throw std::invalid_argument("tabulate_psi: need 1 <= n <= 12");
  if (samples < 10000) throw std::invalid_argument("tabulate_psi: need at least 1e4 samples");
  validate_grid(eta_grid);
  if (threads <= 0) threads = default_thread_count();
  threads = std::min(threads, kBatches);

  std::vector<std::vector<BatchMoments>> batches(kBatches);
  auto worker = [&](int first) {
    for (int b = first; b < kBatches; b += threads) batches[b] = run_batch(n, eta_grid, batch_size(samples, b), seed, b);
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  PsiTable t;
  t.n = n;
  t.samples = samples;
  t.seed = seed;
  t.eta = eta_grid;
  for (std::size_t g = 0; g < eta_grid.size(); ++g) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& b : batches) top = std::max(top, b[g].log_scale);
    double w_sum = 0.0, m_sum = 0.0;
    std::vector<double> w(kBatches);
    for (int b = 0; b < kBatches; ++b) {
      w[b] = batches[b][g].s0 * std::exp(batches[b][g].log_scale - top);
      w_sum += w[b];
      m_sum += w[b] * batches[b][g].mean;
    }
    const double mean = m_sum / w_sum;
    double v_sum = 0.0;
    for (int b = 0; b < kBatches; ++b) {
      const double dm = batches[b][g].mean - mean;
      v_sum += w[b] * (batches[b][g].var + dm * dm);
    }
    double bm = 0.0, bv = 0.0;
    for (int b = 0; b < kBatches; ++b) { bm += batches[b][g].mean; bv += batches[b][g].var; }
    bm /= kBatches;
    bv /= kBatches;
    double sm = 0.0, sv = 0.0;
    for (int b = 0; b < kBatches; ++b) {
      sm += (batches[b][g].mean - bm) * (batches[b][g].mean - bm);
      sv += (batches[b][g].var - bv) * (batches[b][g].var - bv);
    }
    t.sigma.push_back(sigma_of_eta(eta_grid[g]));
    t.psi_p.push_back(mean);
    t.psi_pp.push_back(v_sum / w_sum);
    t.stderr_psi_p.push_back(std::sqrt(sm / (kBatches - 1) / kBatches));
    t.stderr_psi_pp.push_back(std::sqrt(sv / (kBatches - 1) / kBatches));
  }
  t.psi.assign(eta_grid.size(), 0.0);
  // trapezoid with the Euler-Maclaurin end correction from the tabulated psi''
  for (std::size_t g = 1; g < eta_grid.size(); ++g) {
    const double h = eta_grid[g] - eta_grid[g - 1];
    t.psi[g] = t.psi[g - 1] + 0.5 * (t.psi_p[g] + t.psi_p[g - 1]) * h + h * h * (t.psi_pp[g - 1] - t.psi_pp[g]) / 12.0;
  }
  return t;
}

void write_psi_table_csv(std::ostream& os, const PsiTable& t) {
  TableWriter w(os, TableFormat::csv);
  w.header({"eta", "sigma", "psi", "psi_p", "psi_pp", "stderr_psi_p", "stderr_psi_pp", "samples", "seed"});
  for (std::size_t g = 0; g < t.eta.size(); ++g)
    w.row({t.eta[g], t.sigma[g], t.psi[g], t.psi_p[g], t.psi_pp[g], t.stderr_psi_p[g], t.stderr_psi_pp[g],
           static_cast<double>(t.samples), static_cast<double>(t.seed)});
}

PsiTable read_psi_table_csv(std::istream& is, int n) {
  PsiTable t;
  t.n = n;
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("psi table: empty input");
  const auto head = split_csv_line(line);
  const std::vector<std::string> expected = {"eta", "sigma", "psi", "psi_p", "psi_pp",
                                             "stderr_psi_p", "stderr_psi_pp", "samples", "seed"};
  if (head != expected) throw std::invalid_argument("psi table: unexpected header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != expected.size()) throw std::invalid_argument("psi table: bad row");
    std::vector<double> v;
    for (const auto& c : cells) v.push_back(std::stod(c));
    t.eta.push_back(v[0]);
    t.sigma.push_back(v[1]);
    t.psi.push_back(v[2]);
    t.psi_p.push_back(v[3]);
    t.psi_pp.push_back(v[4]);
    t.stderr_psi_p.push_back(v[5]);
    t.stderr_psi_pp.push_back(v[6]);
    t.samples = static_cast<std::uint64_t>(v[7]);
    t.seed = static_cast<std::uint64_t>(v[8]);
  }
  validate_grid(t.eta);
  return t;
}

double MahalanobisCoeffs::checked_beta2_sq() const {
  if (!has_beta2) throw DomainError("beta2 is undefined for n = 1");
  return beta2_sq;
}

struct RGaussModel::Interp {
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  Pchip psi, psi_p, psi_pp;
};

RGaussModel::RGaussModel(PsiTable table) : table_(std::move(table)) {
  if (table_.n < 1) throw std::invalid_argument("RGaussModel: n >= 1");
  validate_grid(table_.eta);
  for (double v : table_.psi_pp)
    if (!(v > 0.0)) throw DomainError("RGaussModel: psi'' must be positive");
  auto make = [&](const std::vector<double>& y) {
    return Interp::Pchip(std::vector<double>(table_.eta), std::vector<double>(y));
  };
  interp_ = std::make_shared<const Interp>(Interp{make(table_.psi), make(table_.psi_p), make(table_.psi_pp)});
}

void RGaussModel::check_eta(double eta) const {
  if (!(eta >= eta_min() && eta <= eta_max())) throw DomainError("eta outside tabulated range");
}

double RGaussModel::psi(double eta) const { check_eta(eta); return interp_->psi(eta); }
double RGaussModel::psi_p(double eta) const { check_eta(eta); return interp_->psi_p(eta); }
double RGaussModel::psi_pp(double eta) const { check_eta(eta); return interp_->psi_pp(eta); }
double RGaussModel::psi_p_prime(double eta) const { check_eta(eta); return interp_->psi_p.prime(eta); }
double RGaussModel::psi_pp_prime(double eta) const { check_eta(eta); return interp_->psi_pp.prime(eta); }
double RGaussModel::psi2_p(double eta) const { return psi_p(eta) + 0.5 / eta; }

MahalanobisCoeffs RGaussModel::coeffs(double eta) const {
  check_eta(eta);
  const int n = table_.n;
  if (n == 1) return {-2.0 * eta, std::numeric_limits<double>::quiet_NaN(), false};
  return {-2.0 * eta, 8.0 * eta * eta * psi2_p(eta) / (n * n + n - 2.0), true};
}

double RGaussModel::fisher_metric(const SpdMatrix& xbar, double eta, double u_eta, const SpdTangent& u) const {
  if (xbar.dim() != table_.n) throw std::invalid_argument("rgauss: dimension mismatch");
  const MahalanobisCoeffs c = coeffs(eta);
  const DeRhamSplit sp = derham_split(xbar, u);
  double out = psi_pp(eta) * u_eta * u_eta + c.beta1_sq * affine_metric(xbar, sp.u1, sp.u1);
  if (table_.n > 1) out += c.checked_beta2_sq() * affine_metric(xbar, sp.u2, sp.u2);
  return out;
}

double RGaussModel::mahalanobis(const SpdMatrix& x, const SpdMatrix& y, double sigma) const {
  if (!(sigma > 0.0)) throw DomainError("mahalanobis: sigma must be positive");
  if (x.dim() != table_.n || y.dim() != table_.n) throw std::invalid_argument("rgauss: dimension mismatch");
  const double eta = -0.5 / (sigma * sigma);
  const MahalanobisCoeffs c = coeffs(eta);
  const int n = table_.n;
  const double dtau = x.log_det() - y.log_det();
  double d2 = c.beta1_sq * dtau * dtau / n;
  if (n > 1) {
    const SpdMatrix sx(std::exp(-x.log_det() / n) * x.matrix());
    const SpdMatrix sy(std::exp(-y.log_det() / n) * y.matrix());
    d2 += c.checked_beta2_sq() * affine_distance_sq(sx, sy);
  }
  return std::sqrt(d2);
}

double RGaussModel::log_density(const SpdMatrix& x, const SpdMatrix& xbar, double sigma) const {
  if (!(sigma > 0.0)) throw DomainError("log_density: sigma must be positive");
  const double eta = -0.5 / (sigma * sigma);
  return -affine_distance_sq(x, xbar) / (2.0 * sigma * sigma) - psi(eta);
}

WarpProfile RGaussModel::profile() const {
  const RGaussModel m = *this;
  const int n = table_.n;
  const double k2 = n * n + n - 2.0;
  WarpProfile p;
  // eta = -1/(2 sigma^2), d eta / d sigma = 1/sigma^3
  p.alpha = [m](double s) { return std::sqrt(m.psi_pp(-0.5 / (s * s))) / (s * s * s); };
  p.dalpha = [m](double s) {
    const double e = -0.5 / (s * s);
    const double q = std::sqrt(m.psi_pp(e));
    return m.psi_pp_prime(e) / (2.0 * q * s * s * s * s * s * s) - 3.0 * q / (s * s * s * s);
  };
  p.betas = {[](double s) { return 1.0 / s; }};
  p.dbetas = {[](double s) { return -1.0 / (s * s); }};
  p.d2betas = {[](double s) { return 2.0 / (s * s * s); }};
  p.block_dims = {1};
  if (n > 1) {
    auto b2 = [m, k2](double s) {
      const double e = -0.5 / (s * s);
      return 2.0 * m.psi2_p(e) / (k2 * s * s * s * s);
    };
    p.betas.push_back([b2](double s) { return std::sqrt(b2(s)); });
    p.dbetas.push_back([m, k2, b2](double s) {
      const double e = -0.5 / (s * s);
      const double psi2_pp = m.psi_p_prime(e) - 0.5 / (e * e);
      const double s4 = s * s * s * s;
      const double db2 = 2.0 / k2 * (psi2_pp / (s4 * s * s * s) - 4.0 * m.psi2_p(e) / (s4 * s));
      return db2 / (2.0 * std::sqrt(b2(s)));
    });
    p.d2betas.push_back(nullptr);
    p.block_dims.push_back(n * (n + 1) / 2 - 1);
  }
  p.base_name = "P_" + std::to_string(n);
  p.sigma_min = table_.sigma.front();
  p.sigma_max = table_.sigma.back();
  p.knots = table_.sigma;
  return p;
}

double generic_mahalanobis(double beta_sigma, double base_distance) {
  if (!(beta_sigma > 0.0) || !(base_distance >= 0.0)) throw DomainError("generic_mahalanobis: bad input");
  return beta_sigma * base_distance;
}

double isonormal_mahalanobis(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("isonormal_mahalanobis: sigma must be positive");
  if (x.size() != y.size()) throw std::invalid_argument("isonormal_mahalanobis: dimension mismatch");
  return (x - y).norm() / sigma;
}

}  // namespace infogeo
