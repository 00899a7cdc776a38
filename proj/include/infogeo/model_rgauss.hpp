#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "infogeo/spd.hpp"
#include "infogeo/warped.hpp"

namespace infogeo {

/// psi(eta) and its first two derivatives on a grid of eta < 0.
struct PsiTable {
  int n = 0;
  std::vector<double> eta;            ///< strictly increasing, all < 0
  std::vector<double> sigma;          ///< sqrt(-1/(2 eta))
  std::vector<double> psi;            ///< 0 at eta.front()
  std::vector<double> psi_p;
  std::vector<double> psi_pp;
  std::vector<double> stderr_psi_p;
  std::vector<double> stderr_psi_pp;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// 40 log-spaced sigma in [0.05, 5], returned as increasing eta.
[[nodiscard]] std::vector<double> default_eta_grid();
[[nodiscard]] std::vector<double> eta_grid_from_sigma(double sigma_min, double sigma_max, int count);

/// Thread count from INFOGEO_THREADS, else hardware concurrency.
[[nodiscard]] int default_thread_count();

/// Self-normalized importance sample of the eigenvalue law at one eta.
struct EigenvalueSample {
  std::vector<Eigen::VectorXd> r;  ///< log-eigenvalues
  std::vector<double> log_w;
};

[[nodiscard]] EigenvalueSample draw_eigenvalue_sample(int n, double eta, std::uint64_t samples, std::uint64_t seed);

/// Monte Carlo psi', psi'' (20 batches, batch-means standard errors). n <= 12.
[[nodiscard]] PsiTable tabulate_psi(int n, const std::vector<double>& eta_grid, std::uint64_t samples,
                                    std::uint64_t seed, int threads = 0);

void write_psi_table_csv(std::ostream& os, const PsiTable& t);
[[nodiscard]] PsiTable read_psi_table_csv(std::istream& is, int n);

struct MahalanobisCoeffs {
  double beta1_sq;  ///< -2 eta = 1/sigma^2
  double beta2_sq;  ///< 8 eta^2 psi_2'/(n^2+n-2); NaN when n = 1
  bool has_beta2;

  [[nodiscard]] double checked_beta2_sq() const;  ///< beta2_sq; throws when n = 1
};

/// Riemannian Gaussian on P_n with a tabulated log normalizer.
class RGaussModel {
public:
  explicit RGaussModel(PsiTable table);

  [[nodiscard]] int n() const { return table_.n; }
  [[nodiscard]] const PsiTable& table() const { return table_; }
  [[nodiscard]] double eta_min() const { return table_.eta.front(); }
  [[nodiscard]] double eta_max() const { return table_.eta.back(); }

  [[nodiscard]] double psi(double eta) const;
  [[nodiscard]] double psi_p(double eta) const;
  [[nodiscard]] double psi_pp(double eta) const;
  [[nodiscard]] double psi_p_prime(double eta) const;   ///< derivative of the psi' interpolant
  [[nodiscard]] double psi_pp_prime(double eta) const;  ///< derivative of the psi'' interpolant
  [[nodiscard]] double psi2_p(double eta) const;        ///< psi' - psi_1', psi_1' = -1/(2 eta)

  [[nodiscard]] MahalanobisCoeffs coeffs(double eta) const;

  [[nodiscard]] double fisher_metric(const SpdMatrix& xbar, double eta, double u_eta, const SpdTangent& u) const;
  [[nodiscard]] double mahalanobis(const SpdMatrix& x, const SpdMatrix& y, double sigma) const;
  /// -d^2(x, xbar)/(2 sigma^2) - psi(eta), up to the table's additive constant.
  [[nodiscard]] double log_density(const SpdMatrix& x, const SpdMatrix& xbar, double sigma) const;

  /// Warp profile in the sigma coordinate: blocks (trace, trace-free), or trace only for n = 1.
  [[nodiscard]] WarpProfile profile() const;

private:
  void check_eta(double eta) const;
  struct Interp;
  PsiTable table_;
  std::shared_ptr<const Interp> interp_;
};

/// beta(sigma) * d(xbar, ybar).
[[nodiscard]] double generic_mahalanobis(double beta_sigma, double base_distance);

/// ||x - y|| / sigma.
[[nodiscard]] double isonormal_mahalanobis(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double sigma);

}  // namespace infogeo
