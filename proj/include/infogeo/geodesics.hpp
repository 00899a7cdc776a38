#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "infogeo/model_rgauss.hpp"
#include "infogeo/model_vmf.hpp"
#include "infogeo/spd.hpp"
#include "infogeo/warped.hpp"

namespace infogeo {

using BasePoint = Eigen::MatrixXd;

/// Base-manifold side of a warped geodesic: x(s) = exp_x0(sum_q s_q u_q).
class BaseFlow {
public:
  virtual ~BaseFlow() = default;

  [[nodiscard]] virtual std::size_t blocks() const = 0;
  /// Q(u_q, u_q) at the start point.
  [[nodiscard]] virtual std::vector<double> block_norms() const = 0;
  [[nodiscard]] virtual BasePoint point(const std::vector<double>& s) const = 0;
  /// d/dt point(s(t)) given s and ds/dt.
  [[nodiscard]] virtual BasePoint velocity(const std::vector<double>& s, const std::vector<double>& sdot) const = 0;
  /// Q(v_q, v_q) for a tangent v at x, split independently at x.
  [[nodiscard]] virtual std::vector<double> block_norms_at(const BasePoint& x, const BasePoint& v) const = 0;
  [[nodiscard]] virtual double distance(const BasePoint& a, const BasePoint& b) const = 0;
  /// Same manifold, new start point and tangent.
  [[nodiscard]] virtual std::unique_ptr<BaseFlow> restart(const BasePoint& x, const BasePoint& v) const = 0;
  [[nodiscard]] virtual std::vector<std::string> columns() const = 0;
  [[nodiscard]] virtual std::vector<double> flatten(const BasePoint& x) const = 0;
  /// Point reached after passing through the cone tip (vMF origin); unsupported by default.
  [[nodiscard]] virtual BasePoint through_origin(const BasePoint& x) const;
};

/// Unit sphere S^{n-1}, one block.
class SphereFlow final : public BaseFlow {
public:
  SphereFlow(const Eigen::VectorXd& x0, const Eigen::VectorXd& u);
  std::size_t blocks() const override { return 1; }
  std::vector<double> block_norms() const override;
  BasePoint point(const std::vector<double>& s) const override;
  BasePoint velocity(const std::vector<double>& s, const std::vector<double>& sdot) const override;
  std::vector<double> block_norms_at(const BasePoint& x, const BasePoint& v) const override;
  double distance(const BasePoint& a, const BasePoint& b) const override;
  std::unique_ptr<BaseFlow> restart(const BasePoint& x, const BasePoint& v) const override;
  std::vector<std::string> columns() const override;
  std::vector<double> flatten(const BasePoint& x) const override;
  BasePoint through_origin(const BasePoint& x) const override { return -x; }

private:
  Eigen::VectorXd x0_, dir_;
  double speed_;
};

/// Euclidean R^d, one block.
class EuclideanFlow final : public BaseFlow {
public:
  EuclideanFlow(const Eigen::VectorXd& x0, const Eigen::VectorXd& u);
  std::size_t blocks() const override { return 1; }
  std::vector<double> block_norms() const override { return {u_.squaredNorm()}; }
  BasePoint point(const std::vector<double>& s) const override;
  BasePoint velocity(const std::vector<double>& s, const std::vector<double>& sdot) const override;
  std::vector<double> block_norms_at(const BasePoint& x, const BasePoint& v) const override;
  double distance(const BasePoint& a, const BasePoint& b) const override { return (a - b).norm(); }
  std::unique_ptr<BaseFlow> restart(const BasePoint& x, const BasePoint& v) const override;
  std::vector<std::string> columns() const override;
  std::vector<double> flatten(const BasePoint& x) const override;

private:
  Eigen::VectorXd x0_, u_;
};

/// P_n with the trace / trace-free blocks (trace only when n = 1).
class SpdFlow final : public BaseFlow {
public:
  SpdFlow(const SpdMatrix& x0, const SpdTangent& u);
  std::size_t blocks() const override { return n_ > 1 ? 2 : 1; }
  std::vector<double> block_norms() const override;
  BasePoint point(const std::vector<double>& s) const override;
  BasePoint velocity(const std::vector<double>& s, const std::vector<double>& sdot) const override;
  std::vector<double> block_norms_at(const BasePoint& x, const BasePoint& v) const override;
  double distance(const BasePoint& a, const BasePoint& b) const override;
  std::unique_ptr<BaseFlow> restart(const BasePoint& x, const BasePoint& v) const override;
  std::vector<std::string> columns() const override;
  std::vector<double> flatten(const BasePoint& x) const override;

private:
  int n_;
  SpdMatrix x0_;
  SpdTangent u_;
  Eigen::MatrixXd root_;  // x0^{1/2}
  double c_;              // u1 = c x0
  Eigen::MatrixXd w_;     // x0^{-1/2} u2 x0^{-1/2}
};

struct GeodesicProblem {
  WarpProfile profile;
  double sigma0 = 1.0;
  double u_sigma = 0.0;
  std::shared_ptr<const BaseFlow> base;
  /// Vertical geodesics may cross sigma = 0 as a straight line (vMF chart).
  bool origin_passthrough = false;
};

struct ConservedQuantities {
  double energy;
  std::vector<double> c;
};

[[nodiscard]] ConservedQuantities conserved_quantities(const GeodesicProblem& p);

/// V(sigma) = sum_q C_q / beta_q^2(sigma).
[[nodiscard]] double potential(const GeodesicProblem& p, const std::vector<double>& c, double sigma);

/// r(sigma) - r(sigma_ref) with inverse by bisection; sigma_ref may be 0 for profiles regular there.
class VerticalCoordinate {
public:
  VerticalCoordinate(WarpProfile profile, double sigma_ref);
  [[nodiscard]] double r(double sigma) const;
  [[nodiscard]] double sigma(double r) const;

private:
  WarpProfile profile_;
  double sigma_ref_;
};

struct PathSample {
  double t;
  double sigma;
  double sigma_dot;
  double r;
  BasePoint x;
  BasePoint x_dot;
  std::vector<double> s;  ///< accumulated block time integrals
};

enum class PathStatus { completed, escaped, origin };

struct GeodesicPath {
  std::vector<PathSample> samples;
  double energy = 0.0;
  std::vector<double> c;
  double energy_drift = 0.0;           ///< max relative deviation of E recomputed from (r dot, block speeds)
  std::vector<double> c_drift;         ///< same for each C_q
  double step_energy_residual = 0.0;   ///< max over accepted steps of |r dot^2 + V - E| / E
  PathStatus status = PathStatus::completed;
  std::string message;
  std::vector<std::string> base_columns;
};

/// Adaptive Dormand-Prince integration in sigma; outputs at t = k t_end / steps.
[[nodiscard]] GeodesicPath solve_geodesic(const GeodesicProblem& p, double t_end, int steps);

/// Problem starting at the path's last sample with reversed velocity.
[[nodiscard]] GeodesicProblem reversed_problem(const GeodesicProblem& p, const GeodesicPath& path);

struct TimeOfFlight {
  double time;
  bool divergent;
  double turning_point;  ///< NaN when none was used
};

/// int alpha / sqrt(E - V) from sigma0 to sigma_target (0 or +inf for the boundary times).
/// With after_turning, the path first reaches the turning point ahead and comes back.
[[nodiscard]] TimeOfFlight time_of_flight(const GeodesicProblem& p, double sigma_target, bool after_turning = false);

[[nodiscard]] GeodesicProblem vmf_geodesic_problem(const VmfModel& m, const Eigen::VectorXd& z, const Eigen::VectorXd& u);
[[nodiscard]] GeodesicProblem rgauss_geodesic_problem(const RGaussModel& m, const SpdMatrix& xbar, double sigma,
                                                      double u_sigma, const SpdTangent& u);
[[nodiscard]] GeodesicProblem isonormal_geodesic_problem(const Eigen::VectorXd& x0, double sigma, double u_sigma,
                                                         const Eigen::VectorXd& u);

}  // namespace infogeo
