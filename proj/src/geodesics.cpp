#include "infogeo/geodesics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "infogeo/specfun.hpp"

namespace infogeo {

namespace {

constexpr double kEscapeLow = 1e-8;
constexpr double kEscapeHigh = 1e8;
constexpr double kOriginHandoff = 1e-6;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using State = std::vector<double>;

std::vector<std::string> indexed_columns(const std::string& stem, long count) {
  std::vector<std::string> out;
  for (long i = 0; i < count; ++i) out.push_back(stem + std::to_string(i + 1));
  return out;
}

double lower_bound(const WarpProfile& p) { return std::max(p.sigma_min, kEscapeLow); }
double upper_bound(const WarpProfile& p) { return std::min(p.sigma_max, kEscapeHigh); }

double gk(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-11);
}

}  // namespace

BasePoint BaseFlow::through_origin(const BasePoint&) const {
  throw std::logic_error("base manifold has no origin continuation");
}

// ---- sphere -----------------------------------------------------------------

SphereFlow::SphereFlow(const Eigen::VectorXd& x0, const Eigen::VectorXd& u) {
  if (x0.size() != u.size()) throw std::invalid_argument("SphereFlow: dimension mismatch");
  if (std::abs(x0.norm() - 1.0) > 1e-10) throw DomainError("SphereFlow: start point must be a unit vector");
  x0_ = x0;
  const Eigen::VectorXd t = u - u.dot(x0) * x0;
  speed_ = t.norm();
  dir_ = speed_ > 0.0 ? Eigen::VectorXd(t / speed_) : Eigen::VectorXd::Zero(x0.size());
}

std::vector<double> SphereFlow::block_norms() const { return {speed_ * speed_}; }

BasePoint SphereFlow::point(const std::vector<double>& s) const {
  const double th = s[0] * speed_;
  return std::cos(th) * x0_ + std::sin(th) * dir_;
}

BasePoint SphereFlow::velocity(const std::vector<double>& s, const std::vector<double>& sdot) const {
  const double th = s[0] * speed_;
  return sdot[0] * speed_ * (-std::sin(th) * x0_ + std::cos(th) * dir_);
}

std::vector<double> SphereFlow::block_norms_at(const BasePoint& x, const BasePoint& v) const {
  const Eigen::VectorXd xv = x.col(0), vv = v.col(0);
  return {(vv - vv.dot(xv) * xv).squaredNorm()};
}

double SphereFlow::distance(const BasePoint& a, const BasePoint& b) const {
  return 2.0 * std::asin(std::min(1.0, 0.5 * (a - b).norm()));
}

std::unique_ptr<BaseFlow> SphereFlow::restart(const BasePoint& x, const BasePoint& v) const {
  return std::make_unique<SphereFlow>(x.col(0), v.col(0));
}

std::vector<std::string> SphereFlow::columns() const { return indexed_columns("x", x0_.size()); }

std::vector<double> SphereFlow::flatten(const BasePoint& x) const {
  return std::vector<double>(x.data(), x.data() + x.size());
}

// ---- Euclidean --------------------------------------------------------------

EuclideanFlow::EuclideanFlow(const Eigen::VectorXd& x0, const Eigen::VectorXd& u) : x0_(x0), u_(u) {
  if (x0.size() != u.size()) throw std::invalid_argument("EuclideanFlow: dimension mismatch");
}

BasePoint EuclideanFlow::point(const std::vector<double>& s) const { return x0_ + s[0] * u_; }

BasePoint EuclideanFlow::velocity(const std::vector<double>&, const std::vector<double>& sdot) const {
  return sdot[0] * u_;
}

std::vector<double> EuclideanFlow::block_norms_at(const BasePoint&, const BasePoint& v) const {
  return {v.squaredNorm()};
}

std::unique_ptr<BaseFlow> EuclideanFlow::restart(const BasePoint& x, const BasePoint& v) const {
  return std::make_unique<EuclideanFlow>(x.col(0), v.col(0));
}

std::vector<std::string> EuclideanFlow::columns() const { return indexed_columns("x", x0_.size()); }

std::vector<double> EuclideanFlow::flatten(const BasePoint& x) const {
  return std::vector<double>(x.data(), x.data() + x.size());
}

// ---- SPD --------------------------------------------------------------------

SpdFlow::SpdFlow(const SpdMatrix& x0, const SpdTangent& u) : n_(x0.dim()), x0_(x0), u_(u) {
  const DeRhamSplit sp = derham_split(x0, u);
  root_ = x0.sqrt();
  c_ = (x0.inverse() * u).trace() / n_;
  const Eigen::MatrixXd w = x0.inv_sqrt();
  w_ = w * sp.u2 * w;
  w_ = 0.5 * (w_ + w_.transpose());
}

std::vector<double> SpdFlow::block_norms() const {
  const DeRhamSplit sp = derham_split(x0_, u_);
  if (n_ == 1) return {affine_metric(x0_, sp.u1, sp.u1)};
  return {affine_metric(x0_, sp.u1, sp.u1), affine_metric(x0_, sp.u2, sp.u2)};
}

BasePoint SpdFlow::point(const std::vector<double>& s) const {
  if (n_ == 1) return std::exp(s[0] * c_) * x0_.matrix();
  const Eigen::MatrixXd e = symmetric_function(s[1] * w_, [](double l) { return std::exp(l); });
  const Eigen::MatrixXd m = std::exp(s[0] * c_) * root_ * e * root_;
  return 0.5 * (m + m.transpose());
}

BasePoint SpdFlow::velocity(const std::vector<double>& s, const std::vector<double>& sdot) const {
  if (n_ == 1) return sdot[0] * c_ * std::exp(s[0] * c_) * x0_.matrix();
  const Eigen::MatrixXd e = symmetric_function(s[1] * w_, [](double l) { return std::exp(l); });
  const Eigen::MatrixXd inner = sdot[0] * c_ * e + sdot[1] * w_ * e;
  const Eigen::MatrixXd m = std::exp(s[0] * c_) * root_ * inner * root_;
  return 0.5 * (m + m.transpose());
}

std::vector<double> SpdFlow::block_norms_at(const BasePoint& x, const BasePoint& v) const {
  const SpdMatrix xs(x);
  const DeRhamSplit sp = derham_split(xs, v);
  if (n_ == 1) return {affine_metric(xs, sp.u1, sp.u1)};
  return {affine_metric(xs, sp.u1, sp.u1), affine_metric(xs, sp.u2, sp.u2)};
}

double SpdFlow::distance(const BasePoint& a, const BasePoint& b) const {
  return affine_distance(SpdMatrix(a), SpdMatrix(b));
}

std::unique_ptr<BaseFlow> SpdFlow::restart(const BasePoint& x, const BasePoint& v) const {
  return std::make_unique<SpdFlow>(SpdMatrix(x), v);
}

std::vector<std::string> SpdFlow::columns() const {
  std::vector<std::string> out;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out.push_back("x" + std::to_string(i + 1) + std::to_string(j + 1));
  return out;
}

std::vector<double> SpdFlow::flatten(const BasePoint& x) const {
  std::vector<double> out;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out.push_back(x(i, j));
  return out;
}

// ---- problem-level quantities -----------------------------------------------

ConservedQuantities conserved_quantities(const GeodesicProblem& p) {
  if (!p.base) throw std::invalid_argument("geodesic problem: missing base flow");
  p.profile.validate();
  if (p.base->blocks() != p.profile.blocks()) throw std::invalid_argument("geodesic problem: block count mismatch");
  const std::vector<double> q = p.base->block_norms();
  ConservedQuantities out{};
  const double a = p.profile.alpha(p.sigma0);
  out.energy = a * a * p.u_sigma * p.u_sigma;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double b2 = std::pow(p.profile.betas[i](p.sigma0), 2);
    out.energy += b2 * q[i];
    out.c.push_back(b2 * b2 * q[i]);
  }
  return out;
}

double potential(const GeodesicProblem& p, const std::vector<double>& c, double sigma) {
  double v = 0.0;
  for (std::size_t q = 0; q < c.size(); ++q) {
    if (c[q] == 0.0) continue;
    const double b = p.profile.betas[q](sigma);
    v += c[q] / (b * b);
  }
  return v;
}

VerticalCoordinate::VerticalCoordinate(WarpProfile profile, double sigma_ref)
    : profile_(std::move(profile)), sigma_ref_(sigma_ref) {
  if (sigma_ref < 0.0 || (sigma_ref == 0.0 && profile_.sigma_min > 0.0))
    throw DomainError("VerticalCoordinate: reference outside profile domain");
}

double VerticalCoordinate::r(double sigma) const {
  if (sigma_ref_ > 0.0) return vertical_distance(profile_, sigma_ref_, sigma);
  if (sigma < 0.0) throw DomainError("VerticalCoordinate: negative sigma");
  const double knee = std::min(sigma, 1.0);
  double out = sigma > 0.0 ? gk(profile_.alpha, 0.0, knee) : 0.0;
  if (sigma > 1.0) out += vertical_distance(profile_, 1.0, sigma);
  return out;
}

double VerticalCoordinate::sigma(double target) const {
  double lo, hi;
  if (sigma_ref_ == 0.0) {
    if (target < 0.0) throw DomainError("VerticalCoordinate: negative r");
    lo = 0.0;
    hi = 1.0;
    while (r(hi) < target) {
      hi *= 2.0;
      if (hi > upper_bound(profile_)) throw DomainError("VerticalCoordinate: r beyond domain");
    }
  } else {
    lo = hi = sigma_ref_;
    while (r(lo) > target) {
      lo *= 0.5;
      if (lo < lower_bound(profile_)) throw DomainError("VerticalCoordinate: r beyond domain");
    }
    while (r(hi) < target) {
      hi *= 2.0;
      if (hi > upper_bound(profile_)) throw DomainError("VerticalCoordinate: r beyond domain");
    }
  }
  // Newton on r(sigma) = target with dr/dsigma = alpha, kept inside the bracket
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double f = r(x) - target;
    if (f == 0.0) return x;
    (f < 0.0 ? lo : hi) = x;
    const double a = profile_.alpha(x);
    double next = x - f / a;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * x) return next;
    x = next;
  }
  return x;
}

// ---- ODE --------------------------------------------------------------------

namespace {

struct OutOfDomain {};

// First knot strictly between a and b, seen from a; NaN when the step stays on one smooth piece.
double crossed_knot(const std::vector<double>& knots, double a, double b) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  double best = kNaN;
  for (double k : knots) {
    if (!(k > lo && k < hi) || std::abs(k - a) <= 1e-10 * k) continue;
    if (std::isnan(best) || std::abs(k - a) < std::abs(best - a)) best = k;
  }
  return best;
}

struct Rhs {
  const GeodesicProblem* p;
  std::vector<double> c;
  std::vector<double> b0sq;  // beta_q^2(sigma0)

  void operator()(const State& y, State& dy, double) const {
    const double s = y[0], sd = y[1];
    const WarpProfile& w = p->profile;
    if (!(s >= lower_bound(w) && s <= upper_bound(w))) throw OutOfDomain{};
    try {
      const double a = w.alpha(s);
      const double da = w.dalpha_at(s);
      double rdd = 0.0;
      for (std::size_t q = 0; q < c.size(); ++q) {
        const double b = w.betas[q](s);
        if (c[q] != 0.0) rdd += c[q] * w.dbeta_at(q, s) / (b * b * b);
        dy[2 + q] = b0sq[q] / (b * b);
      }
      rdd /= a;
      dy[0] = sd;
      dy[1] = (rdd - da * sd * sd) / a;
    } catch (const DomainError&) {
      throw OutOfDomain{};
    }
  }
};

}  // namespace

GeodesicPath solve_geodesic(const GeodesicProblem& p, double t_end, int steps) {
  namespace ode = boost::numeric::odeint;
  if (!(t_end > 0.0) || steps < 1) throw std::invalid_argument("solve_geodesic: need t_end > 0 and steps >= 1");
  const ConservedQuantities cq = conserved_quantities(p);
  const WarpProfile& w = p.profile;
  const std::size_t nb = w.blocks();
  if (!(p.sigma0 >= lower_bound(w) && p.sigma0 <= upper_bound(w)))
    throw DomainError("solve_geodesic: sigma0 outside profile domain");

  Rhs rhs{&p, cq.c, {}};
  for (std::size_t q = 0; q < nb; ++q) rhs.b0sq.push_back(std::pow(w.betas[q](p.sigma0), 2));
  const bool vertical = std::all_of(cq.c.begin(), cq.c.end(), [](double v) { return v == 0.0; });
  const VerticalCoordinate vc(w, p.origin_passthrough ? 0.0 : p.sigma0);

  GeodesicPath path;
  path.energy = cq.energy;
  path.c = cq.c;
  path.c_drift.assign(nb, 0.0);
  path.base_columns = p.base->columns();

  auto record = [&](double t, double sigma, double sdot, const std::vector<double>& s, const BasePoint* override_x) {
    PathSample ps;
    ps.t = t;
    ps.sigma = sigma;
    ps.sigma_dot = sdot;
    ps.r = vc.r(sigma);
    ps.s = s;
    std::vector<double> srate(nb);
    for (std::size_t q = 0; q < nb; ++q) srate[q] = rhs.b0sq[q] / std::pow(w.betas[q](sigma), 2);
    ps.x = override_x ? *override_x : p.base->point(s);
    ps.x_dot = override_x ? BasePoint(BasePoint::Zero(ps.x.rows(), ps.x.cols())) : p.base->velocity(s, srate);
    const std::vector<double> qn = p.base->block_norms_at(ps.x, ps.x_dot);
    const double rd = w.alpha(sigma) * sdot;
    double e = rd * rd;
    for (std::size_t q = 0; q < nb; ++q) {
      const double b2 = std::pow(w.betas[q](sigma), 2);
      e += b2 * qn[q];
      const double cnow = b2 * b2 * qn[q];
      const double scale = std::max(cq.c[q], 1e-12 * cq.energy);
      path.c_drift[q] = std::max(path.c_drift[q], scale > 0.0 ? std::abs(cnow - cq.c[q]) / scale : 0.0);
    }
    if (cq.energy > 0.0) path.energy_drift = std::max(path.energy_drift, std::abs(e - cq.energy) / cq.energy);
    path.samples.push_back(std::move(ps));
  };

  State y(2 + nb, 0.0);
  y[0] = p.sigma0;
  y[1] = p.u_sigma;
  record(0.0, y[0], y[1], std::vector<double>(nb, 0.0), nullptr);
  if (cq.energy == 0.0) {
    for (int k = 1; k <= steps; ++k) record(t_end * k / steps, y[0], y[1], std::vector<double>(nb, 0.0), nullptr);
    return path;
  }

  auto stepper = ode::make_controlled(1e-12, 1e-10, ode::runge_kutta_dopri5<State>());
  double t = 0.0;
  double dt = 1e-3 * t_end;
  const double dt_min = 1e-14 * t_end;

  for (int k = 1; k <= steps; ++k) {
    const double target = t_end * k / steps;
    int redo = 0;
    while (t < target) {
      double h = std::min(dt, target - t);
      const bool clipped = h < dt;
      const State y_prev = y;
      const double t_prev = t;
      ode::controlled_step_result res;
      try {
        res = stepper.try_step(rhs, y, t, h);
      } catch (const OutOfDomain&) {
        y = y_prev;
        t = t_prev;
        stepper.reset();
        dt *= 0.25;
        if (dt < dt_min) {
          path.status = PathStatus::escaped;
          path.message = "geodesic leaves the profile domain near t = " + std::to_string(t);
          return path;
        }
        continue;
      }
      if (res == ode::fail) {
        dt = h;
        if (dt < dt_min) throw std::runtime_error("solve_geodesic: step size underflow");
        continue;
      }
      if (!clipped || h > dt) dt = h;
      // Redo a step that jumped over a knot so that it ends on it; each step then sees a smooth rhs.
      if (const double knot = crossed_knot(w.knots, y_prev[0], y[0]); !std::isnan(knot) && redo < 8) {
        const double used = t - t_prev;
        const double frac = (knot - y_prev[0]) / (y[0] - y_prev[0]);
        y = y_prev;
        t = t_prev;
        stepper.reset();  // drop the cached end-of-step derivative
        dt = std::max(frac * used, dt_min);
        ++redo;
        continue;
      }
      redo = 0;
      if (std::abs(target - t) < 1e-14 * t_end) t = target;

      const double s = y[0];
      const double rd = w.alpha(s) * y[1];
      const double e = rd * rd + potential(p, cq.c, s);
      path.step_energy_residual = std::max(path.step_energy_residual, std::abs(e - cq.energy) / cq.energy);

      if (s < kEscapeLow || s > kEscapeHigh) {
        path.status = PathStatus::escaped;
        path.message = "sigma left [1e-8, 1e8] at t = " + std::to_string(t);
        return path;
      }
      if (p.origin_passthrough && s < kOriginHandoff) {
        if (!vertical) {
          path.status = PathStatus::origin;
          path.message = "non-vertical geodesic reached the origin at t = " + std::to_string(t);
          return path;
        }
        // Straight line through z = 0: r(t) continues affinely with reflected base point.
        const double rdot = rd;
        const double r_now = vc.r(s);
        const std::vector<double> sb(y.begin() + 2, y.end());
        const BasePoint x_now = p.base->point(sb);
        const BasePoint x_far = p.base->through_origin(x_now);
        for (int j = k; j <= steps; ++j) {
          const double tj = t_end * j / steps;
          const double rj = r_now + rdot * (tj - t);
          const double sj = vc.sigma(std::abs(rj));
          const double sdj = std::abs(rdot) / w.alpha(sj) * (rj >= 0.0 ? -1.0 : 1.0);
          record(tj, sj, sdj, sb, rj >= 0.0 ? &x_now : &x_far);
        }
        return path;
      }
    }
    record(t, y[0], y[1], std::vector<double>(y.begin() + 2, y.end()), nullptr);
  }
  return path;
}

GeodesicProblem reversed_problem(const GeodesicProblem& p, const GeodesicPath& path) {
  if (path.samples.empty()) throw std::invalid_argument("reversed_problem: empty path");
  const PathSample& end = path.samples.back();
  GeodesicProblem out;
  out.profile = p.profile;
  out.sigma0 = end.sigma;
  out.u_sigma = -end.sigma_dot;
  out.base = p.base->restart(end.x, -end.x_dot);
  out.origin_passthrough = p.origin_passthrough;
  return out;
}

// ---- time of flight ---------------------------------------------------------

namespace {

// Slope of log f against log sigma on [lo, hi].
double tail_slope(const std::function<double(double)>& f, double lo, double hi) {
  const int m = 11;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    const double x = std::log(lo) + (std::log(hi) - std::log(lo)) * i / (m - 1);
    const double y = std::log(f(std::exp(x)));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

TimeOfFlight time_of_flight(const GeodesicProblem& p, double sigma_target, bool after_turning) {
  const ConservedQuantities cq = conserved_quantities(p);
  const WarpProfile& w = p.profile;
  const double e = cq.energy;
  const double s0 = p.sigma0;
  auto g = [&](double s) { return e - potential(p, cq.c, s); };
  auto integrand = [&](double s) { return w.alpha(s) / std::sqrt(g(s)); };
  const double lo_dom = p.origin_passthrough ? 0.0 : lower_bound(w);
  const double hi_dom = upper_bound(w);

  double dir = p.u_sigma > 0.0 ? 1.0 : (p.u_sigma < 0.0 ? -1.0 : 0.0);
  if (dir == 0.0) throw std::invalid_argument("time_of_flight: u_sigma must be nonzero");

  // Turning point ahead, if any: first sign change of g along the direction of motion.
  double tp = kNaN;
  {
    double prev = s0;
    for (int i = 1; i < 4000; ++i) {
      double next = dir > 0.0 ? prev * 1.02 : prev / 1.02;
      if (next > hi_dom || next < std::max(lo_dom, kEscapeLow)) break;
      if (g(next) <= 0.0) {
        double a = prev, b = next;
        for (int it = 0; it < 200 && std::abs(b - a) > 1e-16 * std::abs(b); ++it) {
          const double mid = 0.5 * (a + b);
          (g(mid) > 0.0 ? a : b) = mid;
        }
        tp = a;
        break;
      }
      prev = next;
    }
  }

  // Integral from a to the turning point, with sigma = tp - side * v^2.
  auto to_turning = [&](double a) {
    const double side = tp > a ? 1.0 : -1.0;
    const double len = std::sqrt(std::abs(tp - a));
    const double h = 1e-6 * std::max(std::abs(tp), 1e-300);
    const double slope = std::abs(potential(p, cq.c, tp + h) - potential(p, cq.c, tp - h)) / (2.0 * h);
    auto f = [&](double v) {
      const double s = tp - side * v * v;
      const double gv = g(s);
      if (!(gv > 0.0)) return 2.0 * w.alpha(tp) / std::sqrt(slope);
      return 2.0 * v * w.alpha(s) / std::sqrt(gv);
    };
    return gk(f, 0.0, len);
  };
  auto plain = [&](double a, double b) {
    if (a > b) std::swap(a, b);
    if (a == b) return 0.0;
    if (a > 0.0) return gk([&](double u) { const double s = std::exp(u); return s * integrand(s); }, std::log(a), std::log(b));
    return gk(integrand, a, b);
  };

  if (after_turning) {
    if (std::isnan(tp)) throw DomainError("time_of_flight: no turning point ahead");
    if ((sigma_target - tp) * dir > 0.0 || !(g(sigma_target) > 0.0))
      throw DomainError("time_of_flight: target beyond the turning point");
    return {to_turning(s0) + to_turning(sigma_target), false, tp};
  }

  const bool boundary = sigma_target == 0.0 || std::isinf(sigma_target);
  if ((sigma_target - s0) * dir < 0.0) throw DomainError("time_of_flight: target behind the initial direction");
  if (!std::isnan(tp) && (sigma_target - tp) * dir > 0.0)
    throw DomainError("time_of_flight: target beyond the turning point");

  if (boundary) {
    if (dir > 0.0) {
      const double slope = tail_slope(integrand, 0.1 * hi_dom, hi_dom);
      if (slope >= -1.05) return {std::numeric_limits<double>::infinity(), true, kNaN};
      return {plain(s0, hi_dom), false, kNaN};
    }
    if (lo_dom == 0.0) {
      const double slope = tail_slope(integrand, 1e-8, 1e-7);
      if (slope <= -0.95) return {std::numeric_limits<double>::infinity(), true, kNaN};
      return {plain(0.0, std::min(s0, 1.0)) + (s0 > 1.0 ? plain(1.0, s0) : 0.0), false, kNaN};
    }
    const double slope = tail_slope(integrand, lo_dom, 10.0 * lo_dom);
    if (slope <= -0.95) return {std::numeric_limits<double>::infinity(), true, kNaN};
    return {plain(lo_dom, s0), false, kNaN};
  }
  if (!std::isnan(tp) && sigma_target == tp) return {to_turning(s0), false, tp};
  return {plain(s0, sigma_target), false, kNaN};
}

// ---- model factories --------------------------------------------------------

GeodesicProblem vmf_geodesic_problem(const VmfModel& m, const Eigen::VectorXd& z, const Eigen::VectorXd& u) {
  if (z.size() != m.n() || u.size() != m.n()) throw std::invalid_argument("vmf geodesic: dimension mismatch");
  const double eta = z.norm();
  if (!(eta > 0.0)) throw DomainError("vmf geodesic: start point must differ from the origin");
  const Eigen::VectorXd xbar = z / eta;
  const double u_eta = u.dot(xbar);
  GeodesicProblem p;
  p.profile = m.profile();
  p.sigma0 = eta;
  p.u_sigma = u_eta;
  p.base = std::make_shared<SphereFlow>(xbar, (u - u_eta * xbar) / eta);
  p.origin_passthrough = true;
  return p;
}

GeodesicProblem rgauss_geodesic_problem(const RGaussModel& m, const SpdMatrix& xbar, double sigma, double u_sigma,
                                        const SpdTangent& u) {
  if (xbar.dim() != m.n()) throw std::invalid_argument("rgauss geodesic: dimension mismatch");
  GeodesicProblem p;
  p.profile = m.profile();
  p.sigma0 = sigma;
  p.u_sigma = u_sigma;
  p.base = std::make_shared<SpdFlow>(xbar, u);
  return p;
}

GeodesicProblem isonormal_geodesic_problem(const Eigen::VectorXd& x0, double sigma, double u_sigma,
                                           const Eigen::VectorXd& u) {
  GeodesicProblem p;
  p.profile = isotropic_normal_profile(static_cast<int>(x0.size()));
  p.sigma0 = sigma;
  p.u_sigma = u_sigma;
  p.base = std::make_shared<EuclideanFlow>(x0, u);
  return p;
}

}  // namespace infogeo
