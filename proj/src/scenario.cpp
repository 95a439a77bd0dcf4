#include "cbdrs/scenario.hpp"

#include <algorithm>

namespace cbdrs {

namespace {

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

Heading::Heading(double psi) {
  if (!std::isfinite(psi)) throw std::invalid_argument("heading must be finite");
  double r = std::remainder(psi, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  psi_ = r;
}

Scenario::Scenario(double a, double v_i, double v_d, double capture_eps)
    : a_(a), v_i_(v_i), v_d_(v_d) {
  if (!finite_positive(a)) throw std::invalid_argument("scenario: a must be > 0");
  if (!std::isfinite(v_i) || v_i < 0.0) throw std::invalid_argument("scenario: v_i must be >= 0");
  if (!finite_positive(v_d)) throw std::invalid_argument("scenario: v_d must be > 0");
  if (v_d < v_i) {
    throw std::invalid_argument("scenario: v_d must be >= v_i (constant bearing undefined otherwise)");
  }
  capture_eps_ = capture_eps < 0.0 ? 1e-6 * a : capture_eps;
  if (!finite_positive(capture_eps_)) throw std::invalid_argument("scenario: capture_eps must be > 0");
  eps_geom_ = 1e-9 * std::max(1.0, a);
  min_horizontal_speed_ = std::sqrt((v_d - v_i) * (v_d + v_i));
}

Heading constant_bearing_heading(Heading psi_i, const Scenario& s) {
  double arg = s.v_i() / s.v_d() * std::sin(psi_i.rad());
  if (std::abs(arg) > 1.0 + 1e-12) throw DomainError("constant bearing: arcsine argument out of range");
  arg = std::clamp(arg, -1.0, 1.0);
  return Heading(std::asin(arg));
}

Vec2 dependent_velocity(Heading psi_i, const Scenario& s) {
  const double psi_d = constant_bearing_heading(psi_i, s).rad();
  return {s.v_d() * std::cos(psi_d), s.v_d() * std::sin(psi_d)};
}

double closing_speed(Heading psi_i, const Scenario& s) {
  return dependent_velocity(psi_i, s).x - s.v_i() * std::cos(psi_i.rad());
}

Thresholds thresholds(const Scenario& s) {
  Thresholds th;
  th.t1 = s.a() / s.v_d();
  th.t2 = s.equal_speed() ? kInfinity : s.a() / s.min_horizontal_speed();
  th.tc = s.equal_speed() ? kInfinity : s.a() / (s.v_d() - s.v_i());
  return th;
}

Circle apollonius_circle(const Scenario& s) {
  if (s.equal_speed()) throw DomainError("Apollonius circle undefined (degenerates to a line)");
  const double denom = (s.v_d() - s.v_i()) * (s.v_d() + s.v_i());
  return Circle({s.a() * s.v_d() * s.v_d() / denom, 0.0}, s.a() * s.v_d() * s.v_i() / denom);
}

double proof_control_dependent_x(Heading theta, double t_s, double t, const Scenario& s) {
  if (!(t_s >= 0.0) || t_s > t) throw std::invalid_argument("proof control: require 0 <= t_s <= t");
  const double sin_th = std::sin(theta.rad());
  const double first = std::sqrt(std::max(0.0, s.v_d() * s.v_d() - s.v_i() * s.v_i() * sin_th * sin_th));
  return t_s * first + (t - t_s) * s.min_horizontal_speed();
}

double proof_control_capture_time(Heading theta, double t_s, const Scenario& s) {
  if (s.equal_speed()) throw DomainError("proof control capture time requires v_d > v_i");
  if (!(t_s >= 0.0)) throw std::invalid_argument("proof control: t_s must be >= 0");
  const double w = s.min_horizontal_speed();
  const double sin_th = std::sin(theta.rad());
  const double first = std::sqrt(std::max(0.0, s.v_d() * s.v_d() - s.v_i() * s.v_i() * sin_th * sin_th));
  return s.a() / w + t_s / w * (s.v_i() * std::cos(theta.rad()) + w - first);
}

}  // namespace cbdrs
