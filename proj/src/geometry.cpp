#include "fbms/geometry.hpp"

#include <stdexcept>
#include <string>

namespace fbms {

namespace {

double catenoid_residual(double t) { return t * std::tanh(t) - 1.0; }

double simpson(int intervals, double lo, double hi, auto&& f) {
  const double h = (hi - lo) / intervals;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) {
    sum += (i % 2 == 1 ? 4.0 : 2.0) * f(lo + i * h);
  }
  return sum * h / 3.0;
}

}  // namespace

CatenoidConstants solve_catenoid_constants(double tolerance) {
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("solve_catenoid_constants: tolerance must be positive");
  }
  double lo = 1.0;
  double hi = 1.5;
  double mid = 0.5 * (lo + hi);
  // f is increasing on the bracket; 200 halvings exhaust double precision.
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double f = catenoid_residual(mid);
    if (std::abs(f) <= tolerance || mid == lo || mid == hi) break;
    if (f < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {mid, 1.0 / (mid * std::cosh(mid))};
}

const char* to_string(SurfaceKind kind) {
  return kind == SurfaceKind::catenoid ? "catenoid" : "disk";
}

SurfaceModel SurfaceModel::catenoid() {
  return SurfaceModel(SurfaceKind::catenoid, solve_catenoid_constants(1e-15));
}

SurfaceModel SurfaceModel::disk() { return SurfaceModel(SurfaceKind::disk, {}); }

Vec3 SurfaceModel::position(double s, double theta) const {
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  if (is_catenoid()) {
    const double a = constants_.a;
    const double ch = std::cosh(s);
    return {a * ch * c, a * ch * sn, a * s};
  }
  return {s * c, s * sn, 0.0};
}

Vec3 SurfaceModel::d_s(double s, double theta) const {
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  if (is_catenoid()) {
    const double a = constants_.a;
    const double sh = std::sinh(s);
    return {a * sh * c, a * sh * sn, a};
  }
  return {c, sn, 0.0};
}

Vec3 SurfaceModel::d_theta(double s, double theta) const {
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  if (is_catenoid()) {
    const double a = constants_.a;
    const double ch = std::cosh(s);
    return {-a * ch * sn, a * ch * c, 0.0};
  }
  return {-s * sn, s * c, 0.0};
}

double SurfaceModel::area_element(double s) const {
  if (is_catenoid()) {
    const double ach = constants_.a * std::cosh(s);
    return ach * ach;
  }
  return s;
}

double SurfaceModel::boundary_length_element() const {
  // a cosh T = 1 / T on the critical catenoid.
  return is_catenoid() ? constants_.a * std::cosh(constants_.T) : 1.0;
}

double SurfaceModel::conormal_scale(double s) const {
  if (is_catenoid()) {
    const double scale = 1.0 / (constants_.a * std::cosh(constants_.T));
    return s < 0.0 ? -scale : scale;
  }
  return 1.0;
}

std::array<double, 2> SurfaceModel::boundary_parameters() const {
  if (is_catenoid()) return {-constants_.T, constants_.T};
  return {1.0, 1.0};
}

double SurfaceModel::abs_A_squared(double s) const {
  if (!is_catenoid()) return 0.0;
  const double a = constants_.a;
  const double ch2 = std::cosh(s) * std::cosh(s);
  return 2.0 / (a * a * ch2 * ch2);
}

double SurfaceModel::weighted_potential(double s) const {
  if (!is_catenoid()) return 0.0;
  const double sech = 1.0 / std::cosh(s);
  return 2.0 * sech * sech;
}

GeometryAtPoint geometry_at(const SurfaceModel& surface, double s, double theta) {
  if (!surface.contains(s)) {
    throw std::domain_error("geometry_at: parameter s=" + std::to_string(s) +
                            " outside the surface domain");
  }
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  GeometryAtPoint g;
  g.x = surface.position(s, theta);
  g.area_element = surface.area_element(s);
  if (surface.is_catenoid()) {
    const double a = surface.constants().a;
    const double th = std::tanh(s);
    const double sech = 1.0 / std::cosh(s);
    g.e1 = {th * c, th * sn, sech};
    g.e2 = {-sn, c, 0.0};
    g.normal = {-c * sech, -sn * sech, th};
    g.h.h11 = -sech * sech / a;
    g.h.h12 = 0.0;
    g.h.h22 = sech * sech / a;
  } else {
    g.e1 = {c, sn, 0.0};
    g.e2 = {-sn, c, 0.0};
    g.normal = kUnitZ;
  }
  return g;
}

GeometryAtPoint geometry_fd(const SurfaceModel& surface, double s, double theta, double step) {
  if (!surface.contains(s)) {
    throw std::domain_error("geometry_fd: parameter outside the surface domain");
  }
  auto X = [&](double ds, double dt) { return surface.position(s + ds, theta + dt); };
  const double inv2h = 1.0 / (2.0 * step);
  const double invh2 = 1.0 / (step * step);

  const Vec3 x0 = X(0, 0);
  const Vec3 xs = (X(step, 0) - X(-step, 0)) * inv2h;
  const Vec3 xt = (X(0, step) - X(0, -step)) * inv2h;
  const Vec3 xss = (X(step, 0) - 2.0 * x0 + X(-step, 0)) * invh2;
  const Vec3 xtt = (X(0, step) - 2.0 * x0 + X(0, -step)) * invh2;
  const Vec3 xst =
      (X(step, step) - X(step, -step) - X(-step, step) + X(-step, -step)) * (0.25 * invh2);

  GeometryAtPoint g;
  g.x = x0;
  const Vec3 n = cross(xs, xt);
  g.area_element = norm(n);
  g.normal = n * (1.0 / g.area_element);

  // Gram-Schmidt on (X_s, X_theta); e_i = sum_k c[i][k] X_k.
  const double ls = norm(xs);
  g.e1 = xs * (1.0 / ls);
  const Vec3 t = xt - dot(xt, g.e1) * g.e1;
  const double lt = norm(t);
  g.e2 = t * (1.0 / lt);
  const double c11 = 1.0 / ls;
  const double c21 = -dot(xt, g.e1) / (ls * lt);
  const double c22 = 1.0 / lt;

  const double bss = dot(xss, g.normal);
  const double bst = dot(xst, g.normal);
  const double btt = dot(xtt, g.normal);
  g.h.h11 = c11 * c11 * bss;
  g.h.h12 = c11 * (c21 * bss + c22 * bst);
  g.h.h22 = c21 * c21 * bss + 2.0 * c21 * c22 * bst + c22 * c22 * btt;
  return g;
}

double normal_component(const SurfaceModel& surface, const Vec3& v, double s, double theta) {
  return dot(v, geometry_at(surface, s, theta).normal);
}

double support_orientation(const SurfaceModel& surface) {
  return surface.is_catenoid() ? -1.0 : 1.0;
}

double support_function(const SurfaceModel& surface, double s, double theta) {
  const GeometryAtPoint g = geometry_at(surface, s, theta);
  return support_orientation(surface) * dot(g.x, g.normal);
}

double catenoid_support_closed_form(const CatenoidConstants& c, double s) {
  return c.a * (1.0 - s * std::tanh(s));
}

AreaLength area_and_boundary_length(const SurfaceModel& surface, int intervals) {
  if (intervals < 2 || intervals % 2 != 0) {
    throw std::invalid_argument("area_and_boundary_length: intervals must be even and >= 2");
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  AreaLength out;
  out.area = two_pi * simpson(intervals, surface.s_min(), surface.s_max(),
                              [&](double s) { return surface.area_element(s); });
  out.length = two_pi * surface.boundary_count() * surface.boundary_length_element();
  return out;
}

AreaLength area_and_boundary_length_exact(const SurfaceModel& surface) {
  constexpr double pi = std::numbers::pi;
  if (!surface.is_catenoid()) return {pi, 2.0 * pi};
  const auto [T, a] = surface.constants();
  return {2.0 * pi * a * a * (T + std::sinh(T) * std::cosh(T)), 4.0 * pi / T};
}

}  // namespace fbms
