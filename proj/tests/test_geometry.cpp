#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fbms/geometry.hpp"

using namespace fbms;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("catenoid constants solve T tanh T = 1") {
  const CatenoidConstants c = solve_catenoid_constants(1e-14);
  CHECK(std::abs(c.T * std::tanh(c.T) - 1.0) <= 1e-14);
  CHECK(c.T == doctest::Approx(1.19967864).epsilon(1e-8));
  CHECK(c.a == doctest::Approx(1.0 / (c.T * std::cosh(c.T))).epsilon(1e-14));
  CHECK(c.a == doctest::Approx(0.4604850882501339).epsilon(1e-12));
  // Bracket validity.
  CHECK((1.0 * std::tanh(1.0) - 1.0) * (1.5 * std::tanh(1.5) - 1.0) < 0.0);
  CHECK_THROWS_AS(solve_catenoid_constants(0.0), std::invalid_argument);
}

TEST_CASE("boundary circles lie on the unit sphere and meet it orthogonally") {
  const SurfaceModel cat = SurfaceModel::catenoid();
  const double T = cat.constants().T;
  for (int k = 0; k < 200; ++k) {
    const double t = 2 * kPi * k / 200;
    for (double s : {-T, T}) {
      const GeometryAtPoint g = geometry_at(cat, s, t);
      CHECK(std::abs(norm(g.x) - 1.0) <= 1e-12);
      CHECK(std::abs(dot(g.x, g.normal)) <= 1e-12);
    }
  }
  const SurfaceModel disk = SurfaceModel::disk();
  CHECK(norm(disk.position(1.0, 0.3)) == doctest::Approx(1.0));
  CHECK(dot(geometry_at(disk, 1.0, 0.3).x, geometry_at(disk, 1.0, 0.3).normal) == 0.0);
}

TEST_CASE("geometry at the waist") {
  const SurfaceModel cat = SurfaceModel::catenoid();
  const double a = cat.constants().a;
  const GeometryAtPoint g = geometry_at(cat, 0.0, 0.0);
  CHECK(g.x.x == doctest::Approx(a));
  CHECK(std::abs(g.x.y) < 1e-15);
  CHECK(std::abs(g.x.z) < 1e-15);
  CHECK(std::abs(std::abs(g.normal.x) - 1.0) < 1e-15);
  CHECK(g.abs_A_squared() == doctest::Approx(2.0 / (a * a)).epsilon(1e-13));
  const GeometryAtPoint fd = geometry_fd(cat, 0.0, 0.0);
  CHECK(fd.abs_A_squared() == doctest::Approx(2.0 / (a * a)).epsilon(1e-6));
}

TEST_CASE("geometry outside the parameter domain is rejected") {
  const SurfaceModel cat = SurfaceModel::catenoid();
  CHECK_THROWS_AS(geometry_at(cat, 1.3, 0.0), std::domain_error);
  CHECK_THROWS_AS(geometry_at(SurfaceModel::disk(), -0.1, 0.0), std::domain_error);
  CHECK_THROWS_AS(geometry_at(SurfaceModel::disk(), 1.01, 0.0), std::domain_error);
}

TEST_CASE("frame, minimality and |A|^2 against finite differences") {
  const SurfaceModel cat = SurfaceModel::catenoid();
  const double a = cat.constants().a;
  const double T = cat.constants().T;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> us(-0.95 * T, 0.95 * T), ut(0.0, 2 * kPi);
  for (int k = 0; k < 50; ++k) {
    const double s = us(rng), t = ut(rng);
    const GeometryAtPoint g = geometry_at(cat, s, t);
    CHECK(std::abs(norm(g.e1) - 1.0) <= 1e-10);
    CHECK(std::abs(norm(g.e2) - 1.0) <= 1e-10);
    CHECK(std::abs(dot(g.e1, g.e2)) <= 1e-10);
    CHECK(std::abs(dot(g.e1, g.normal)) <= 1e-10);
    CHECK(std::abs(dot(g.e2, g.normal)) <= 1e-10);
    const double ch = std::cosh(s);
    CHECK(g.abs_A_squared() == doctest::Approx(2.0 / (a * a * ch * ch * ch * ch)).epsilon(1e-12));
    CHECK(std::abs(g.h.trace()) <= 1e-12);

    const GeometryAtPoint f = geometry_fd(cat, s, t, 1e-4);
    CHECK(std::abs(f.h.trace()) <= 1e-6);
    CHECK(std::abs(f.h.h11 - g.h.h11) <= 1e-6);
    CHECK(std::abs(f.h.h22 - g.h.h22) <= 1e-6);
    CHECK(std::abs(f.h.h12 - g.h.h12) <= 1e-6);
    CHECK(norm(f.normal - g.normal) <= 1e-8);
  }
}

TEST_CASE("finite-difference curvature converges at second order") {
  const SurfaceModel cat = SurfaceModel::catenoid();
  const GeometryAtPoint g = geometry_at(cat, 0.4, 1.0);
  const double e1 = std::abs(geometry_fd(cat, 0.4, 1.0, 2e-2).h.h11 - g.h.h11);
  const double e2 = std::abs(geometry_fd(cat, 0.4, 1.0, 1e-2).h.h11 - g.h.h11);
  CHECK(std::log2(e1 / e2) >= 1.9);
}

TEST_CASE("normal components of coordinate vectors") {
  const SurfaceModel cat = SurfaceModel::catenoid();
  for (double s : {-1.1, -0.5, 0.0, 0.3, 1.0}) {
    for (double t : {0.0, 0.7, 2.0}) {
      // Orientation: N = X_s x X_theta normalized.
      CHECK(normal_component(cat, kUnitZ, s, t) == doctest::Approx(std::tanh(s)));
      CHECK(normal_component(cat, kUnitX, s, t) ==
            doctest::Approx(-std::cos(t) / std::cosh(s)));
      CHECK(std::abs(normal_component(cat, kUnitX, s, t)) ==
            doctest::Approx(std::abs(std::cos(t) / std::cosh(s))));
    }
  }
  const SurfaceModel disk = SurfaceModel::disk();
  CHECK(normal_component(disk, kUnitZ, 0.5, 1.0) == 1.0);
  CHECK(normal_component(disk, kUnitX, 0.5, 1.0) == 0.0);
}

TEST_CASE("normal_component is linear in v") {
  const SurfaceModel cat = SurfaceModel::catenoid();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Vec3 p{u(rng), u(rng), u(rng)}, q{u(rng), u(rng), u(rng)};
    const double alpha = u(rng), beta = u(rng);
    const double s = u(rng), t = 3 * u(rng) + 3;
    const double lhs = normal_component(cat, alpha * p + beta * q, s, t);
    const double rhs =
        alpha * normal_component(cat, p, s, t) + beta * normal_component(cat, q, s, t);
    CHECK(std::abs(lhs - rhs) <= 1e-15);
  }
}

TEST_CASE("support function") {
  const SurfaceModel cat = SurfaceModel::catenoid();
  const CatenoidConstants c = cat.constants();
  CHECK(std::abs(support_function(cat, c.T, 0.2)) <= 1e-15);
  CHECK(std::abs(support_function(cat, -c.T, 1.2)) <= 1e-15);
  CHECK(support_function(cat, 0.0, 0.0) == doctest::Approx(c.a));
  for (int k = 0; k < 200; ++k) {
    const double s = -c.T + 2 * c.T * k / 199;
    const double t = 0.1 * k;
    CHECK(std::abs(support_function(cat, s, t) - catenoid_support_closed_form(c, s)) <= 1e-12);
    CHECK(support_function(cat, s, t) == doctest::Approx(support_function(cat, -s, t)));
    if (k > 0 && k < 199) CHECK(support_function(cat, s, t) > 0.0);
  }
  CHECK(support_orientation(cat) == -1.0);
  CHECK(support_function(SurfaceModel::disk(), 0.5, 0.0) == 0.0);
}

TEST_CASE("area and boundary length") {
  const SurfaceModel cat = SurfaceModel::catenoid();
  const auto [T, a] = cat.constants();
  const AreaLength q = area_and_boundary_length(cat);
  const AreaLength e = area_and_boundary_length_exact(cat);
  CHECK(q.area == doctest::Approx(2 * kPi * a * a * (T + std::sinh(T) * std::cosh(T))).epsilon(1e-12));
  CHECK(e.length == doctest::Approx(4 * kPi / T).epsilon(1e-15));
  CHECK(std::abs(q.length / q.area - 2.0) <= 1e-10);
  CHECK(std::abs(2 * e.area - e.length) <= 1e-10);
  CHECK(q.length > 2 * kPi);
  const AreaLength d = area_and_boundary_length(SurfaceModel::disk());
  CHECK(d.area == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(d.length == doctest::Approx(2 * kPi).epsilon(1e-15));
}

TEST_CASE("Robin condition: conormal derivative on the catenoid is d/ds scaled by T") {
  const SurfaceModel cat = SurfaceModel::catenoid();
  const double T = cat.constants().T;
  CHECK(cat.conormal_scale(T) == doctest::Approx(T));
  CHECK(cat.conormal_scale(-T) == doctest::Approx(-T));
  CHECK(cat.boundary_length_element() == doctest::Approx(1.0 / T));
}
