#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fbms/discretize.hpp"
#include "fbms/spectra.hpp"
#include "fbms/verify.hpp"

using namespace fbms;

namespace {

constexpr double kPi = std::numbers::pi;

double max_interior_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v)
    if (!std::isnan(x)) m = std::max(m, std::abs(x));
  return m;
}

// Largest |J u| over the interior nodes for profile f of mode m.
double j_residual(const SurfaceModel& surface, int m, int n, double (*f)(double, double)) {
  const auto s = uniform_nodes(surface, n);
  std::vector<double> u(s.size());
  const double a = surface.constants().a;
  for (std::size_t i = 0; i < s.size(); ++i) u[i] = f(s[i], a);
  return max_interior_abs(apply_J(surface, u, m));
}

double tanh_profile(double s, double) { return std::tanh(s); }
double sech_profile(double s, double) { return 1.0 / std::cosh(s); }
double xi_profile(double s, double a) { return a * (1.0 - s * std::tanh(s)); }

}  // namespace

TEST_CASE("mode factor") {
  CHECK(mode_factor(0) == doctest::Approx(2 * kPi));
  CHECK(mode_factor(1) == doctest::Approx(kPi));
  CHECK(mode_factor(5) == doctest::Approx(kPi));
}

TEST_CASE("assemble rejects small grids and negative modes") {
  const SurfaceModel cat = SurfaceModel::catenoid();
  CHECK_THROWS_AS(assemble({cat, 0, BoundaryCondition::robin, 8}), std::invalid_argument);
  CHECK_THROWS_AS(assemble({cat, -1, BoundaryCondition::robin, 64}), std::invalid_argument);
}

TEST_CASE("operators are symmetric with positive mass") {
  for (const SurfaceModel& surface : {SurfaceModel::catenoid(), SurfaceModel::disk()}) {
    for (int m : {0, 1, 3}) {
      for (auto bc : {BoundaryCondition::robin, BoundaryCondition::dirichlet,
                      BoundaryCondition::natural}) {
        const DiscreteOperator op = assemble({surface, m, bc, 64});
        CHECK(op.dense_K().asymmetry() <= 1e-13);
        for (double w : op.M) CHECK(w > 0.0);
        for (double b : op.B) CHECK(b >= 0.0);
      }
    }
  }
}

TEST_CASE("catenoid m=0: energy and mass of the constant profile") {
  const SurfaceModel cat = SurfaceModel::catenoid();
  const auto [T, a] = cat.constants();
  const DiscreteOperator op = assemble({cat, 0, BoundaryCondition::robin, 512});
  const std::vector<double> one(op.size(), 1.0);
  const double exact_energy = 2 * kPi * (-4.0 * std::tanh(T) - 2.0 / T);
  CHECK(std::abs(op.energy(one) - exact_energy) <= 1e-4 * std::abs(exact_energy));
  const double area = area_and_boundary_length_exact(cat).area;
  CHECK(std::abs(op.mass(one, one) - area) <= 1e-4 * area);
  CHECK(op.boundary(one, one) == doctest::Approx(2 * kPi * 2.0 / T));
}

TEST_CASE("disk m=1: u = r has Robin Rayleigh quotient 0") {
  const SurfaceModel disk = SurfaceModel::disk();
  const DiscreteOperator op = assemble({disk, 1, BoundaryCondition::robin, 256});
  std::vector<double> u(op.nodes.begin(), op.nodes.end());
  CHECK(std::abs(op.energy(u) / op.mass(u, u)) <= 1e-10);
}

TEST_CASE("Robin condition reproduces du/ds = +-u/T on the catenoid") {
  // The first Robin eigenfunction's one-sided end slopes approach u(+-T)/T.
  const SurfaceModel cat = SurfaceModel::catenoid();
  const double T = cat.constants().T;
  const std::vector<int> grids{512, 1024, 2048};
  SpectralOptions options;
  options.grids = grids;
  const std::vector<int> modes{0};
  const AggregateSpectrum spec = robin_spectrum(cat, modes, options);
  const auto& u = spec.mode(0).per_grid.back().eigenvectors.front();
  const double h = spec.mode(0).finest.h;
  const std::size_t n = u.size() - 1;
  // Second-order one-sided slopes; the residual is O(h) from the equation term.
  const double right = (3 * u[n] - 4 * u[n - 1] + u[n - 2]) / (2 * h);
  const double left = (-3 * u[0] + 4 * u[1] - u[2]) / (2 * h);
  CHECK(std::abs(right - u[n] / T) <= 1e-3 * std::abs(u[n]));
  CHECK(std::abs(left + u[0] / T) <= 1e-3 * std::abs(u[0]));
}

TEST_CASE("apply_J annihilates Jacobi fields at second order") {
  const SurfaceModel cat = SurfaceModel::catenoid();
  struct Field {
    int m;
    double (*f)(double, double);
  };
  for (const Field& field : {Field{0, tanh_profile}, Field{1, sech_profile}, Field{0, xi_profile}}) {
    const double r1 = j_residual(cat, field.m, 128, field.f);
    const double r2 = j_residual(cat, field.m, 256, field.f);
    const double r3 = j_residual(cat, field.m, 512, field.f);
    CHECK(r3 <= 1e-3);
    CHECK(std::log2(r2 / r3) >= 1.9);
    CHECK(std::log2(r1 / r2) >= 1.9);
  }
}

TEST_CASE("apply_J on tensor grids") {
  const SurfaceModel cat = SurfaceModel::catenoid();
  const GridFunction u = sample(cat, 256, 32, [](double s, double t) {
    return std::cos(t) / std::cosh(s) + std::tanh(s);
  });
  const GridFunction Ju = apply_J(cat, u);
  double worst = 0.0;
  for (int i = 1; i < Ju.ns; ++i)
    for (int j = 0; j < Ju.ntheta; ++j) worst = std::max(worst, std::abs(Ju(i, j)));
  // theta-differences of cos are second order in 2 pi / 32.
  CHECK(worst <= 5e-2);
  CHECK(std::isnan(Ju(0, 0)));
}

TEST_CASE("surface and boundary quadrature") {
  const SurfaceModel cat = SurfaceModel::catenoid();
  const auto [T, a] = cat.constants();
  const GridFunction one = sample(cat, 512, 16, [](double, double) { return 1.0; });
  const double area = area_and_boundary_length_exact(cat).area;
  CHECK(std::abs(quadrature_surface(cat, one) - area) <= 1e-5 * area);
  const GridFunction odd = sample(cat, 512, 16, [a = a](double s, double) {
    return a * (1.0 - s * std::tanh(s)) * std::tanh(s);
  });
  CHECK(std::abs(quadrature_surface(cat, odd)) <= 1e-10);
  const SurfaceModel disk = SurfaceModel::disk();
  const GridFunction done = sample(disk, 64, 16, [](double, double) { return 1.0; });
  CHECK(quadrature_boundary(disk, done) == doctest::Approx(2 * kPi).epsilon(1e-14));
  CHECK(quadrature_boundary(cat, one) == doctest::Approx(4 * kPi / T).epsilon(1e-14));
}

TEST_CASE("u^T K u reproduces Q(u) from 2D quadrature") {
  const SurfaceModel cat = SurfaceModel::catenoid();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = trial % 4;
    const std::array<double, 4> c{coef(rng), coef(rng), coef(rng), coef(rng)};
    auto profile = [c](double s) { return c[0] + c[1] * s + c[2] * s * s + c[3] * std::cos(2 * s); };
    auto dprofile = [c](double s) { return c[1] + 2 * c[2] * s - 2 * c[3] * std::sin(2 * s); };
    ScalarField field;
    field.value = [&, m](double s, double t) { return profile(s) * std::cos(m * t); };
    field.d_s = [&, m](double s, double t) { return dprofile(s) * std::cos(m * t); };
    field.d_theta = [&, m](double s, double t) { return -m * profile(s) * std::sin(m * t); };
    const double q2d = second_variation(cat, field, field, 4096, 32);
    double scale = 0.0;
    std::vector<double> errors;
    for (int n : {512, 1024, 2048}) {
      const DiscreteOperator op = assemble({cat, m, BoundaryCondition::robin, n});
      std::vector<double> u;
      for (double s : op.nodes) u.push_back(profile(s));
      // Energy scale: the gradient part of the form.
      scale = 0.0;
      for (std::size_t i = 0; i + 1 < u.size(); ++i)
        scale += op.factor * (u[i + 1] - u[i]) * (u[i + 1] - u[i]) / op.h;
      errors.push_back(std::abs(op.energy(u) - q2d) / (std::abs(q2d) + scale));
    }
    CHECK(errors[0] <= 1e-3);
    CHECK(errors[1] < errors[0]);
    CHECK(errors[2] < errors[1]);
  }
}

TEST_CASE("cos and sin modes share one reduction") {
  // Both angular factors integrate to pi for m >= 1, so one operator serves
  // both; the multiplicity is recorded as 2.
  const SurfaceModel cat = SurfaceModel::catenoid();
  SpectralOptions options;
  options.grids = {128, 256, 512};
  const std::vector<int> modes{0, 1, 2};
  const AggregateSpectrum spec = robin_spectrum(cat, modes, options);
  CHECK(spec.mode(0).multiplicity == 1);
  CHECK(spec.mode(1).multiplicity == 2);
  CHECK(spec.mode(2).multiplicity == 2);
}
