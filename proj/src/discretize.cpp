#include "fbms/discretize.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fbms {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

const char* to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::robin:
      return "robin";
    case BoundaryCondition::dirichlet:
      return "dirichlet";
    case BoundaryCondition::natural:
      return "natural";
  }
  return "?";
}

double mode_factor(int m) { return m == 0 ? 2.0 * std::numbers::pi : std::numbers::pi; }

std::vector<double> uniform_nodes(const SurfaceModel& surface, int n) {
  std::vector<double> s(static_cast<std::size_t>(n) + 1);
  const double h = (surface.s_max() - surface.s_min()) / n;
  for (int i = 0; i <= n; ++i) s[i] = surface.s_min() + i * h;
  s[n] = surface.s_max();
  return s;
}

double DiscreteOperator::energy(std::span<const double> u) const {
  const std::size_t n = size();
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    e += K.diag[i] * u[i] * u[i];
    if (i + 1 < n) e += 2.0 * K.off[i] * u[i] * u[i + 1];
  }
  return e;
}

double DiscreteOperator::mass(std::span<const double> u, std::span<const double> w) const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += M[i] * u[i] * w[i];
  return s;
}

double DiscreteOperator::boundary(std::span<const double> u, std::span<const double> w) const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += B[i] * u[i] * w[i];
  return s;
}

std::vector<double> DiscreteOperator::restrict_to_dofs(std::span<const double> full) const {
  return {full.begin() + static_cast<std::ptrdiff_t>(first_node),
          full.begin() + static_cast<std::ptrdiff_t>(first_node + size())};
}

std::vector<double> DiscreteOperator::extend_to_grid(std::span<const double> dofs) const {
  std::vector<double> full(grid.size(), 0.0);
  for (std::size_t i = 0; i < dofs.size(); ++i) full[first_node + i] = dofs[i];
  return full;
}

SymTridiagonal DiscreteOperator::normalized() const {
  SymTridiagonal A;
  const std::size_t n = size();
  A.diag.resize(n);
  A.off.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    A.diag[i] = K.diag[i] / M[i];
    if (i + 1 < n) A.off[i] = K.off[i] / std::sqrt(M[i] * M[i + 1]);
  }
  return A;
}

DiscreteOperator assemble(const ModeProblem& problem) {
  const int n = problem.n;
  const int m = problem.mode;
  if (n < 16) throw std::invalid_argument("assemble: grid too small (n >= 16 required)");
  if (m < 0) throw std::invalid_argument("assemble: negative Fourier mode");

  const SurfaceModel& surface = problem.surface;
  const std::vector<double> s = uniform_nodes(surface, n);
  const double h = (surface.s_max() - surface.s_min()) / n;
  const double c = mode_factor(m);
  const auto nodes = static_cast<std::size_t>(n) + 1;

  // Full-grid tridiagonal form (before eliminating any node).
  std::vector<double> diag(nodes, 0.0), off(nodes - 1, 0.0), mass(nodes, 0.0),
      bmass(nodes, 0.0);

  if (surface.is_catenoid()) {
    const double a = surface.constants().a;
    const double inv_T = surface.boundary_length_element();  // a cosh T = 1 / T
    for (std::size_t i = 0; i + 1 < nodes; ++i) {
      diag[i] += 1.0 / h;
      diag[i + 1] += 1.0 / h;
      off[i] = -1.0 / h;
    }
    for (std::size_t i = 0; i < nodes; ++i) {
      const double w = (i == 0 || i + 1 == nodes) ? 0.5 * h : h;
      diag[i] += w * (m * m - surface.weighted_potential(s[i]));
      const double ach = a * std::cosh(s[i]);
      mass[i] = w * ach * ach;
    }
    bmass.front() = inv_T;
    bmass.back() = inv_T;
  } else {
    // Radial weight r: fluxes at cell faces, exact cell volumes for the mass.
    for (std::size_t i = 0; i + 1 < nodes; ++i) {
      const double r_face = 0.5 * (s[i] + s[i + 1]);
      diag[i] += r_face / h;
      diag[i + 1] += r_face / h;
      off[i] = -r_face / h;
    }
    for (std::size_t i = 0; i < nodes; ++i) {
      double vol;
      if (i == 0) {
        vol = h * h / 8.0;
      } else if (i + 1 == nodes) {
        vol = 0.5 * h - h * h / 8.0;
      } else {
        vol = s[i] * h;
      }
      mass[i] = vol;
      // Trapezoid weights for m^2 u^2 / r, exact when u is linear in r.
      const double w = i + 1 == nodes ? 0.5 * h : h;
      if (i > 0) diag[i] += m * m * w / s[i];
    }
    bmass.back() = 1.0;
  }

  if (problem.bc == BoundaryCondition::robin) {
    for (std::size_t i = 0; i < nodes; ++i) diag[i] -= bmass[i];
  }

  // Eliminated nodes: Dirichlet endpoints, and the disk axis for m >= 1.
  std::size_t first = 0;
  std::size_t last = nodes - 1;
  if (problem.bc == BoundaryCondition::dirichlet) {
    if (surface.is_catenoid()) first = 1;
    last = nodes - 2;
  }
  if (!surface.is_catenoid() && m >= 1) first = 1;

  DiscreteOperator op;
  op.factor = c;
  op.h = h;
  op.grid = s;
  op.first_node = first;
  const std::size_t count = last - first + 1;
  op.K.diag.resize(count);
  op.K.off.resize(count - 1);
  op.M.resize(count);
  op.B.resize(count);
  op.nodes.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t i = first + k;
    op.K.diag[k] = c * diag[i];
    if (k + 1 < count) op.K.off[k] = c * off[i];
    op.M[k] = c * mass[i];
    op.B[k] = problem.bc == BoundaryCondition::dirichlet ? 0.0 : c * bmass[i];
    op.nodes[k] = s[i];
  }
  return op;
}

std::vector<double> apply_J(const SurfaceModel& surface, std::span<const double> u, int m) {
  const std::size_t nodes = u.size();
  if (nodes < 3) throw std::invalid_argument("apply_J: need at least three nodes");
  const int n = static_cast<int>(nodes) - 1;
  const double h = (surface.s_max() - surface.s_min()) / n;
  std::vector<double> out(nodes, kNaN);
  for (std::size_t i = 1; i + 1 < nodes; ++i) {
    const double s = surface.s_min() + static_cast<double>(i) * h;
    const double upp = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
    if (surface.is_catenoid()) {
      const double a = surface.constants().a;
      const double ch2 = std::cosh(s) * std::cosh(s);
      out[i] = -(upp - m * m * u[i]) / (a * a * ch2) - 2.0 * u[i] / (a * a * ch2 * ch2);
    } else {
      const double up = (u[i + 1] - u[i - 1]) / (2.0 * h);
      out[i] = -(upp + up / s - m * m * u[i] / (s * s));
    }
  }
  return out;
}

double GridFunction::theta(int j) const { return 2.0 * std::numbers::pi * j / ntheta; }

GridFunction sample(const SurfaceModel& surface, int ns, int ntheta,
                    const std::function<double(double, double)>& f) {
  if (ns < 2 || ntheta < 3) throw std::invalid_argument("sample: grid too small");
  GridFunction g;
  g.ns = ns;
  g.ntheta = ntheta;
  g.s0 = surface.s_min();
  g.hs = (surface.s_max() - surface.s_min()) / ns;
  g.values.resize(static_cast<std::size_t>(ns + 1) * ntheta);
  for (int i = 0; i <= ns; ++i) {
    const double s = i == ns ? surface.s_max() : g.s(i);
    for (int j = 0; j < ntheta; ++j) g(i, j) = f(s, g.theta(j));
  }
  return g;
}

GridFunction apply_J(const SurfaceModel& surface, const GridFunction& u) {
  GridFunction out = u;
  const double hs = u.hs;
  const double ht = 2.0 * std::numbers::pi / u.ntheta;
  for (int j = 0; j < u.ntheta; ++j) {
    out(0, j) = kNaN;
    out(u.ns, j) = kNaN;
  }
  for (int i = 1; i < u.ns; ++i) {
    const double s = u.s(i);
    for (int j = 0; j < u.ntheta; ++j) {
      const int jp = (j + 1) % u.ntheta;
      const int jm = (j + u.ntheta - 1) % u.ntheta;
      const double uss = (u(i + 1, j) - 2.0 * u(i, j) + u(i - 1, j)) / (hs * hs);
      const double utt = (u(i, jp) - 2.0 * u(i, j) + u(i, jm)) / (ht * ht);
      if (surface.is_catenoid()) {
        const double a = surface.constants().a;
        const double ch2 = std::cosh(s) * std::cosh(s);
        out(i, j) = -(uss + utt) / (a * a * ch2) - 2.0 * u(i, j) / (a * a * ch2 * ch2);
      } else {
        const double us = (u(i + 1, j) - u(i - 1, j)) / (2.0 * hs);
        out(i, j) = -(uss + us / s + utt / (s * s));
      }
    }
  }
  return out;
}

double quadrature_surface(const SurfaceModel& surface, const GridFunction& f) {
  const double ht = 2.0 * std::numbers::pi / f.ntheta;
  double total = 0.0;
  for (int i = 0; i <= f.ns; ++i) {
    const double w = (i == 0 || i == f.ns) ? 0.5 * f.hs : f.hs;
    double ring = 0.0;
    for (int j = 0; j < f.ntheta; ++j) ring += f(i, j);
    const double s = i == f.ns ? surface.s_max() : f.s(i);
    total += w * surface.area_element(s) * ring * ht;
  }
  return total;
}

double quadrature_boundary(const SurfaceModel& surface, const GridFunction& f) {
  const double ht = 2.0 * std::numbers::pi / f.ntheta;
  double total = 0.0;
  auto ring = [&](int i) {
    double r = 0.0;
    for (int j = 0; j < f.ntheta; ++j) r += f(i, j);
    return r * ht * surface.boundary_length_element();
  };
  total += ring(f.ns);
  if (surface.boundary_count() == 2) total += ring(0);
  return total;
}

}  // namespace fbms
