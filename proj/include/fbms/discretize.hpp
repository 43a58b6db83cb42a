#pragma once

// Per-Fourier-mode reduction of the Jacobi eigenproblems on a surface of
// revolution, and the matching discrete operators.
//
// For u(s) cos(m theta) (or sin) on the catenoid, the second variation form
// and the interior L2 product reduce to
//   Q(u) = c_m [ int (u'^2 + m^2 u^2 - 2 sech^2(s) u^2) ds
//                - (1/T) (u(T)^2 + u(-T)^2) ],
//   |u|^2 = c_m int u^2 a^2 cosh^2(s) ds,
// with c_0 = 2 pi and c_m = pi for m >= 1. On the disk
//   Q(u) = c_m [ int (u'^2 + m^2 u^2 / r^2) r dr - u(1)^2 ],
//   |u|^2 = c_m int u^2 r dr.
//
// The grid is uniform with n intervals. Stiffness uses one-point (midpoint)
// fluxes between neighbouring nodes, potential and mass use nodal
// (trapezoid / exact cell volume) weights. The result is a symmetric
// tridiagonal K and diagonal M and B; the Robin condition enters as the
// boundary term folded into K, which is the ghost-node elimination of the
// central difference scheme.

#include <functional>
#include <span>
#include <vector>

#include "fbms/eigensolve.hpp"
#include "fbms/geometry.hpp"

namespace fbms {

enum class BoundaryCondition { robin, dirichlet, natural };

const char* to_string(BoundaryCondition bc);

/// 2 pi for m = 0, pi otherwise.
double mode_factor(int m);

struct ModeProblem {
  SurfaceModel surface;
  int mode = 0;
  BoundaryCondition bc = BoundaryCondition::robin;
  int n = 512;  ///< number of grid intervals
};

/// Uniform nodes s_min + i h, i = 0..n.
std::vector<double> uniform_nodes(const SurfaceModel& surface, int n);

struct DiscreteOperator {
  SymTridiagonal K;            ///< stiffness + potential (+ Robin term)
  std::vector<double> M;       ///< diagonal interior mass
  std::vector<double> B;       ///< diagonal boundary mass
  std::vector<double> nodes;   ///< parameter value of each unknown
  std::vector<double> grid;    ///< full grid including eliminated nodes
  std::size_t first_node = 0;  ///< grid index of the first unknown
  double factor = 0.0;         ///< angular factor c_m
  double h = 0.0;

  std::size_t size() const { return nodes.size(); }

  double energy(std::span<const double> u) const;  ///< u^T K u
  double mass(std::span<const double> u, std::span<const double> w) const;
  double boundary(std::span<const double> u, std::span<const double> w) const;

  /// Restriction of a full-grid function to the unknowns.
  std::vector<double> restrict_to_dofs(std::span<const double> full) const;
  /// Extension of unknowns to the full grid (zero on eliminated nodes).
  std::vector<double> extend_to_grid(std::span<const double> dofs) const;

  /// Symmetric tridiagonal M^-1/2 K M^-1/2.
  SymTridiagonal normalized() const;
  /// Dense copies, for cross-checks with the dense solvers.
  Matrix dense_K() const { return K.to_dense(); }
  Matrix dense_M() const { return Matrix::diagonal(M); }
};

/// Throws std::invalid_argument for n < 16 or a negative mode.
DiscreteOperator assemble(const ModeProblem& problem);

/// Pointwise J of the mode profile u (sampled on uniform_nodes(surface, n))
/// times cos(m theta), by central differences. Endpoint values (and r = 0 on
/// the disk) are NaN.
std::vector<double> apply_J(const SurfaceModel& surface, std::span<const double> u, int m);

/// Function sampled on a tensor grid: ns intervals in s (ns + 1 nodes) times
/// ntheta periodic nodes theta_j = 2 pi j / ntheta. Row-major in s.
struct GridFunction {
  int ns = 0;
  int ntheta = 0;
  double s0 = 0.0;
  double hs = 0.0;
  std::vector<double> values;

  double s(int i) const { return s0 + i * hs; }
  double theta(int j) const;
  double& operator()(int i, int j) { return values[static_cast<std::size_t>(i) * ntheta + j]; }
  double operator()(int i, int j) const {
    return values[static_cast<std::size_t>(i) * ntheta + j];
  }
};

GridFunction sample(const SurfaceModel& surface, int ns, int ntheta,
                    const std::function<double(double, double)>& f);

/// J on a tensor grid by central differences (periodic in theta); the rows
/// s = s_min, s_max are NaN.
GridFunction apply_J(const SurfaceModel& surface, const GridFunction& u);

/// Composite trapezoid rule with the area element, periodic in theta.
double quadrature_surface(const SurfaceModel& surface, const GridFunction& f);
/// Sum over boundary circles of the trapezoid rule with the length element.
double quadrature_boundary(const SurfaceModel& surface, const GridFunction& f);

}  // namespace fbms
