#pragma once

// Quadrature and finite-difference checks of the integral and pointwise
// identities satisfied by free boundary minimal surfaces, computed
// independently of the eigenvalue pipeline:
//
//   * composite Simpson in s (the discrete operators use trapezoid weights),
//   * periodic trapezoid in theta,
//   * fourth-order finite differences of closed-form geometric functions.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fbms/geometry.hpp"

namespace fbms {

struct IdentityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;  ///< abs / (|lhs| + |rhs| + 1)
  int n = 0;
  /// Observed convergence order under grid (or step) refinement; +inf when
  /// the residual is at round-off level on the coarser grids already.
  double order = 0.0;
  std::vector<std::pair<std::string, double>> terms;

  void set_sides(double left, double right);
};

/// A scalar function on the parameter domain with optional analytic partial
/// derivatives; missing ones come from fourth-order finite differences
/// (one-sided near the ends of the s-interval).
struct ScalarField {
  using Fn = std::function<double(double, double)>;
  Fn value;
  Fn d_s, d_theta, d_ss, d_thetatheta;
  double fd_step = 1e-3;

  double ds(const SurfaceModel& surface, double s, double theta) const;
  double dtheta(double s, double theta) const;
  double dss(const SurfaceModel& surface, double s, double theta) const;
  double dthetatheta(double s, double theta) const;
};

/// sum_k c_k s^{p_k} {cos, sin}(m_k theta) with analytic derivatives.
struct TrigPolynomial {
  struct Term {
    double coefficient = 1.0;
    int power = 0;
    int mode = 0;
    bool sine = false;
  };
  std::vector<Term> terms;
  std::string label;

  ScalarField field() const;
};

/// The 20 deterministic functions s^p cos(m theta) (p, m = 0..3) and
/// s^p sin(theta) (p = 0..3), followed by `random_count` pseudo-random
/// trigonometric polynomials drawn from `seed`.
std::vector<TrigPolynomial> test_function_corpus(std::uint64_t seed, int random_count = 10);

/// v_perp = (v, N) as a field (finite-difference derivatives).
ScalarField normal_component_field(const SurfaceModel& surface, const Vec3& v);
/// The support function xi as a field.
ScalarField support_field(const SurfaceModel& surface);

/// Q(u, w) = int (<grad u, grad w> - |A|^2 u w) - int_bdry u w.
double second_variation(const SurfaceModel& surface, const ScalarField& u, const ScalarField& w,
                        int n, int ntheta = 64);
/// int_Sigma u w.
double surface_inner(const SurfaceModel& surface, const ScalarField& u, const ScalarField& w,
                     int n, int ntheta = 64);

/// J w = Delta w - |A|^2 w with Delta = -div grad, from the field's second
/// derivatives.
double jacobi_of(const SurfaceModel& surface, const ScalarField& w, double s, double theta);

/// Q(v_perp, v_perp) against -2 int |v_perp|^2.
IdentityReport check_fsn(const SurfaceModel& surface, const Vec3& v, int n);

/// Q(v_perp, w) against -2 int v_perp w + int (J w) (Y, N) with
/// Y = (v, x) x + (1 - |x|^2) v / 2. Catenoid only (the disk formula is
/// singular at the axis for general w).
IdentityReport check_ipp(const SurfaceModel& surface, const Vec3& v, const ScalarField& w,
                         int n, const std::string& label = "w");

struct SamplePoint {
  double s = 0.0;
  double theta = 0.0;
};

/// `count` deterministic points strictly inside the domain.
std::vector<SamplePoint> interior_samples(const SurfaceModel& surface, int count);
/// `count` deterministic points on the boundary circles.
std::vector<SamplePoint> boundary_samples(const SurfaceModel& surface, int count);

/// Pointwise checks in the scalar (hypersurface) form, at the given interior
/// and boundary samples:
///   (i)   e_i (x, N)  = -h(x^T, e_i)
///   (ii)  e_i (v, N)  = -h(v^T, e_i)
///   (iii) Delta |x|^2 = -4
///   (iv)  nu (x, N)   = -h(nu, nu)
///   (v)   nu (v, N)   = -(v, nu) h(nu, nu)
/// One report per item with the worst residual over the samples.
std::vector<IdentityReport> check_pointwise_identities(const SurfaceModel& surface,
                                          std::span<const SamplePoint> interior,
                                          std::span<const SamplePoint> boundary, const Vec3& v);

/// Q(1, xi) = -int |A|^2 xi against int_bdry d(xi)/d(nu). Catenoid only;
/// throws std::domain_error if |Q(1, xi)| < 1e-8.
IdentityReport check_q1xi(const SurfaceModel& surface, int n);

/// d(xi)/d(nu) against -h(nu, nu) (for the orientation making xi positive).
IdentityReport check_xi_conormal(const SurfaceModel& surface,
                                 std::span<const SamplePoint> boundary);

/// int xi v_perp against 0.
IdentityReport check_xi_orthogonality(const SurfaceModel& surface, const Vec3& v, int n);

/// For each coordinate vector and every J-harmonic basis profile phi of
/// modes 0..mmax (times cos and sin): Q(v_perp, phi) against
/// -2 int v_perp phi. Catenoid only.
std::vector<IdentityReport> check_coordinate_fields(const SurfaceModel& surface, int mmax, int n);

/// Observed order from residuals on three successively doubled grids. Values
/// at or below `floor` are treated as converged. The quadrature checks
/// measure it on the grids 8, 16, 32.
double observed_order(double coarse, double mid, double fine, double floor);

}  // namespace fbms
