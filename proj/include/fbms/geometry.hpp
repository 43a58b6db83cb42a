#pragma once

// Geometric data of the two model free boundary minimal surfaces in the unit
// ball: the critical catenoid and the flat equatorial disk.
//
// Both surfaces are rotationally symmetric and are described on a rectangle
// of parameters (s, theta):
//   catenoid  X(s, theta) = a (cosh s cos theta, cosh s sin theta, s),
//             s in [-T, T], with T tanh T = 1 and a = 1 / (T cosh T);
//   disk      X(r, theta) = (r cos theta, r sin theta, 0), r in [0, 1].
// The radial parameter is called `s` for both surfaces.

#include <array>
#include <cmath>
#include <numbers>

namespace fbms {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double c) {
    x *= c;
    y *= c;
    z *= c;
    return *this;
  }
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator*(double c, Vec3 a) { return a *= c; }
constexpr Vec3 operator*(Vec3 a, double c) { return a *= c; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }

constexpr double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline constexpr Vec3 kUnitX{1.0, 0.0, 0.0};
inline constexpr Vec3 kUnitY{0.0, 1.0, 0.0};
inline constexpr Vec3 kUnitZ{0.0, 0.0, 1.0};

struct CatenoidConstants {
  double T = 0.0;  ///< half-length of the s-interval
  double a = 0.0;  ///< scale factor, 1 / (T cosh T)
};

/// Bisection on f(T) = T tanh T - 1 over [1, 1.5] until |f(T)| <= tolerance
/// (or the bracket collapses to machine resolution).
CatenoidConstants solve_catenoid_constants(double tolerance = 1e-14);

enum class SurfaceKind { catenoid, disk };

const char* to_string(SurfaceKind kind);

class SurfaceModel {
 public:
  static SurfaceModel catenoid();
  static SurfaceModel disk();

  SurfaceKind kind() const { return kind_; }
  bool is_catenoid() const { return kind_ == SurfaceKind::catenoid; }

  /// Only meaningful for the catenoid.
  const CatenoidConstants& constants() const { return constants_; }

  double s_min() const { return kind_ == SurfaceKind::catenoid ? -constants_.T : 0.0; }
  double s_max() const { return kind_ == SurfaceKind::catenoid ? constants_.T : 1.0; }

  bool contains(double s, double slack = 1e-12) const {
    return s >= s_min() - slack && s <= s_max() + slack;
  }

  /// Immersion and its coordinate derivatives. These are the analytic
  /// formulas and are valid (as an extension) slightly outside the domain.
  Vec3 position(double s, double theta) const;
  Vec3 d_s(double s, double theta) const;
  Vec3 d_theta(double s, double theta) const;

  /// |X_s x X_theta|: the area element in (s, theta) coordinates.
  double area_element(double s) const;

  /// Length element of the boundary circle(s) per unit theta.
  double boundary_length_element() const;

  /// Factor converting d/ds into the outward conormal derivative at the
  /// boundary point with parameter s (s = +-T for the catenoid, s = 1 for
  /// the disk).
  double conormal_scale(double s) const;

  /// Parameter values of the boundary circles.
  std::array<double, 2> boundary_parameters() const;
  int boundary_count() const { return kind_ == SurfaceKind::catenoid ? 2 : 1; }

  /// |A|^2 at parameter s (0 for the disk).
  double abs_A_squared(double s) const;

  /// |A|^2 times the area element; on the catenoid 2 sech^2 s.
  double weighted_potential(double s) const;

 private:
  SurfaceModel(SurfaceKind kind, CatenoidConstants c) : kind_(kind), constants_(c) {}

  SurfaceKind kind_;
  CatenoidConstants constants_;
};

/// Second fundamental form coefficients in the orthonormal frame (e1, e2).
struct SecondFundamentalForm {
  double h11 = 0.0;
  double h12 = 0.0;
  double h22 = 0.0;

  double trace() const { return h11 + h22; }
  double norm_squared() const { return h11 * h11 + 2.0 * h12 * h12 + h22 * h22; }
  /// h(u, w) for tangent vectors given by frame coordinates.
  double operator()(const std::array<double, 2>& u, const std::array<double, 2>& w) const {
    return h11 * u[0] * w[0] + h12 * (u[0] * w[1] + u[1] * w[0]) + h22 * u[1] * w[1];
  }
};

struct GeometryAtPoint {
  Vec3 x;
  Vec3 e1;  ///< unit vector along d/ds
  Vec3 e2;  ///< unit vector along d/dtheta
  Vec3 normal;
  SecondFundamentalForm h;  ///< h_ij = (D_{e_i} e_j, N)
  double area_element = 0.0;

  double abs_A_squared() const { return h.norm_squared(); }
  /// Frame coordinates of the tangential projection of v.
  std::array<double, 2> tangential(const Vec3& v) const { return {dot(v, e1), dot(v, e2)}; }
};

/// Closed-form frame and curvature. The normal is X_s x X_theta normalized
/// (inward-pointing at the catenoid waist, e_z on the disk).
/// Throws std::domain_error outside the parameter domain.
GeometryAtPoint geometry_at(const SurfaceModel& surface, double s, double theta);

/// The same data from finite differences of the immersion alone (central
/// differences of step `step`, second order). Used as an independent check
/// of the closed forms.
GeometryAtPoint geometry_fd(const SurfaceModel& surface, double s, double theta,
                            double step = 1e-4);

/// (v, N(s, theta)) with the normal of geometry_at.
double normal_component(const SurfaceModel& surface, const Vec3& v, double s, double theta);

/// Orientation sign applied to (x, N) so that the support function is
/// positive in the interior of the catenoid: -1 for the catenoid, +1 for the
/// disk.
double support_orientation(const SurfaceModel& surface);

/// xi = support_orientation * (x, N); on the catenoid a (1 - s tanh s).
double support_function(const SurfaceModel& surface, double s, double theta);

/// Closed form a (1 - s tanh s) of the catenoid support function.
double catenoid_support_closed_form(const CatenoidConstants& c, double s);

struct AreaLength {
  double area = 0.0;
  double length = 0.0;
};

/// Area of the surface and length of its boundary by composite Simpson
/// quadrature of the area element (`intervals` even, >= 2).
AreaLength area_and_boundary_length(const SurfaceModel& surface, int intervals = 2048);

/// Closed forms: catenoid area 2 pi a^2 (T + sinh T cosh T), length 4 pi / T;
/// disk area pi, length 2 pi.
AreaLength area_and_boundary_length_exact(const SurfaceModel& surface);

}  // namespace fbms
