#include "fbms/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fbms/spectra.hpp"

namespace fbms {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fourth-order first and second derivatives of g at x with step d, central
// when [x - 2d, x + 2d] (resp. 3d) stays in [lo, hi], one-sided otherwise.
double fd1(const std::function<double(double)>& g, double x, double d, double lo, double hi) {
  if (x - 2 * d >= lo - 1e-14 && x + 2 * d <= hi + 1e-14) {
    return (-g(x + 2 * d) + 8 * g(x + d) - 8 * g(x - d) + g(x - 2 * d)) / (12 * d);
  }
  const double sgn = (x + 2 * d > hi + 1e-14) ? -1.0 : 1.0;
  const double e = sgn * d;
  return (-25 * g(x) + 48 * g(x + e) - 36 * g(x + 2 * e) + 16 * g(x + 3 * e) - 3 * g(x + 4 * e)) /
         (12 * e);
}

double fd2(const std::function<double(double)>& g, double x, double d, double lo, double hi) {
  if (x - 2 * d >= lo - 1e-14 && x + 2 * d <= hi + 1e-14) {
    return (-g(x + 2 * d) + 16 * g(x + d) - 30 * g(x) + 16 * g(x - d) - g(x - 2 * d)) /
           (12 * d * d);
  }
  const double sgn = (x + 2 * d > hi + 1e-14) ? -1.0 : 1.0;
  const double e = sgn * d;
  return (45 * g(x) - 154 * g(x + e) + 214 * g(x + 2 * e) - 156 * g(x + 3 * e) +
          61 * g(x + 4 * e) - 10 * g(x + 5 * e)) /
         (12 * e * e);
}

double periodic_fd1(const std::function<double(double)>& g, double x, double d) {
  return (-g(x + 2 * d) + 8 * g(x + d) - 8 * g(x - d) + g(x - 2 * d)) / (12 * d);
}

double periodic_fd2(const std::function<double(double)>& g, double x, double d) {
  return (-g(x + 2 * d) + 16 * g(x + d) - 30 * g(x) + 16 * g(x - d) - g(x - 2 * d)) / (12 * d * d);
}

// Values and first derivatives of a function on the Simpson x trapezoid grid.
struct Sampled {
  int n = 0;
  int ntheta = 0;
  std::vector<double> value, ds, dtheta;

  std::size_t at(int i, int j) const { return static_cast<std::size_t>(i) * ntheta + j; }
};

std::vector<double> simpson_nodes(const SurfaceModel& surface, int n) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("quadrature grid must be even and >= 4");
  std::vector<double> s(static_cast<std::size_t>(n) + 1);
  const double h = (surface.s_max() - surface.s_min()) / n;
  for (int i = 0; i <= n; ++i) s[i] = surface.s_min() + i * h;
  s[n] = surface.s_max();
  return s;
}

double simpson_weight(int i, int n, double h) {
  const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
  return w * h / 3.0;
}

Sampled sample_field(const SurfaceModel& surface, const ScalarField& f, int n, int ntheta) {
  Sampled out;
  out.n = n;
  out.ntheta = ntheta;
  const auto s = simpson_nodes(surface, n);
  const std::size_t size = s.size() * static_cast<std::size_t>(ntheta);
  out.value.resize(size);
  out.ds.resize(size);
  out.dtheta.resize(size);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j < ntheta; ++j) {
      const double t = kTwoPi * j / ntheta;
      out.value[out.at(i, j)] = f.value(s[i], t);
      out.ds[out.at(i, j)] = f.ds(surface, s[i], t);
      out.dtheta[out.at(i, j)] = f.dtheta(s[i], t);
    }
  }
  return out;
}

// Metric factors of the orthogonal parametrization: 1/|X_s|^2, 1/|X_theta|^2
// (0 on the disk axis, where the theta-derivative vanishes).
std::pair<double, double> inverse_metric(const SurfaceModel& surface, double s) {
  const double gs = dot(surface.d_s(s, 0.0), surface.d_s(s, 0.0));
  const double gt = dot(surface.d_theta(s, 0.0), surface.d_theta(s, 0.0));
  return {1.0 / gs, gt > 0.0 ? 1.0 / gt : 0.0};
}

double q_form(const SurfaceModel& surface, const Sampled& u, const Sampled& w) {
  const int n = u.n;
  const auto s = simpson_nodes(surface, n);
  const double h = s[1] - s[0];
  const double ht = kTwoPi / u.ntheta;
  double interior = 0.0;
  for (int i = 0; i <= n; ++i) {
    const auto [igs, igt] = inverse_metric(surface, s[i]);
    const double area = surface.area_element(s[i]);
    const double A2 = surface.abs_A_squared(s[i]);
    double ring = 0.0;
    for (int j = 0; j < u.ntheta; ++j) {
      const auto k = u.at(i, j);
      ring += (u.ds[k] * w.ds[k] * igs + u.dtheta[k] * w.dtheta[k] * igt - A2 * u.value[k] * w.value[k]) *
              area;
    }
    interior += simpson_weight(i, n, h) * ring * ht;
  }
  double bdry = 0.0;
  auto ring_at = [&](int i) {
    double r = 0.0;
    for (int j = 0; j < u.ntheta; ++j) r += u.value[u.at(i, j)] * w.value[w.at(i, j)];
    return r * ht * surface.boundary_length_element();
  };
  bdry += ring_at(n);
  if (surface.boundary_count() == 2) bdry += ring_at(0);
  return interior - bdry;
}

double inner(const SurfaceModel& surface, int n, int ntheta,
             const std::function<double(int, int, double, double)>& integrand) {
  const auto s = simpson_nodes(surface, n);
  const double h = s[1] - s[0];
  const double ht = kTwoPi / ntheta;
  double total = 0.0;
  for (int i = 0; i <= n; ++i) {
    double ring = 0.0;
    for (int j = 0; j < ntheta; ++j) ring += integrand(i, j, s[i], kTwoPi * j / ntheta);
    total += simpson_weight(i, n, h) * surface.area_element(s[i]) * ring * ht;
  }
  return total;
}

double relative(double abs, double lhs, double rhs) {
  return abs / (std::abs(lhs) + std::abs(rhs) + 1.0);
}

}  // namespace

void IdentityReport::set_sides(double left, double right) {
  lhs = left;
  rhs = right;
  abs_residual = std::abs(left - right);
  rel_residual = relative(abs_residual, left, right);
}

double ScalarField::ds(const SurfaceModel& surface, double s, double theta) const {
  if (d_s) return d_s(s, theta);
  return fd1([&](double x) { return value(x, theta); }, s, fd_step, surface.s_min(),
             surface.s_max());
}

double ScalarField::dtheta(double s, double theta) const {
  if (d_theta) return d_theta(s, theta);
  return periodic_fd1([&](double t) { return value(s, t); }, theta, fd_step);
}

double ScalarField::dss(const SurfaceModel& surface, double s, double theta) const {
  if (d_ss) return d_ss(s, theta);
  return fd2([&](double x) { return value(x, theta); }, s, fd_step, surface.s_min(),
             surface.s_max());
}

double ScalarField::dthetatheta(double s, double theta) const {
  if (d_thetatheta) return d_thetatheta(s, theta);
  return periodic_fd2([&](double t) { return value(s, t); }, theta, fd_step);
}

ScalarField TrigPolynomial::field() const {
  auto terms_copy = terms;
  auto eval = [terms_copy](int ds_order, int dt_order) {
    return [terms_copy, ds_order, dt_order](double s, double t) {
      double total = 0.0;
      for (const auto& term : terms_copy) {
        double radial;
        const int p = term.power;
        if (ds_order == 0) {
          radial = std::pow(s, p);
        } else if (ds_order == 1) {
          radial = p == 0 ? 0.0 : p * std::pow(s, p - 1);
        } else {
          radial = p < 2 ? 0.0 : p * (p - 1) * std::pow(s, p - 2);
        }
        const double m = term.mode;
        double angular;
        const double c = std::cos(m * t), sn = std::sin(m * t);
        if (dt_order == 0) {
          angular = term.sine ? sn : c;
        } else if (dt_order == 1) {
          angular = term.sine ? m * c : -m * sn;
        } else {
          angular = term.sine ? -m * m * sn : -m * m * c;
        }
        total += term.coefficient * radial * angular;
      }
      return total;
    };
  };
  ScalarField f;
  f.value = eval(0, 0);
  f.d_s = eval(1, 0);
  f.d_theta = eval(0, 1);
  f.d_ss = eval(2, 0);
  f.d_thetatheta = eval(0, 2);
  return f;
}

std::vector<TrigPolynomial> test_function_corpus(std::uint64_t seed, int random_count) {
  std::vector<TrigPolynomial> corpus;
  for (int p = 0; p <= 3; ++p) {
    for (int m = 0; m <= 3; ++m) {
      TrigPolynomial t;
      t.terms.push_back({1.0, p, m, false});
      t.label = "s^" + std::to_string(p) + " cos(" + std::to_string(m) + "t)";
      corpus.push_back(std::move(t));
    }
  }
  for (int p = 0; p <= 3; ++p) {
    TrigPolynomial t;
    t.terms.push_back({1.0, p, 1, true});
    t.label = "s^" + std::to_string(p) + " sin(1t)";
    corpus.push_back(std::move(t));
  }
  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int k = 0; k < random_count; ++k) {
    TrigPolynomial t;
    for (int term = 0; term < 3; ++term) {
      const double c = 2.0 * unit() - 1.0;
      const int p = static_cast<int>(rng() % 4);
      const int m = static_cast<int>(rng() % 4);
      const bool sine = m > 0 && (rng() % 2 == 1);
      t.terms.push_back({c, p, m, sine});
    }
    t.label = "random#" + std::to_string(k);
    corpus.push_back(std::move(t));
  }
  return corpus;
}

ScalarField normal_component_field(const SurfaceModel& surface, const Vec3& v) {
  ScalarField f;
  f.value = [surface, v](double s, double t) { return normal_component(surface, v, s, t); };
  return f;
}

ScalarField support_field(const SurfaceModel& surface) {
  ScalarField f;
  f.value = [surface](double s, double t) { return support_function(surface, s, t); };
  return f;
}

double second_variation(const SurfaceModel& surface, const ScalarField& u, const ScalarField& w,
                        int n, int ntheta) {
  return q_form(surface, sample_field(surface, u, n, ntheta), sample_field(surface, w, n, ntheta));
}

double surface_inner(const SurfaceModel& surface, const ScalarField& u, const ScalarField& w,
                     int n, int ntheta) {
  return inner(surface, n, ntheta,
               [&](int, int, double s, double t) { return u.value(s, t) * w.value(s, t); });
}

double jacobi_of(const SurfaceModel& surface, const ScalarField& w, double s, double theta) {
  const double wss = w.dss(surface, s, theta);
  const double wtt = w.dthetatheta(s, theta);
  const double value = w.value(s, theta);
  if (surface.is_catenoid()) {
    const double a = surface.constants().a;
    const double ch2 = std::cosh(s) * std::cosh(s);
    return -(wss + wtt) / (a * a * ch2) - 2.0 * value / (a * a * ch2 * ch2);
  }
  if (s <= 0.0) throw std::domain_error("jacobi_of: the disk formula is singular at the axis");
  return -(wss + w.ds(surface, s, theta) / s + wtt / (s * s));
}

double observed_order(double coarse, double mid, double fine, double floor) {
  if (fine <= floor) {
    if (mid <= floor) return kInf;
    return coarse > mid ? std::log2(coarse / mid) : 0.0;
  }
  if (!(mid > fine)) return 0.0;
  return std::log2(mid / fine);
}

namespace {

template <typename Compute>
IdentityReport refine(const std::string& name, int n, Compute&& compute) {
  if (n < 32 || n % 2 != 0) throw std::invalid_argument(name + ": n must be even and >= 32");
  // The order is measured on coarse grids, where truncation error still
  // dominates round-off; the reported residual is the one at n.
  IdentityReport coarse = compute(8);
  IdentityReport mid = compute(16);
  IdentityReport last = compute(32);
  IdentityReport fine = n == 32 ? last : compute(n);
  fine.name = name;
  fine.n = n;
  double scale = 1.0 + std::abs(fine.lhs) + std::abs(fine.rhs);
  for (const auto& [label, value] : fine.terms) scale += std::abs(value);
  fine.order = observed_order(coarse.abs_residual, mid.abs_residual, last.abs_residual,
                              1e-11 * scale);
  return fine;
}

}  // namespace

IdentityReport check_fsn(const SurfaceModel& surface, const Vec3& v, int n) {
  const ScalarField vp = normal_component_field(surface, v);
  return refine("fsn", n, [&](int grid) {
    IdentityReport r;
    const double q = second_variation(surface, vp, vp, grid);
    const double l2 = surface_inner(surface, vp, vp, grid);
    r.set_sides(q, -2.0 * l2);
    r.terms = {{"Q(v_perp,v_perp)", q}, {"int |v_perp|^2", l2}};
    return r;
  });
}

IdentityReport check_ipp(const SurfaceModel& surface, const Vec3& v, const ScalarField& w, int n,
                         const std::string& label) {
  if (!surface.is_catenoid()) throw std::invalid_argument("check_ipp: catenoid only");
  const ScalarField vp = normal_component_field(surface, v);
  return refine("ipp[" + label + "]", n, [&](int grid) {
    constexpr int ntheta = 64;
    IdentityReport r;
    const double q = second_variation(surface, vp, w, grid, ntheta);
    const double l2 = surface_inner(surface, vp, w, grid, ntheta);
    const double jy = inner(surface, grid, ntheta, [&](int, int, double s, double t) {
      const GeometryAtPoint g = geometry_at(surface, s, t);
      const double yn = dot(v, g.x) * dot(g.x, g.normal) +
                        0.5 * (1.0 - dot(g.x, g.x)) * dot(v, g.normal);
      return jacobi_of(surface, w, s, t) * yn;
    });
    r.set_sides(q, -2.0 * l2 + jy);
    r.terms = {{"Q(v_perp,w)", q}, {"int v_perp w", l2}, {"int (Jw)(Y,N)", jy}};
    return r;
  });
}

std::vector<SamplePoint> interior_samples(const SurfaceModel& surface, int count) {
  std::vector<SamplePoint> pts;
  const double lo = surface.s_min();
  const double span = surface.s_max() - lo;
  for (int k = 0; k < count; ++k) {
    // Low-discrepancy placement, kept away from the ends by 2% of the span.
    const double u = std::fmod(0.5 + k * 0.6180339887498949, 1.0);
    const double s = lo + span * (0.02 + 0.96 * u);
    const double t = std::fmod(0.3 + k * 0.7548776662466927, 1.0) * kTwoPi;
    pts.push_back({s, t});
  }
  if (surface.is_catenoid() && count > 0) pts.front() = {0.0, 0.0};  // the waist
  return pts;
}

std::vector<SamplePoint> boundary_samples(const SurfaceModel& surface, int count) {
  std::vector<SamplePoint> pts;
  const auto ends = surface.boundary_parameters();
  for (int k = 0; k < count; ++k) {
    const double s = surface.boundary_count() == 2 ? ends[k % 2] : ends[1];
    pts.push_back({s, kTwoPi * (k + 0.25) / count});
  }
  return pts;
}

namespace {

// Second-order differences for the pointwise checks: central inside,
// one-sided (into the domain) at the boundary.
double central1(const std::function<double(double)>& g, double x, double d) {
  return (g(x + d) - g(x - d)) / (2 * d);
}
double central2(const std::function<double(double)>& g, double x, double d) {
  return (g(x + d) - 2 * g(x) + g(x - d)) / (d * d);
}
double inward1(const std::function<double(double)>& g, double x, double d) {
  return (-3 * g(x) + 4 * g(x + d) - g(x + 2 * d)) / (2 * d);
}

struct PointwiseResiduals {
  std::array<double, 5> worst{};
  std::array<double, 5> lhs{};
  std::array<double, 5> rhs{};
};

PointwiseResiduals pointwise_residuals(const SurfaceModel& surface, std::span<const SamplePoint> interior,
                               std::span<const SamplePoint> boundary, const Vec3& v, double step) {
  PointwiseResiduals out;
  auto record = [&](int item, double l, double r) {
    const double res = std::abs(l - r);
    if (res >= out.worst[item]) {
      out.worst[item] = res;
      out.lhs[item] = l;
      out.rhs[item] = r;
    }
  };
  auto x_dot_n = [&](double s, double t) {
    const GeometryAtPoint g = geometry_at(surface, s, t);
    return dot(g.x, g.normal);
  };
  auto v_dot_n = [&](double s, double t) { return normal_component(surface, v, s, t); };
  auto x_sq = [&](double s, double t) {
    const Vec3 x = surface.position(s, t);
    return dot(x, x);
  };

  for (const auto& p : interior) {
    const GeometryAtPoint g = geometry_at(surface, p.s, p.theta);
    const double len_s = norm(surface.d_s(p.s, p.theta));
    const double len_t = norm(surface.d_theta(p.s, p.theta));
    const auto xt = g.tangential(g.x);
    const auto vt = g.tangential(v);
    const std::array<std::array<double, 2>, 2> basis{{{1.0, 0.0}, {0.0, 1.0}}};
    for (int i = 0; i < 2; ++i) {
      auto along = [&](const std::function<double(double, double)>& f) {
        if (i == 0) return central1([&](double s) { return f(s, p.theta); }, p.s, step) / len_s;
        return central1([&](double t) { return f(p.s, t); }, p.theta, step) / len_t;
      };
      record(0, along(x_dot_n), -g.h(xt, basis[i]));
      record(1, along(v_dot_n), -g.h(vt, basis[i]));
    }
    const double fss = central2([&](double s) { return x_sq(s, p.theta); }, p.s, step);
    const double ftt = central2([&](double t) { return x_sq(p.s, t); }, p.theta, step);
    double lap;
    if (surface.is_catenoid()) {
      lap = -(fss + ftt) / surface.area_element(p.s);
    } else {
      const double fs = central1([&](double s) { return x_sq(s, p.theta); }, p.s, step);
      lap = -(fss + fs / p.s + ftt / (p.s * p.s));
    }
    record(2, lap, -4.0);
  }

  for (const auto& p : boundary) {
    const GeometryAtPoint g = geometry_at(surface, p.s, p.theta);
    const double scale = surface.conormal_scale(p.s);
    const double sign = scale < 0.0 ? -1.0 : 1.0;
    const double d = p.s >= surface.s_max() - 1e-12 ? -step : step;  // into the domain
    auto conormal = [&](const std::function<double(double, double)>& f) {
      // d/ds by a one-sided difference into the domain, scaled to d/dnu.
      return scale * inward1([&](double s) { return f(s, p.theta); }, p.s, d);
    };
    const std::array<double, 2> nu{sign, 0.0};
    const double hnn = g.h(nu, nu);
    record(3, conormal(x_dot_n), -hnn);
    record(4, conormal(v_dot_n), -sign * dot(v, g.e1) * hnn);
  }
  return out;
}

}  // namespace

std::vector<IdentityReport> check_pointwise_identities(const SurfaceModel& surface,
                                          std::span<const SamplePoint> interior,
                                          std::span<const SamplePoint> boundary, const Vec3& v) {
  static const char* names[5] = {"pointwise(i) e_i(x,N) = -h(x^T,e_i)",
                                 "pointwise(ii) e_i(v,N) = -h(v^T,e_i)",
                                 "pointwise(iii) Delta|x|^2 = -4",
                                 "pointwise(iv) nu(x,N) = -h(nu,nu)",
                                 "pointwise(v) nu(v,N) = -(v,nu)h(nu,nu)"};
  const double step = 1e-4;
  const PointwiseResiduals work = pointwise_residuals(surface, interior, boundary, v, step);
  const PointwiseResiduals r0 = pointwise_residuals(surface, interior, boundary, v, 1e-2);
  const PointwiseResiduals r1 = pointwise_residuals(surface, interior, boundary, v, 5e-3);
  const PointwiseResiduals r2 = pointwise_residuals(surface, interior, boundary, v, 2.5e-3);
  std::vector<IdentityReport> out;
  for (int k = 0; k < 5; ++k) {
    IdentityReport r;
    r.name = names[k];
    r.set_sides(work.lhs[k], work.rhs[k]);
    r.abs_residual = work.worst[k];
    r.rel_residual = relative(r.abs_residual, r.lhs, r.rhs);
    r.n = static_cast<int>(k < 3 ? interior.size() : boundary.size());
    // Round-off of the difference quotients at these steps stays below 1e-9.
    r.order = observed_order(r0.worst[k], r1.worst[k], r2.worst[k], 1e-9);
    out.push_back(std::move(r));
  }
  return out;
}

IdentityReport check_q1xi(const SurfaceModel& surface, int n) {
  if (!surface.is_catenoid()) throw std::invalid_argument("check_q1xi: catenoid only");
  ScalarField one;
  one.value = [](double, double) { return 1.0; };
  one.d_s = [](double, double) { return 0.0; };
  one.d_theta = [](double, double) { return 0.0; };
  const ScalarField xi = support_field(surface);
  IdentityReport report = refine("Q(1,xi)", n, [&](int grid) {
    constexpr int ntheta = 16;
    IdentityReport r;
    const double q = second_variation(surface, one, xi, grid, ntheta);
    double flux = 0.0;
    const double ht = kTwoPi / ntheta;
    for (double sb : surface.boundary_parameters()) {
      for (int j = 0; j < ntheta; ++j) {
        const double t = j * ht;
        flux += surface.conormal_scale(sb) * xi.ds(surface, sb, t) * ht *
                surface.boundary_length_element();
      }
    }
    r.set_sides(q, flux);
    r.terms = {{"Q(1,xi)", q}, {"int_bdry dxi/dnu", flux}};
    return r;
  });
  if (std::abs(report.lhs) < 1e-8) {
    throw std::domain_error("check_q1xi: Q(1,xi) within the guard band of zero");
  }
  return report;
}

IdentityReport check_xi_conormal(const SurfaceModel& surface,
                                 std::span<const SamplePoint> boundary) {
  const ScalarField xi = support_field(surface);
  IdentityReport r;
  r.name = "dxi/dnu = -h(nu,nu)";
  r.n = static_cast<int>(boundary.size());
  double worst = -1.0;
  for (const auto& p : boundary) {
    const GeometryAtPoint g = geometry_at(surface, p.s, p.theta);
    const double scale = surface.conormal_scale(p.s);
    const std::array<double, 2> nu{scale < 0.0 ? -1.0 : 1.0, 0.0};
    // h for the normal orientation in which xi is positive.
    const double hnn = support_orientation(surface) * g.h(nu, nu);
    const double lhs = scale * xi.ds(surface, p.s, p.theta);
    if (std::abs(lhs + hnn) > worst) {
      worst = std::abs(lhs + hnn);
      r.set_sides(lhs, -hnn);
    }
  }
  r.order = kInf;
  return r;
}

IdentityReport check_xi_orthogonality(const SurfaceModel& surface, const Vec3& v, int n) {
  const ScalarField vp = normal_component_field(surface, v);
  const ScalarField xi = support_field(surface);
  return refine("int xi v_perp", n, [&](int grid) {
    IdentityReport r;
    r.set_sides(surface_inner(surface, xi, vp, grid), 0.0);
    return r;
  });
}

std::vector<IdentityReport> check_coordinate_fields(const SurfaceModel& surface, int mmax, int n) {
  if (!surface.is_catenoid()) throw std::invalid_argument("check_coordinate_fields: catenoid only");
  constexpr int ntheta = 64;
  const std::array<std::pair<const char*, Vec3>, 3> vectors{
      {{"e_x", kUnitX}, {"e_y", kUnitY}, {"e_z", kUnitZ}}};
  std::vector<IdentityReport> out;
  std::vector<Sampled> vperp;
  for (const auto& [name, v] : vectors) {
    vperp.push_back(sample_field(surface, normal_component_field(surface, v), n, ntheta));
  }
  for (int m = 0; m <= mmax; ++m) {
    const HarmonicBasis basis = jharmonic_basis(surface, m, n);
    for (std::size_t k = 0; k < basis.dimension(); ++k) {
      for (int trig = 0; trig < (m == 0 ? 1 : 2); ++trig) {
        const bool sine = trig == 1;
        Sampled phi;
        phi.n = n;
        phi.ntheta = ntheta;
        const std::size_t size = basis.nodes.size() * ntheta;
        phi.value.resize(size);
        phi.ds.resize(size);
        phi.dtheta.resize(size);
        for (int i = 0; i <= n; ++i) {
          for (int j = 0; j < ntheta; ++j) {
            const double t = kTwoPi * j / ntheta;
            const double ang = sine ? std::sin(m * t) : std::cos(m * t);
            const double dang = sine ? m * std::cos(m * t) : -m * std::sin(m * t);
            phi.value[phi.at(i, j)] = basis.profile(k)[i] * ang;
            phi.ds[phi.at(i, j)] = basis.derivative(k)[i] * ang;
            phi.dtheta[phi.at(i, j)] = basis.profile(k)[i] * dang;
          }
        }
        for (std::size_t vi = 0; vi < vectors.size(); ++vi) {
          const Sampled& vp = vperp[vi];
          const double q = q_form(surface, vp, phi);
          const double l2 = inner(surface, n, ntheta, [&](int i, int j, double, double) {
            return vp.value[vp.at(i, j)] * phi.value[phi.at(i, j)];
          });
          IdentityReport r;
          r.name = std::string("coordinate[") + vectors[vi].first + ", m=" + std::to_string(m) +
                   (k == 0 ? " even" : " odd") + (sine ? " sin" : " cos") + "]";
          r.n = n;
          r.lhs = q;
          r.rhs = -2.0 * l2;
          r.abs_residual = std::abs(q + 2.0 * l2);
          r.rel_residual = r.abs_residual / (std::abs(q) + std::abs(l2) + 1.0);
          r.order = std::numeric_limits<double>::quiet_NaN();
          r.terms = {{"Q(v_perp,phi)", q}, {"int v_perp phi", l2}};
          out.push_back(std::move(r));
        }
      }
    }
  }
  return out;
}

}  // namespace fbms
