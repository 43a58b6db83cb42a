#include "fbms/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "parallel.hpp"

namespace fbms {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool nearly_equal(double x, double y) { return std::abs(x - y) <= 1e-9 * (1.0 + std::abs(x)); }

std::vector<double> simpson_weights(int n, double h) {
  if (n % 2 != 0) throw std::invalid_argument("Simpson rule needs an even number of intervals");
  std::vector<double> w(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    w[i] = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w[i] *= h / 3.0;
  }
  return w;
}

void check_grids(std::span<const int> grids) {
  if (grids.empty()) throw std::invalid_argument("at least one grid size is required");
  for (std::size_t i = 1; i < grids.size(); ++i) {
    if (grids[i] != 2 * grids[i - 1]) {
      throw std::invalid_argument("grid sizes must be successive doublings");
    }
  }
}

// Fixes the sign so that the entry of largest magnitude is positive.
void fix_sign(std::vector<double>& v) {
  if (v.empty()) return;
  const auto it = std::max_element(v.begin(), v.end(),
                                   [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*it < 0.0)
    for (double& c : v) c = -c;
}

ModeSeries solve_mode(const SurfaceModel& surface, int m, BoundaryCondition bc, int multiplicity,
                      const SpectralOptions& options) {
  ModeSeries series;
  series.mode = m;
  series.multiplicity = multiplicity;

  std::vector<DiscreteOperator> ops;
  std::vector<SymTridiagonal> normalized;
  int wanted = options.per_mode;
  int smallest = std::numeric_limits<int>::max();
  for (int n : options.grids) {
    ops.push_back(assemble({surface, m, bc, n}));
    normalized.push_back(ops.back().normalized());
    wanted = std::max(wanted, normalized.back().count_below(0.0) + 1);
    smallest = std::min(smallest, static_cast<int>(ops.back().size()));
  }
  wanted = std::min(wanted, smallest);

  for (std::size_t g = 0; g < ops.size(); ++g) {
    const bool finest = g + 1 == ops.size();
    SpectrumResult r = tridiagonal_lowest(normalized[g], wanted, finest);
    for (auto& y : r.eigenvectors) {
      for (std::size_t i = 0; i < y.size(); ++i) y[i] /= std::sqrt(ops[g].M[i]);
      fix_sign(y);
    }
    r.modes.assign(r.eigenvalues.size(), m);
    r.bc = to_string(bc);
    r.n = options.grids[g];
    series.per_grid.push_back(std::move(r));
  }

  series.extrapolated.resize(wanted);
  series.order.resize(wanted);
  for (int j = 0; j < wanted; ++j) {
    std::vector<double> values;
    for (const auto& r : series.per_grid) values.push_back(r.eigenvalues[j]);
    const Extrapolation e = richardson(values);
    series.extrapolated[j] = e.value;
    series.order[j] = e.order;
    series.per_grid.back().convergence[j] = e.order;
  }
  series.finest = std::move(ops.back());
  return series;
}

SpectrumResult combine(const std::vector<ModeSeries>& modes, const char* bc, int n) {
  struct Entry {
    double value;
    int mode;
    double order;
  };
  std::vector<Entry> entries;
  for (const auto& s : modes)
    for (std::size_t j = 0; j < s.extrapolated.size(); ++j)
      for (int k = 0; k < s.multiplicity; ++k)
        entries.push_back({s.extrapolated[j], s.mode, s.order[j]});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.value < b.value; });
  SpectrumResult out;
  out.bc = bc;
  out.n = n;
  for (const auto& e : entries) {
    out.eigenvalues.push_back(e.value);
    out.modes.push_back(e.mode);
    out.convergence.push_back(e.order);
  }
  return out;
}

AggregateSpectrum solve_problem(const SurfaceModel& surface, std::span<const int> modes,
                                BoundaryCondition bc, const SpectralOptions& options,
                                const char* name, bool radial) {
  check_grids(options.grids);
  if (modes.empty()) throw std::invalid_argument("no Fourier modes requested");
  AggregateSpectrum out;
  out.problem = name;
  out.surface = surface.kind();
  out.grids = options.grids;
  out.modes.resize(modes.size());
  detail::parallel_for(modes.size(), options.threads, [&](std::size_t i) {
    const int m = modes[i];
    if (m < 0) throw std::invalid_argument("negative Fourier mode");
    out.modes[i] = solve_mode(surface, m, bc, (radial || m == 0) ? 1 : 2, options);
  });
  out.combined = combine(out.modes, to_string(bc), options.grids.back());

  // Ground state: simple, from a single mode, one-signed on the finest grid.
  if (!out.combined.eigenvalues.empty()) {
    const auto& ev = out.combined.eigenvalues;
    const bool simple = ev.size() < 2 || !nearly_equal(ev[0], ev[1]);
    const ModeSeries& ground = out.mode(out.combined.modes[0]);
    const auto& v = ground.per_grid.back().eigenvectors.front();
    const double vmax = *std::max_element(v.begin(), v.end());
    const bool one_signed =
        std::all_of(v.begin(), v.end(), [&](double c) { return c > -1e-12 * vmax; });
    out.ground_state_positive = simple && one_signed && ground.multiplicity == 1;
  }
  return out;
}

}  // namespace

Extrapolation richardson(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("richardson: no values");
  if (values.size() == 1) return {values[0], kNaN};
  if (values.size() == 2) return {values[1] + (values[1] - values[0]) / 3.0, kNaN};
  const double v0 = values[values.size() - 3];
  const double v1 = values[values.size() - 2];
  const double v2 = values[values.size() - 1];
  const double r1a = v1 + (v1 - v0) / 3.0;
  const double r1b = v2 + (v2 - v1) / 3.0;
  const double d1 = v0 - v1;
  const double d2 = v1 - v2;
  double order = kNaN;
  if (d2 != 0.0 && d1 / d2 > 0.0) order = std::log2(d1 / d2);
  return {r1b + (r1b - r1a) / 15.0, order};
}

const ModeSeries& AggregateSpectrum::mode(int m) const {
  for (const auto& s : modes)
    if (s.mode == m) return s;
  throw std::out_of_range("AggregateSpectrum: mode not computed");
}

AggregateSpectrum robin_spectrum(const SurfaceModel& surface, std::span<const int> modes,
                                 const SpectralOptions& options) {
  return solve_problem(surface, modes, BoundaryCondition::robin, options, "robin", false);
}

AggregateSpectrum dirichlet_spectrum(const SurfaceModel& surface, std::span<const int> modes,
                                     const SpectralOptions& options) {
  return solve_problem(surface, modes, BoundaryCondition::dirichlet, options, "dirichlet", false);
}

AggregateSpectrum radial_robin_spectrum(const SurfaceModel& surface, RadialOperator op,
                                        const SpectralOptions& options) {
  if (!surface.is_catenoid()) {
    throw std::invalid_argument("radial_robin_spectrum: catenoid only");
  }
  const int mode = op == RadialOperator::L0 ? 0 : 1;
  const int modes[] = {mode};
  return solve_problem(surface, modes, BoundaryCondition::robin, options,
                       op == RadialOperator::L0 ? "radial-L0" : "radial-L1", true);
}

std::vector<double> HarmonicBasis::wronskian() const {
  std::vector<double> w(nodes.size(), kNaN);
  if (odd.empty()) return w;
  for (std::size_t i = 0; i < nodes.size(); ++i) w[i] = even[i] * odd_ds[i] - even_ds[i] * odd[i];
  return w;
}

namespace {

// Classical RK4 for u'' = q(s) u from s = 0 outwards in both directions.
void integrate_radial(const SurfaceModel& surface, int m, int n, double u0, double du0,
                      std::vector<double>& u, std::vector<double>& du) {
  const auto nodes = uniform_nodes(surface, n);
  const double h = nodes[1] - nodes[0];
  auto q = [m](double s) {
    const double sech = 1.0 / std::cosh(s);
    return m * m - 2.0 * sech * sech;
  };
  u.assign(nodes.size(), 0.0);
  du.assign(nodes.size(), 0.0);
  const int mid = n / 2;
  u[mid] = u0;
  du[mid] = du0;
  auto step = [&](double s, double y, double yp, double dt, double& y1, double& yp1) {
    const double k1y = yp, k1p = q(s) * y;
    const double k2y = yp + 0.5 * dt * k1p, k2p = q(s + 0.5 * dt) * (y + 0.5 * dt * k1y);
    const double k3y = yp + 0.5 * dt * k2p, k3p = q(s + 0.5 * dt) * (y + 0.5 * dt * k2y);
    const double k4y = yp + dt * k3p, k4p = q(s + dt) * (y + dt * k3y);
    y1 = y + dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    yp1 = yp + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  };
  for (int i = mid; i < n; ++i) step(nodes[i], u[i], du[i], h, u[i + 1], du[i + 1]);
  for (int i = mid; i > 0; --i) step(nodes[i], u[i], du[i], -h, u[i - 1], du[i - 1]);
}

double normalize_sup(std::vector<double>& u, std::vector<double>& du) {
  double mx = 0.0;
  for (double v : u) mx = std::max(mx, std::abs(v));
  const double scale = 1.0 / mx;
  for (double& v : u) v *= scale;
  for (double& v : du) v *= scale;
  return scale;
}

}  // namespace

HarmonicBasis jharmonic_basis(const SurfaceModel& surface, int m, int n) {
  if (m < 0) throw std::invalid_argument("jharmonic_basis: negative mode");
  if (n < 16 || n % 2 != 0) throw std::invalid_argument("jharmonic_basis: n must be even, >= 16");
  HarmonicBasis b;
  b.mode = m;
  b.nodes = uniform_nodes(surface, n);
  if (!surface.is_catenoid()) return harmonic_basis(surface, m, n);

  const double growth = m * surface.constants().T;
  if (growth > 0.5 * std::log(std::numeric_limits<double>::max())) {
    throw std::overflow_error("jharmonic_basis: mode too large for the floating range");
  }
  integrate_radial(surface, m, n, 1.0, 0.0, b.even, b.even_ds);
  integrate_radial(surface, m, n, 0.0, 1.0, b.odd, b.odd_ds);
  b.even_scale = normalize_sup(b.even, b.even_ds);
  b.odd_scale = normalize_sup(b.odd, b.odd_ds);
  return b;
}

HarmonicBasis harmonic_basis(const SurfaceModel& surface, int m, int n) {
  if (m < 0) throw std::invalid_argument("harmonic_basis: negative mode");
  if (n < 16 || n % 2 != 0) throw std::invalid_argument("harmonic_basis: n must be even, >= 16");
  HarmonicBasis b;
  b.mode = m;
  b.nodes = uniform_nodes(surface, n);
  const std::size_t count = b.nodes.size();
  b.even.resize(count);
  b.even_ds.resize(count);
  if (!surface.is_catenoid()) {
    for (std::size_t i = 0; i < count; ++i) {
      const double r = b.nodes[i];
      b.even[i] = std::pow(r, m);
      b.even_ds[i] = m == 0 ? 0.0 : m * std::pow(r, m - 1);
    }
    return b;
  }
  b.odd.resize(count);
  b.odd_ds.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double s = b.nodes[i];
    if (m == 0) {
      b.even[i] = 1.0;
      b.even_ds[i] = 0.0;
      b.odd[i] = s;
      b.odd_ds[i] = 1.0;
    } else {
      b.even[i] = std::cosh(m * s);
      b.even_ds[i] = m * std::sinh(m * s);
      b.odd[i] = std::sinh(m * s);
      b.odd_ds[i] = m * std::cosh(m * s);
    }
  }
  b.even_scale = normalize_sup(b.even, b.even_ds);
  b.odd_scale = normalize_sup(b.odd, b.odd_ds);
  return b;
}

Matrix BasisForms::Q() const {
  Matrix q = energy;
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j) q(i, j) -= boundary(i, j);
  return q;
}

BasisForms basis_forms(const SurfaceModel& surface, const HarmonicBasis& basis,
                       bool with_potential) {
  const std::size_t dim = basis.dimension();
  const int n = static_cast<int>(basis.nodes.size()) - 1;
  const double h = basis.nodes[1] - basis.nodes[0];
  const auto w = simpson_weights(n, h);
  const int m = basis.mode;
  const double c = mode_factor(m);

  BasisForms f{Matrix(dim, dim), Matrix(dim, dim), Matrix(dim, dim)};
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      const auto pa = basis.profile(a), pb = basis.profile(b);
      const auto da = basis.derivative(a), db = basis.derivative(b);
      double energy = 0.0, interior = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double s = basis.nodes[i];
        const double area = surface.area_element(s);
        double integrand;
        if (surface.is_catenoid()) {
          const double V = with_potential ? surface.weighted_potential(s) : 0.0;
          integrand = da[i] * db[i] + (m * m - V) * pa[i] * pb[i];
        } else {
          const double angular = (s > 0.0) ? m * m * pa[i] * pb[i] / (s * s) : 0.0;
          integrand = (da[i] * db[i] + angular) * s;
        }
        energy += w[i] * integrand;
        interior += w[i] * area * pa[i] * pb[i];
      }
      double bdry = 0.0;
      const double len = surface.boundary_length_element();
      bdry += len * pa[n] * pb[n];
      if (surface.boundary_count() == 2) bdry += len * pa[0] * pb[0];
      f.energy(a, b) = c * energy;
      f.interior(a, b) = c * interior;
      f.boundary(a, b) = c * bdry;
    }
  }
  return f;
}

namespace {

// Generalized eigenvalues of E c = sigma B c for 1x1 or 2x2 forms, with a
// singular B handled on the quotient by its kernel.
SteklovMode steklov_mode(const BasisForms& forms, int mode) {
  SteklovMode out;
  out.mode = mode;
  out.multiplicity = mode == 0 ? 1 : 2;
  const Matrix& E = forms.energy;
  const Matrix& B = forms.boundary;
  const std::size_t dim = E.rows();
  const SpectrumResult bs = sym_eig(B);
  const double bmax = std::max(std::abs(bs.eigenvalues.front()), std::abs(bs.eigenvalues.back()));
  if (!(bmax > 0.0)) throw std::domain_error("steklov_spectrum: boundary Gram matrix vanishes");

  if (bs.eigenvalues.front() > 1e-10 * bmax) {
    out.sigma = sym_generalized_eig(E, B, false).eigenvalues;
    return out;
  }
  if (dim < 2) throw std::domain_error("steklov_spectrum: degenerate boundary Gram matrix");
  // Quotient: k spans ker B; the eigenfunction c + t k is E-orthogonal to k.
  out.degenerate_boundary = true;
  const auto& k = bs.eigenvectors[0];
  const auto& c = bs.eigenvectors[1];
  auto form = [&](const Matrix& A, const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) s += x[i] * A(i, j) * y[j];
    return s;
  };
  const double ekk = form(E, k, k);
  const double eck = form(E, c, k);
  const double scale = std::abs(form(E, c, c)) + std::abs(ekk) + 1e-300;
  std::vector<double> u = c;
  if (std::abs(ekk) > 1e-10 * scale) {
    for (std::size_t i = 0; i < dim; ++i) u[i] -= eck / ekk * k[i];
  } else if (std::abs(eck) > 1e-8 * scale) {
    throw std::domain_error("steklov_spectrum: boundary problem not solvable on the quotient");
  }
  out.sigma = {form(E, u, u) / form(B, u, u)};
  return out;
}

}  // namespace

SteklovSpectrum steklov_spectrum(const SurfaceModel& surface, SteklovOperator op,
                                 std::span<const int> modes, int n) {
  SteklovSpectrum out;
  out.op = op;
  out.min_boundary_quotient = std::numeric_limits<double>::infinity();
  for (int m : modes) {
    const HarmonicBasis basis = op == SteklovOperator::jacobi ? jharmonic_basis(surface, m, n)
                                                              : harmonic_basis(surface, m, n);
    const BasisForms forms = basis_forms(surface, basis, op == SteklovOperator::jacobi);
    SteklovMode sm = steklov_mode(forms, m);
    for (double s : sm.sigma) out.min_boundary_quotient = std::min(out.min_boundary_quotient, s - 1.0);
    out.modes.push_back(std::move(sm));
  }
  struct Entry {
    double sigma;
    int mode;
  };
  std::vector<Entry> entries;
  for (const auto& sm : out.modes)
    for (double s : sm.sigma)
      for (int k = 0; k < sm.multiplicity; ++k) entries.push_back({s, sm.mode});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.sigma < b.sigma; });
  out.combined.bc = op == SteklovOperator::jacobi ? "steklov-jacobi" : "steklov-laplacian";
  out.combined.n = n;
  for (const auto& e : entries) {
    out.combined.eigenvalues.push_back(e.sigma);
    out.combined.modes.push_back(e.mode);
    out.combined.convergence.push_back(kNaN);
  }
  return out;
}

NonlocalSpectrum nonlocal_spectrum(const SurfaceModel& surface, int mmax, int n, int threads) {
  if (mmax < 0) throw std::invalid_argument("nonlocal_spectrum: negative mode count");
  NonlocalSpectrum out;
  out.mmax = mmax;
  out.n = n;
  out.modes.resize(static_cast<std::size_t>(mmax) + 1);
  detail::parallel_for(out.modes.size(), threads, [&](std::size_t i) {
    const int m = static_cast<int>(i);
    NonlocalMode nm;
    nm.mode = m;
    nm.multiplicity = m == 0 ? 1 : 2;
    const HarmonicBasis basis = jharmonic_basis(surface, m, n);
    nm.forms = basis_forms(surface, basis, true);
    nm.Q = nm.forms.Q();
    nm.gram = nm.forms.interior;
    const SpectrumResult gs = sym_eig(nm.gram, false);
    if (!(gs.eigenvalues.front() > 1e-12 * gs.eigenvalues.back())) {
      throw std::domain_error("nonlocal_spectrum: Gram matrix is numerically singular");
    }
    nm.spectrum = sym_generalized_eig(nm.Q, nm.gram, true);
    nm.spectrum.modes.assign(nm.spectrum.eigenvalues.size(), m);
    nm.spectrum.bc = "nonlocal";
    nm.spectrum.n = n;
    out.modes[i] = std::move(nm);
  });

  struct Entry {
    double mu;
    int mode;
  };
  std::vector<Entry> entries;
  for (const auto& nm : out.modes)
    for (double mu : nm.spectrum.eigenvalues)
      for (int k = 0; k < nm.multiplicity; ++k) entries.push_back({mu, nm.mode});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.mu < b.mu; });
  out.combined.bc = "nonlocal";
  out.combined.n = n;
  for (const auto& e : entries) {
    out.combined.eigenvalues.push_back(e.mu);
    out.combined.modes.push_back(e.mode);
    out.combined.convergence.push_back(kNaN);
  }
  return out;
}

IndexReport classify_against(const AggregateSpectrum& spectrum, double threshold, double guard) {
  IndexReport report;
  report.threshold = threshold;
  report.count_certified = true;
  for (const auto& series : spectrum.modes) {
    for (std::size_t j = 0; j < series.extrapolated.size(); ++j) {
      const double value = series.extrapolated[j];
      if (std::abs(value - threshold) > guard) {
        if (value < threshold) report.index += series.multiplicity;
        continue;
      }
      std::vector<double> dist;
      for (const auto& r : series.per_grid) dist.push_back(std::abs(r.eigenvalues[j] - threshold));
      // Round-off level of the bisection on the finest grids (entries up to ~1/h^2).
      const double tol = 1e-8 * (1.0 + std::abs(threshold));
      bool converges = std::all_of(dist.begin(), dist.end(), [&](double d) { return d <= tol; });
      if (!converges && dist.size() >= 2) {
        converges = true;
        for (std::size_t g = 1; g < dist.size(); ++g) {
          if (!(dist[g] < dist[g - 1]) || std::log2(dist[g - 1] / dist[g]) < 1.5) converges = false;
        }
      }
      if (converges) {
        report.nullity += series.multiplicity;
      } else {
        report.count_certified = false;
        if (value < threshold) report.index += series.multiplicity;
      }
    }
  }
  // Every mode must resolve at least one eigenvalue above the threshold.
  for (const auto& series : spectrum.modes) {
    if (series.extrapolated.empty() || series.extrapolated.back() < threshold + guard) {
      report.count_certified = false;
    }
  }
  return report;
}

IndexReport morse_index(const SurfaceModel& surface, int mmax, const SpectralOptions& options,
                        double guard, double threshold) {
  if (mmax < 1) throw std::invalid_argument("morse_index: need at least modes 0 and 1");
  std::vector<int> modes(static_cast<std::size_t>(mmax) + 1);
  std::iota(modes.begin(), modes.end(), 0);
  AggregateSpectrum spectrum = robin_spectrum(surface, modes, options);
  IndexReport report = classify_against(spectrum, threshold, guard);
  const double low_prev = spectrum.mode(mmax - 1).extrapolated.front();
  const double low_last = spectrum.mode(mmax).extrapolated.front();
  report.tail_certified = low_prev > threshold + guard && low_last > low_prev;
  report.certified = report.count_certified && report.tail_certified;
  report.spectrum = std::move(spectrum);
  return report;
}

}  // namespace fbms
