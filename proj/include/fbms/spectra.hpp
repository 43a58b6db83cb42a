#pragma once

// Eigenvalue problems of the Jacobi operator on the model surfaces:
// Robin (the index problem), Dirichlet, radial Robin problems for the
// mode-0 and mode-1 operators, Steklov (Laplacian and Jacobi), the Morse
// index, and the non-local operator obtained by restricting the second
// variation form to J-harmonic functions.
//
// Grid-based problems are solved on a sequence of successively doubled
// grids and Richardson-extrapolated (error expansion in h^2, h^4).

#include <span>
#include <string>
#include <vector>

#include "fbms/discretize.hpp"
#include "fbms/eigensolve.hpp"
#include "fbms/geometry.hpp"

namespace fbms {

struct Extrapolation {
  double value = 0.0;
  double order = 0.0;  ///< observed order, NaN when fewer than three values
};

/// `values` on grids h, h/2, h/4, ... (at most three are used: the last
/// three).
Extrapolation richardson(std::span<const double> values);

struct SpectralOptions {
  std::vector<int> grids{512, 1024, 2048};  ///< successive doublings
  int per_mode = 6;                         ///< eigenvalues tracked per mode
  int threads = 1;
};

/// Eigenvalues of one Fourier mode across the grid sequence.
struct ModeSeries {
  int mode = 0;
  int multiplicity = 1;  ///< 2 for m >= 1 (cos and sin)
  std::vector<SpectrumResult> per_grid;  ///< eigenvectors on the finest grid only
  std::vector<double> extrapolated;
  std::vector<double> order;
  DiscreteOperator finest;  ///< operator on the finest grid
};

struct AggregateSpectrum {
  std::string problem;
  SurfaceKind surface = SurfaceKind::catenoid;
  std::vector<int> grids;
  std::vector<ModeSeries> modes;
  /// Extrapolated eigenvalues, ascending, repeated by multiplicity, with
  /// mode labels and observed orders in `convergence`.
  SpectrumResult combined;
  /// Lowest eigenvalue simple with a one-signed eigenfunction.
  bool ground_state_positive = false;

  const ModeSeries& mode(int m) const;
};

AggregateSpectrum robin_spectrum(const SurfaceModel& surface, std::span<const int> modes,
                                 const SpectralOptions& options = {});

AggregateSpectrum dirichlet_spectrum(const SurfaceModel& surface, std::span<const int> modes,
                                     const SpectralOptions& options = {});

/// L0 is the mode-0 reduction of J, L1 = L0 + 1/(a^2 cosh^2 s) the mode-1
/// reduction; both with du/ds = +-u/T at s = +-T. Catenoid only.
enum class RadialOperator { L0, L1 };
AggregateSpectrum radial_robin_spectrum(const SurfaceModel& surface, RadialOperator op,
                                        const SpectralOptions& options = {});

/// Two independent solutions of the mode-m radial equation, sampled with
/// their s-derivatives on uniform_nodes(surface, n).
///
/// Catenoid: -u'' + (m^2 - 2 sech^2 s) u = 0 with even (u(0)=1, u'(0)=0) and
/// odd (u(0)=0, u'(0)=1) data, classical RK4, rescaled to unit sup-norm.
/// Disk: r^m only (the second solution is singular at the axis).
struct HarmonicBasis {
  int mode = 0;
  std::vector<double> nodes;
  std::vector<double> even, even_ds;
  std::vector<double> odd, odd_ds;  ///< empty on the disk
  double even_scale = 1.0;          ///< factor applied by the normalization
  double odd_scale = 1.0;

  std::size_t dimension() const { return odd.empty() ? 1 : 2; }
  std::span<const double> profile(std::size_t k) const { return k == 0 ? even : odd; }
  std::span<const double> derivative(std::size_t k) const { return k == 0 ? even_ds : odd_ds; }
  /// even * odd' - even' * odd at every node.
  std::vector<double> wronskian() const;
};

/// J-harmonic basis; n must be even and >= 16. Throws std::overflow_error if
/// e^{mT} would leave the floating range.
HarmonicBasis jharmonic_basis(const SurfaceModel& surface, int m, int n);

/// Laplace-harmonic basis (closed form): catenoid {1, s} for m = 0 and
/// {cosh ms, sinh ms} otherwise; disk {r^m}.
HarmonicBasis harmonic_basis(const SurfaceModel& surface, int m, int n);

/// Per-mode Gram matrices of a basis, by composite Simpson quadrature:
///   energy   c_m int (phi_i' phi_j' + (m^2 - V) phi_i phi_j) ds  (V = |A|^2 dA/ds)
///   boundary c_m sum over boundary circles of len * phi_i phi_j
///   interior c_m int phi_i phi_j dA
/// so that Q = energy - boundary. On the disk the radial weight is included.
struct BasisForms {
  Matrix energy;
  Matrix boundary;
  Matrix interior;
  Matrix Q() const;
};
BasisForms basis_forms(const SurfaceModel& surface, const HarmonicBasis& basis,
                       bool with_potential = true);

enum class SteklovOperator { laplacian, jacobi };

struct SteklovMode {
  int mode = 0;
  int multiplicity = 1;
  std::vector<double> sigma;        ///< ascending
  bool degenerate_boundary = false; ///< boundary Gram singular; solved on the quotient
};

struct SteklovSpectrum {
  SteklovOperator op = SteklovOperator::laplacian;
  std::vector<SteklovMode> modes;
  SpectrumResult combined;  ///< sigma values repeated by multiplicity
  /// Jacobi only: min over the computed basis of Q(u)/int_bdry u^2 (= sigma_1 - 1).
  double min_boundary_quotient = 0.0;
};

SteklovSpectrum steklov_spectrum(const SurfaceModel& surface, SteklovOperator op,
                                 std::span<const int> modes, int n);

struct NonlocalMode {
  int mode = 0;
  int multiplicity = 1;
  BasisForms forms;
  Matrix Q;              ///< Q(phi_i, phi_j)
  Matrix gram;           ///< int phi_i phi_j
  SpectrumResult spectrum;  ///< eigenvalues and G-orthonormal coefficient vectors
};

struct NonlocalSpectrum {
  int mmax = 0;
  int n = 0;
  std::vector<NonlocalMode> modes;
  SpectrumResult combined;  ///< mu_0 <= mu_1 <= ..., repeated by multiplicity

  const NonlocalMode& mode(int m) const { return modes.at(static_cast<std::size_t>(m)); }
};

/// Throws std::domain_error if a Gram matrix is numerically singular.
NonlocalSpectrum nonlocal_spectrum(const SurfaceModel& surface, int mmax, int n, int threads = 1);

struct IndexReport {
  int index = 0;            ///< eigenvalues certified below the threshold
  int nullity = 0;          ///< eigenvalues certified to converge to the threshold
  bool count_certified = false;
  bool tail_certified = false;
  bool certified = false;
  double threshold = 0.0;
  AggregateSpectrum spectrum;
};

/// Kernel-aware counting on an aggregate spectrum. An eigenvalue whose
/// extrapolation lies within `guard` of the threshold is counted in the
/// nullity when its grid sequence converges to the threshold (all values
/// within 1e-8, the round-off level of the finest grids, or distances
/// shrinking with observed order >= 1.5); otherwise the count is not
/// certified.
IndexReport classify_against(const AggregateSpectrum& spectrum, double threshold, double guard);

/// Robin eigenvalues below `threshold` over modes 0..mmax. The tail is
/// certified when the lowest eigenvalues of modes mmax-1 and mmax are above
/// threshold + guard and increasing.
IndexReport morse_index(const SurfaceModel& surface, int mmax, const SpectralOptions& options,
                        double guard = 1e-6, double threshold = 0.0);

}  // namespace fbms
