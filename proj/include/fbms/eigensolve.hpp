#pragma once

// Dense symmetric and symmetric-definite eigenvalue solvers.
//
//  * sym_eig: Householder reduction to tridiagonal form followed by the
//    implicit-shift QL iteration.
//  * sym_generalized_eig: Cholesky congruence M = L L^T, then sym_eig on
//    L^-1 K L^-T.
//  * SymTridiagonal: Sturm-sequence bisection and inverse iteration for the
//    lowest part of a large tridiagonal spectrum.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fbms {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transpose() const;
  double frobenius_norm() const;
  /// max |A_ij - A_ji| / max(1, max |A_ij|)
  double asymmetry() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend std::vector<double> operator*(const Matrix& a, std::span<const double> x);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Ascending eigenvalues with optional eigenvectors. For generalized problems
/// the eigenvectors are M-orthonormal.
struct SpectrumResult {
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;
  std::vector<int> modes;          ///< Fourier mode label per eigenvalue (-1: none)
  std::string bc;                  ///< boundary condition label
  int n = 0;                       ///< grid size
  std::vector<double> convergence; ///< per-eigenvalue convergence estimate (NaN: none)
};

/// Throws std::invalid_argument if A is not symmetric to 1e-12 relative.
SpectrumResult sym_eig(const Matrix& A, bool want_vectors = true);

/// Solves K v = lambda M v. Throws std::domain_error when M has no Cholesky
/// factor.
SpectrumResult sym_generalized_eig(const Matrix& K, const Matrix& M, bool want_vectors = true);

/// Lower-triangular L with M = L L^T; throws std::domain_error if M is not
/// positive definite.
Matrix cholesky(const Matrix& M);

/// Symmetric tridiagonal matrix: diag[0..n), off[i] couples i and i+1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }
  /// Number of eigenvalues strictly below x (Sylvester inertia via LDL^T).
  int count_below(double x) const;
  /// Gershgorin enclosure of the spectrum.
  std::pair<double, double> gershgorin() const;
  Matrix to_dense() const;
};

/// The `count` smallest eigenvalues by bisection, and their eigenvectors by
/// inverse iteration when requested (orthonormal).
SpectrumResult tridiagonal_lowest(const SymTridiagonal& A, int count, bool want_vectors = true);

/// All eigenvalues of a tridiagonal matrix by implicit QL (no vectors).
std::vector<double> tridiagonal_eigenvalues(const SymTridiagonal& A);

struct CountResult {
  int count = 0;
  bool certified = true;
};

/// Number of eigenvalues below `threshold`; not certified if any eigenvalue
/// lies within `guard` of the threshold.
CountResult count_below(const SpectrumResult& spectrum, double threshold, double guard);
CountResult count_below(std::span<const double> eigenvalues, double threshold, double guard);

}  // namespace fbms
