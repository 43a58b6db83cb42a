#include "fbms/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fbms {

Matrix Matrix::identity(std::size_t n) {
  Matrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix D(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) D(i, i) = d[i];
  return D;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double Matrix::asymmetry() const {
  if (rows_ != cols_) return std::numeric_limits<double>::infinity();
  double scale = 1.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      scale = std::max(scale, std::abs((*this)(i, j)));
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    }
  }
  return worst / scale;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix product: shape mismatch");
  Matrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols_ != x.size()) throw std::invalid_argument("Matrix-vector product: shape mismatch");
  std::vector<double> y(a.rows_, 0.0);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
  return y;
}

namespace {

// Householder reduction of the symmetric matrix held in V (row-major, n x n)
// to tridiagonal form. On return d holds the diagonal, e[1..n) the
// subdiagonal (e[0] = 0) and V the accumulated orthogonal transformation.
void householder_tridiagonalize(std::size_t n, std::vector<double>& V, std::vector<double>& d,
                                std::vector<double>& e) {
  auto v = [&](std::size_t i, std::size_t j) -> double& { return V[i * n + j]; };
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  // Accumulate transformations.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e) with e[1..n) the subdiagonal.
// When V is non-null the rotations are accumulated into it (columns are
// eigenvectors on return).
void implicit_ql(std::size_t n, std::vector<double>& d, std::vector<double>& e,
                 std::vector<double>* V) {
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m == n) m = n - 1;

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 60) throw std::runtime_error("implicit_ql: no convergence");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          const std::size_t i = ii;
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          if (V != nullptr) {
            auto& v = *V;
            for (std::size_t k = 0; k < n; ++k) {
              h = v[k * n + i + 1];
              v[k * n + i + 1] = s * v[k * n + i] + c * h;
              v[k * n + i] = c * v[k * n + i] - s * h;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] = d[l] + f;
    e[l] = 0.0;
  }
}

}  // namespace

SpectrumResult sym_eig(const Matrix& A, bool want_vectors) {
  if (A.rows() != A.cols()) throw std::invalid_argument("sym_eig: matrix is not square");
  if (A.asymmetry() > 1e-12) throw std::invalid_argument("sym_eig: matrix is not symmetric");
  const std::size_t n = A.rows();
  SpectrumResult out;
  out.n = static_cast<int>(n);
  if (n == 0) return out;

  std::vector<double> V(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) V[i * n + j] = 0.5 * (A(i, j) + A(j, i));
  std::vector<double> d(n), e(n);
  householder_tridiagonalize(n, V, d, e);
  implicit_ql(n, d, e, want_vectors ? &V : nullptr);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return d[i] < d[j]; });

  out.eigenvalues.reserve(n);
  for (auto k : order) out.eigenvalues.push_back(d[k]);
  if (want_vectors) {
    out.eigenvectors.reserve(n);
    for (auto k : order) {
      std::vector<double> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = V[i * n + k];
      out.eigenvectors.push_back(std::move(col));
    }
  }
  out.modes.assign(n, -1);
  out.convergence.assign(n, std::numeric_limits<double>::quiet_NaN());
  return out;
}

Matrix cholesky(const Matrix& M) {
  const std::size_t n = M.rows();
  if (M.cols() != n) throw std::invalid_argument("cholesky: matrix is not square");
  Matrix L(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = M(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= L(j, k) * L(j, k);
    if (!(diag > 0.0)) throw std::domain_error("cholesky: matrix is not positive definite");
    L(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = M(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= L(i, k) * L(j, k);
      L(i, j) = v / L(j, j);
    }
  }
  return L;
}

SpectrumResult sym_generalized_eig(const Matrix& K, const Matrix& M, bool want_vectors) {
  const std::size_t n = K.rows();
  if (K.cols() != n || M.rows() != n || M.cols() != n) {
    throw std::invalid_argument("sym_generalized_eig: shape mismatch");
  }
  if (K.asymmetry() > 1e-12 || M.asymmetry() > 1e-12) {
    throw std::invalid_argument("sym_generalized_eig: matrices must be symmetric");
  }
  const Matrix L = cholesky(M);

  // C = L^-1 K L^-T by two triangular solves.
  Matrix Y(n, n);  // Y = L^-1 K
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = K(i, c);
      for (std::size_t k = 0; k < i; ++k) v -= L(i, k) * Y(k, c);
      Y(i, c) = v / L(i, i);
    }
  }
  Matrix C(n, n);  // C^T = L^-1 Y^T
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = Y(r, i);
      for (std::size_t k = 0; k < i; ++k) v -= L(i, k) * C(r, k);
      C(r, i) = v / L(i, i);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double avg = 0.5 * (C(i, j) + C(j, i));
      C(i, j) = avg;
      C(j, i) = avg;
    }

  SpectrumResult out = sym_eig(C, want_vectors);
  for (auto& y : out.eigenvectors) {
    // v = L^-T y
    std::vector<double> v(n);
    for (std::size_t ii = n; ii-- > 0;) {
      double s = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) s -= L(k, ii) * v[k];
      v[ii] = s / L(ii, ii);
    }
    y = std::move(v);
  }
  return out;
}

int SymTridiagonal::count_below(double x) const {
  const std::size_t n = diag.size();
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
    q = diag[i] - x - (i == 0 ? 0.0 : b2 / q);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

std::pair<double, double> SymTridiagonal::gershgorin() const {
  const std::size_t n = diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < n) r += std::abs(off[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  return {lo, hi};
}

Matrix SymTridiagonal::to_dense() const {
  const std::size_t n = diag.size();
  Matrix A(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    A(i, i) = diag[i];
    if (i + 1 < n) {
      A(i, i + 1) = off[i];
      A(i + 1, i) = off[i];
    }
  }
  return A;
}

namespace {

// Solves (A - shift I) x = b for tridiagonal A with partial pivoting. Exact
// zero pivots are replaced by a tiny value, as usual for inverse iteration.
std::vector<double> shifted_tridiagonal_solve(const SymTridiagonal& A, double shift,
                                              std::vector<double> b, double tiny) {
  const std::size_t n = A.size();
  // Row i holds entries in columns i, i+1, i+2 after elimination.
  std::vector<double> u0(n), u1(n, 0.0), u2(n, 0.0);
  std::vector<double> sub(n, 0.0);  // subdiagonal of the active row
  for (std::size_t i = 0; i < n; ++i) {
    u0[i] = A.diag[i] - shift;
    if (i + 1 < n) u1[i] = A.off[i];
    if (i > 0) sub[i] = A.off[i - 1];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // Rows i and i+1; the pivot candidates are u0[i] and sub[i+1].
    if (std::abs(sub[i + 1]) > std::abs(u0[i])) {
      std::swap(u0[i], sub[i + 1]);
      std::swap(u1[i], u0[i + 1]);
      std::swap(u2[i], u1[i + 1]);
      std::swap(b[i], b[i + 1]);
    }
    if (u0[i] == 0.0) u0[i] = tiny;
    const double factor = sub[i + 1] / u0[i];
    u0[i + 1] -= factor * u1[i];
    u1[i + 1] -= factor * u2[i];
    b[i + 1] -= factor * b[i];
  }
  if (u0[n - 1] == 0.0) u0[n - 1] = tiny;
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    if (ii + 1 < n) s -= u1[ii] * x[ii + 1];
    if (ii + 2 < n) s -= u2[ii] * x[ii + 2];
    x[ii] = s / u0[ii];
  }
  return x;
}

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  s = std::sqrt(s);
  for (double& c : v) c /= s;
}

}  // namespace

SpectrumResult tridiagonal_lowest(const SymTridiagonal& A, int count, bool want_vectors) {
  const std::size_t n = A.size();
  if (A.off.size() + 1 != n && n > 0) {
    throw std::invalid_argument("tridiagonal_lowest: off-diagonal length must be n-1");
  }
  count = std::clamp(count, 0, static_cast<int>(n));
  SpectrumResult out;
  out.n = static_cast<int>(n);
  if (count == 0) return out;

  auto [lo0, hi0] = A.gershgorin();
  const double scale = std::max(std::abs(lo0), std::abs(hi0));
  const double eps = std::numeric_limits<double>::epsilon();
  lo0 -= 2.0 * eps * scale + 1e-300;
  hi0 += 2.0 * eps * scale + 1e-300;

  out.eigenvalues.resize(count);
  for (int k = 0; k < count; ++k) {
    // k-th eigenvalue: smallest x with count_below(x) > k.
    double lo = k > 0 ? out.eigenvalues[k - 1] - 4.0 * eps * scale : lo0;
    double hi = hi0;
    lo = std::max(lo, lo0);
    if (A.count_below(lo) > k) lo = lo0;
    while (hi - lo > 2.0 * eps * std::max(std::abs(lo), std::abs(hi)) + 1e-300) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (A.count_below(mid) > k) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out.eigenvalues[k] = 0.5 * (lo + hi);
  }

  if (want_vectors) {
    const double tiny = eps * scale;
    out.eigenvectors.reserve(count);
    for (int k = 0; k < count; ++k) {
      const double lambda = out.eigenvalues[k];
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.01 * static_cast<double>((i * 7919) % 101) / 101.0;
      normalize(x);
      for (int it = 0; it < 3; ++it) {
        x = shifted_tridiagonal_solve(A, lambda, x, tiny);
        // Orthogonalize against vectors of nearby eigenvalues.
        for (int j = 0; j < k; ++j) {
          if (std::abs(out.eigenvalues[j] - lambda) > 1e-8 * std::max(1.0, std::abs(lambda)))
            continue;
          const auto& q = out.eigenvectors[j];
          const double c = std::inner_product(x.begin(), x.end(), q.begin(), 0.0);
          for (std::size_t i = 0; i < n; ++i) x[i] -= c * q[i];
        }
        normalize(x);
      }
      out.eigenvectors.push_back(std::move(x));
    }
  }
  out.modes.assign(count, -1);
  out.convergence.assign(count, std::numeric_limits<double>::quiet_NaN());
  return out;
}

std::vector<double> tridiagonal_eigenvalues(const SymTridiagonal& A) {
  const std::size_t n = A.size();
  if (n == 0) return {};
  std::vector<double> d = A.diag;
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) e[i] = A.off[i - 1];
  implicit_ql(n, d, e, nullptr);
  std::sort(d.begin(), d.end());
  return d;
}

CountResult count_below(std::span<const double> eigenvalues, double threshold, double guard) {
  CountResult r;
  for (double v : eigenvalues) {
    if (v < threshold) ++r.count;
    if (std::abs(v - threshold) <= guard) r.certified = false;
  }
  return r;
}

CountResult count_below(const SpectrumResult& spectrum, double threshold, double guard) {
  return count_below(std::span<const double>(spectrum.eigenvalues), threshold, guard);
}

}  // namespace fbms
