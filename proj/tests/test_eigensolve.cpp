#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "fbms/eigensolve.hpp"

using namespace fbms;

namespace {

Matrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix A(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) A(i, j) = A(j, i) = u(rng);
  return A;
}

Matrix random_spd(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix B(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) B(i, j) = u(rng);
  Matrix M = B.transpose() * B;
  for (std::size_t i = 0; i < n; ++i) M(i, i) += 0.5;
  return M;
}

}  // namespace

TEST_CASE("sym_eig small cases") {
  const std::vector<double> d{2.0, 3.0};
  const SpectrumResult r = sym_eig(Matrix::diagonal(d));
  REQUIRE(r.eigenvalues.size() == 2);
  CHECK(r.eigenvalues[0] == doctest::Approx(2.0));
  CHECK(r.eigenvalues[1] == doctest::Approx(3.0));

  Matrix flip(2, 2);
  flip(0, 1) = flip(1, 0) = 1.0;
  const SpectrumResult f = sym_eig(flip);
  CHECK(f.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(f.eigenvalues[1] == doctest::Approx(1.0));
}

TEST_CASE("sym_eig rejects non-symmetric input") {
  Matrix A(2, 2);
  A(0, 1) = 1.0;
  CHECK_THROWS_AS(sym_eig(A), std::invalid_argument);
}

TEST_CASE("eigenvalue sum equals trace, eigenpairs have small residuals") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 6 + trial % 5;
    const Matrix A = random_symmetric(n, rng);
    const SpectrumResult r = sym_eig(A);
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += A(i, i);
    const double sum = std::accumulate(r.eigenvalues.begin(), r.eigenvalues.end(), 0.0);
    CHECK(std::abs(sum - trace) <= 1e-10);
    CHECK(std::is_sorted(r.eigenvalues.begin(), r.eigenvalues.end()));
    for (std::size_t k = 0; k < n; ++k) {
      const auto Av = A * r.eigenvectors[k];
      double res = 0.0, nv = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        res = std::max(res, std::abs(Av[i] - r.eigenvalues[k] * r.eigenvectors[k][i]));
        nv += r.eigenvectors[k][i] * r.eigenvectors[k][i];
      }
      CHECK(res <= 1e-10);
      CHECK(nv == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("A^T A has a non-negative spectrum") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix A(7, 5);
    for (std::size_t i = 0; i < 7; ++i)
      for (std::size_t j = 0; j < 5; ++j) A(i, j) = u(rng);
    const SpectrumResult r = sym_eig(A.transpose() * A, false);
    CHECK(r.eigenvalues.front() >= -1e-12);
  }
}

TEST_CASE("generalized problems") {
  {
    const std::vector<double> one{1, 1, 1}, two{2, 2, 2};
    const SpectrumResult r = sym_generalized_eig(Matrix::diagonal(one), Matrix::diagonal(two));
    for (double l : r.eigenvalues) CHECK(l == doctest::Approx(0.5));
  }
  {
    const std::vector<double> k{1, 4}, m{1, 2};
    const SpectrumResult r = sym_generalized_eig(Matrix::diagonal(k), Matrix::diagonal(m));
    CHECK(r.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(r.eigenvalues[1] == doctest::Approx(2.0));
  }
  {
    Matrix K(2, 2);
    K(0, 1) = K(1, 0) = 1.0;
    const std::vector<double> m{2, 1};
    const SpectrumResult r = sym_generalized_eig(K, Matrix::diagonal(m));
    CHECK(r.eigenvalues[0] == doctest::Approx(-1.0 / std::sqrt(2.0)));
    CHECK(r.eigenvalues[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
  }
  {
    const std::vector<double> m{1, -1};
    CHECK_THROWS_AS(sym_generalized_eig(Matrix::identity(2), Matrix::diagonal(m)),
                    std::domain_error);
  }
}

TEST_CASE("generalized eigenvectors are M-orthonormal with small residuals") {
  std::mt19937_64 rng(9);
  const std::size_t n = 8;
  const Matrix K = random_symmetric(n, rng);
  const Matrix M = random_spd(n, rng);
  const SpectrumResult r = sym_generalized_eig(K, M);
  for (std::size_t i = 0; i < n; ++i) {
    const auto Mvi = M * r.eigenvectors[i];
    const auto Kvi = K * r.eigenvectors[i];
    double res = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      res = std::max(res, std::abs(Kvi[k] - r.eigenvalues[i] * Mvi[k]));
    }
    CHECK(res <= 1e-8 * (K.frobenius_norm() + std::abs(r.eigenvalues[i]) * M.frobenius_norm()));
    for (std::size_t j = 0; j < n; ++j) {
      double g = 0.0;
      for (std::size_t k = 0; k < n; ++k) g += r.eigenvectors[j][k] * Mvi[k];
      CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) <= 1e-8);
    }
  }
}

TEST_CASE("Sylvester: generalized negative count equals that of L^-1 K L^-T") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5 + trial % 4;
    const Matrix K = random_symmetric(n, rng);
    const Matrix M = random_spd(n, rng);
    const CountResult generalized = count_below(sym_generalized_eig(K, M, false), 0.0, 1e-9);
    // Brute force: L^-1 by forward substitution on the identity.
    const Matrix L = cholesky(M);
    Matrix Linv(n, n);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        double v = i == c ? 1.0 : 0.0;
        for (std::size_t k = 0; k < i; ++k) v -= L(i, k) * Linv(k, c);
        Linv(i, c) = v / L(i, i);
      }
    }
    Matrix C = Linv * K * Linv.transpose();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) C(i, j) = C(j, i) = 0.5 * (C(i, j) + C(j, i));
    const SpectrumResult direct = sym_eig(C, false);
    const auto negatives = std::count_if(direct.eigenvalues.begin(), direct.eigenvalues.end(),
                                         [](double x) { return x < 0.0; });
    CHECK(generalized.count == negatives);
    // Inertia of K itself agrees as well (congruence with M = I).
    const auto plain = sym_eig(K, false).eigenvalues;
    const auto k_neg =
        std::count_if(plain.begin(), plain.end(), [](double x) { return x < 0.0; });
    CHECK(generalized.count == k_neg);
  }
}

TEST_CASE("count_below with guard band") {
  const std::vector<double> a{-5.0, -3.0, 1.0};
  const CountResult r = count_below(a, 0.0, 1e-6);
  CHECK(r.count == 2);
  CHECK(r.certified);
  const std::vector<double> b{-2.0 - 1e-9, 0.0};
  CHECK_FALSE(count_below(b, -2.0, 1e-6).certified);
}

TEST_CASE("tridiagonal solvers agree with the dense solver") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  SymTridiagonal A;
  for (int i = 0; i < 40; ++i) A.diag.push_back(u(rng));
  for (int i = 0; i < 39; ++i) A.off.push_back(u(rng));
  const SpectrumResult dense = sym_eig(A.to_dense(), false);
  const SpectrumResult low = tridiagonal_lowest(A, 10, true);
  auto all = tridiagonal_eigenvalues(A);
  std::sort(all.begin(), all.end());
  for (int k = 0; k < 10; ++k) {
    CHECK(low.eigenvalues[k] == doctest::Approx(dense.eigenvalues[k]).epsilon(1e-12));
    CHECK(all[k] == doctest::Approx(dense.eigenvalues[k]).epsilon(1e-12));
    CHECK(A.count_below(dense.eigenvalues[k] + 1e-9) == k + 1);
    const auto Av = A.to_dense() * low.eigenvectors[k];
    double res = 0.0;
    for (std::size_t i = 0; i < Av.size(); ++i)
      res = std::max(res, std::abs(Av[i] - low.eigenvalues[k] * low.eigenvectors[k][i]));
    CHECK(res <= 1e-10);
  }
  const auto [lo, hi] = A.gershgorin();
  CHECK(lo <= dense.eigenvalues.front());
  CHECK(hi >= dense.eigenvalues.back());
}
