#pragma once

// Reference values computed here from power series, independently of the
// library: modified Bessel I0, I1 and Bessel J0, with bisection roots.

#include <cmath>
#include <functional>

namespace oracle {

// sum_k (x/2)^(2k+nu) / (k! (k+nu)!) with sign (-1)^k when alternating.
inline double bessel_series(int nu, double x, bool alternating) {
  const double q = 0.25 * x * x;
  double term = std::pow(0.5 * x, nu);
  for (int k = 1; k <= nu; ++k) term /= k;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= (alternating ? -q : q) / (static_cast<double>(k) * (k + nu));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

inline double I0(double x) { return bessel_series(0, x, false); }
inline double I1(double x) { return bessel_series(1, x, false); }
inline double J0(double x) { return bessel_series(0, x, true); }

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// kappa I1(kappa) = I0(kappa): the disk Robin ground state is -kappa^2.
inline double disk_robin_kappa() {
  return bisect([](double k) { return k * I1(k) - I0(k); }, 1.0, 2.5);
}

// First zero of J0.
inline double j01() { return bisect([](double x) { return J0(x); }, 2.0, 3.0); }

}  // namespace oracle
