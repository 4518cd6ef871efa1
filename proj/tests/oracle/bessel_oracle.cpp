#include "bessel_oracle.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cstdlib>

namespace elscat::oracle {
namespace {

using Real = boost::multiprecision::cpp_bin_float_50;

Real factorial(int k) {
  Real f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Digamma at a positive integer: -gamma + sum_{k<m} 1/k.
Real digamma(int m) {
  Real s = -boost::math::constants::euler<Real>();
  for (int k = 1; k < m; ++k) s += Real(1) / k;
  return s;
}

Real series_j(int n, const Real& t) {
  const Real half = t / 2;
  const Real q = -half * half;
  Real term = pow(half, n) / factorial(n);
  Real sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= q / (Real(k) * Real(n + k));
    sum += term;
    if (abs(term) < abs(sum) * Real("1e-55") && k > n) break;
  }
  return sum;
}

// Y_n(t) = (2/pi) ln(t/2) J_n(t) - (1/pi) sum_{k<n} (n-k-1)!/k! (t/2)^{2k-n}
//          - (1/pi) sum_k [psi(k+1) + psi(n+k+1)] (-t^2/4)^k (t/2)^n / (k! (n+k)!)
Real series_y(int n, const Real& t) {
  const Real pi = boost::math::constants::pi<Real>();
  const Real half = t / 2;
  Real finite = 0;
  for (int k = 0; k < n; ++k) {
    finite += factorial(n - k - 1) / factorial(k) * pow(half, 2 * k - n);
  }
  const Real q = -half * half;
  Real term = pow(half, n) / factorial(n);
  Real sum = (digamma(1) + digamma(n + 1)) * term;
  for (int k = 1; k < 400; ++k) {
    term *= q / (Real(k) * Real(n + k));
    const Real add = (digamma(k + 1) + digamma(n + k + 1)) * term;
    sum += add;
    if (abs(add) < Real("1e-55") * (abs(sum) + abs(finite)) && k > n) break;
  }
  return 2 / pi * log(half) * series_j(n, t) - finite / pi - sum / pi;
}

int sign_for(int n) { return (n < 0 && (std::abs(n) % 2 == 1)) ? -1 : 1; }

}  // namespace

double bessel_j(int n, double t) {
  return sign_for(n) * static_cast<double>(series_j(std::abs(n), Real(t)));
}

double bessel_y(int n, double t) {
  return sign_for(n) * static_cast<double>(series_y(std::abs(n), Real(t)));
}

HankelSeries hankel1(int n, double t) {
  const Real x(t);
  // Differences are formed in extended precision and rounded at the end.
  auto jy = [&](int k) {
    const int a = std::abs(k);
    const Real s = sign_for(k);
    return std::pair<Real, Real>(s * series_j(a, x), s * series_y(a, x));
  };
  const auto [j0, y0] = jy(n);
  const auto [jm1, ym1] = jy(n - 1);
  const auto [jp1, yp1] = jy(n + 1);
  const auto [jm2, ym2] = jy(n - 2);
  const auto [jp2, yp2] = jy(n + 2);
  HankelSeries out;
  out.h = {static_cast<double>(j0), static_cast<double>(y0)};
  out.dh = {static_cast<double>((jm1 - jp1) / 2), static_cast<double>((ym1 - yp1) / 2)};
  out.d2h = {static_cast<double>((jm2 - 2 * j0 + jp2) / 4),
             static_cast<double>((ym2 - 2 * y0 + yp2) / 4)};
  return out;
}

}  // namespace elscat::oracle
