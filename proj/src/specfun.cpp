#include "elscat/specfun.hpp"

#include <cmath>
#include <numbers>
#include <algorithm>
#include <string>
#include <tuple>
#include <utility>

#include "elscat/errors.hpp"

namespace elscat {
namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;

// Above this argument Y_0, Y_1 come from the Hankel asymptotic expansion.
constexpr double kAsymptoticThreshold = 40.0;

void check_argument(int n, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("hankel1: argument must be finite and positive, got t=" + std::to_string(t));
  }
  if (std::abs(n) > kMaxHankelOrder) {
    throw OrderOverflowError("hankel1: |n|=" + std::to_string(std::abs(n)) +
                             " exceeds the supported maximum order " +
                             std::to_string(kMaxHankelOrder));
  }
}

// J_0 .. J_m by backward ratio recurrence, normalized with J_0 + 2 sum J_2k = 1.
std::vector<double> bessel_j_table(int n_max, double t) {
  const double reach = std::max<double>(n_max, std::ceil(t));
  int m = static_cast<int>(reach + 25.0 + 3.0 * std::ceil(std::sqrt(40.0 * reach)));
  m += m % 2;

  // r[k] = J_k / J_{k-1}
  std::vector<double> ratio(static_cast<std::size_t>(m) + 2, 0.0);
  for (int k = m; k >= 1; --k) {
    ratio[k] = t / (2.0 * k - t * ratio[k + 1]);
  }

  std::vector<double> f(static_cast<std::size_t>(m) + 1);
  f[0] = 1.0;
  double norm = 1.0;
  for (int k = 1; k <= m; ++k) {
    f[k] = f[k - 1] * ratio[k];
    if (k % 2 == 0) norm += 2.0 * f[k];
  }
  for (double& v : f) v /= norm;
  return f;
}

// (Y_0, Y_1) from the Neumann expansions in even/odd order J's.
std::pair<double, double> bessel_y01_neumann(const std::vector<double>& j, double t) {
  const int m = static_cast<int>(j.size()) - 1;
  const double log_term = std::log(0.5 * t) + kEulerGamma;

  double s0 = 0.0;
  double s1 = 0.0;
  for (int k = 1; 2 * k <= m; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    s0 += sign * j[2 * k] / k;
    const double next = (2 * k + 1 <= m) ? j[2 * k + 1] : 0.0;
    s1 += sign * (j[2 * k - 1] - next) / k;
  }
  const double y0 = (2.0 / std::numbers::pi) * (log_term * j[0] - 2.0 * s0);
  const double y1 = (2.0 / std::numbers::pi) * (log_term * j[1] - j[0] / t + s1);
  return {y0, y1};
}

cplx hankel_asymptotic(int nu, double t) {
  const double mu = 4.0 * nu * nu;
  cplx sum = 1.0;
  cplx term = 1.0;
  double prev_mag = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= cplx(0.0, 1.0) * (mu - odd * odd) / (8.0 * k * t);
    const double mag = std::abs(term);
    if (mag > prev_mag) break;
    sum += term;
    if (mag < 1e-17 * std::abs(sum)) break;
    prev_mag = mag;
  }
  const double chi = t - nu * std::numbers::pi / 2.0 - std::numbers::pi / 4.0;
  return std::sqrt(2.0 / (std::numbers::pi * t)) * std::polar(1.0, chi) * sum;
}

}  // namespace

std::vector<HankelValue> hankel1_orders(int n_max, double t) {
  check_argument(n_max, t);
  if (n_max < 0) throw DomainError("hankel1_orders: n_max must be non-negative");

  const int top = std::max(n_max, 1);
  const std::vector<double> j = bessel_j_table(top, t);

  double y0 = 0.0;
  double y1 = 0.0;
  if (t > kAsymptoticThreshold) {
    y0 = hankel_asymptotic(0, t).imag();
    y1 = hankel_asymptotic(1, t).imag();
  } else {
    std::tie(y0, y1) = bessel_y01_neumann(j, t);
  }

  std::vector<double> y(static_cast<std::size_t>(top) + 1);
  y[0] = y0;
  y[1] = y1;
  for (int k = 1; k < top; ++k) {
    y[k + 1] = (2.0 * k / t) * y[k] - y[k - 1];
    if (!std::isfinite(y[k + 1])) {
      throw OrderOverflowError("hankel1: Y_" + std::to_string(k + 1) + "(" + std::to_string(t) +
                               ") overflows double precision");
    }
  }

  std::vector<HankelValue> out(static_cast<std::size_t>(n_max) + 1);
  for (int k = 0; k <= n_max; ++k) {
    out[k].order = k;
    out[k].argument = t;
    out[k].h = cplx(j[k], y[k]);
  }
  const cplx h1(j[1], y[1]);
  out[0].dh = -h1;
  for (int k = 1; k <= n_max; ++k) {
    out[k].dh = out[k - 1].h - (k / t) * out[k].h;
  }
  return out;
}

HankelValue hankel1(int n, double t) {
  check_argument(n, t);
  const int order = std::abs(n);
  HankelValue v = hankel1_orders(order, t)[order];
  if (n < 0 && order % 2 == 1) {
    v.h = -v.h;
    v.dh = -v.dh;
  }
  v.order = n;
  return v;
}

cplx alpha_n(int n, double t) {
  const HankelValue v = hankel1(std::abs(n), t);
  return v.dh / v.h;
}

cplx beta_n(int n, double t) {
  const double nn = static_cast<double>(n) * n;
  return nn / (t * t) - 1.0 - alpha_n(n, t) / t;
}

}  // namespace elscat
