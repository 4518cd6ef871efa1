#pragma once

#include <complex>
#include <vector>

namespace elscat {

using cplx = std::complex<double>;

// Largest |n| accepted by the Hankel routines.
inline constexpr int kMaxHankelOrder = 64;

// H_n^(1)(t) together with its first derivative.
struct HankelValue {
  int order = 0;
  double argument = 0.0;
  cplx h;
  cplx dh;
};

// Hankel function of the first kind for integer order n and real t > 0.
//
// J_n comes from normalized backward (Miller) recurrence; Y_0 and Y_1 from the
// Neumann series in the J's (or the Hankel asymptotic expansion for large t);
// Y_n from forward recurrence.  Throws DomainError for t <= 0 and
// OrderOverflowError for |n| > kMaxHankelOrder or when Y_n overflows.
HankelValue hankel1(int n, double t);

// H_0 .. H_{n_max} (and derivatives) at a single argument in one pass.
std::vector<HankelValue> hankel1_orders(int n_max, double t);

// H_n' / H_n.  Even in n.
cplx alpha_n(int n, double t);

// H_n'' / H_n, evaluated through n^2/t^2 - 1 - alpha_n(t)/t.
cplx beta_n(int n, double t);

}  // namespace elscat
