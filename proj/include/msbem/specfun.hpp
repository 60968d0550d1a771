#pragma once

#include <vector>

#include "msbem/common.hpp"

namespace msbem::specfun {

struct BesselJY01 {
  double j0, j1, y0, y1;
};

/// J0, J1, Y0, Y1 at x > 0 (x = 0 is accepted with Y0 = Y1 = -inf).
/// Power series for x <= 12, Hankel asymptotic expansion beyond.
BesselJY01 bessel_j0j1y0y1(double x);

double bessel_j0(double x);
double bessel_j1(double x);

struct BesselArrays {
  std::vector<double> j;  // J_0 .. J_nmax
  std::vector<double> y;  // Y_0 .. Y_nmax, saturated at -inf past overflow
  /// Highest order whose Y value is finite (== nmax unless the upward
  /// recurrence overflowed).
  int y_valid_up_to = 0;
  bool y_overflow() const { return y_valid_up_to + 1 < static_cast<int>(y.size()); }
};

/// Integer-order J_n and Y_n for n = 0..nmax. Y by upward recurrence,
/// J by Miller's downward recurrence normalized with J0 + 2 sum J_2m = 1.
BesselArrays bessel_arrays(int nmax, double x);

/// H^(1)_order(x) = J_order(x) + i Y_order(x), order 0 or 1.
Complex hankel1(int order, double x);

/// Free-space 2D Helmholtz Green's function (i/4) H0^(1)(k |x - y|).
Complex green(double k, const Vec2& x, const Vec2& y);

/// d/dn(y) of green: (ik/4) H1^(1)(kr) (x - y).n / r.
Complex green_dny(double k, const Vec2& x, const Vec2& y, const Vec2& n);

/// d/dn(x) of green: equals green_dny(k, y, x, n).
Complex green_dnx(double k, const Vec2& x, const Vec2& y, const Vec2& n);

/// green as a function of distance: G(r) + ln(r) / (2 pi), continuous at r = 0.
/// The logarithmic part -ln(r)/(2 pi) is what panel quadrature integrates in
/// closed form.
Complex green_regular_part(double k, double r);

/// Both Hankel values at once; hot path of the assembly loops.
struct Hankel01 {
  Complex h0, h1;
};
Hankel01 hankel01(double x);

}  // namespace msbem::specfun
