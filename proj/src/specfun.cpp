#include "msbem/specfun.hpp"

#include <cmath>
#include <limits>

namespace msbem::specfun {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kSeriesLimit = 12.0;

BesselJY01 series(double x) {
  const double h = 0.5 * x;
  const double h2 = h * h;

  // J0 and the harmonic-number sum of Y0.
  double t0 = 1.0;  // (-1)^m h^{2m} / (m!)^2
  double j0 = 1.0;
  double y0sum = 0.0;
  double harmonic = 0.0;
  // J1 and the digamma sum of Y1.
  double t1 = h;  // (-1)^m h^{2m+1} / (m! (m+1)!)
  double j1 = h;
  double y1sum = (-kEulerGamma + (1.0 - kEulerGamma)) * h;  // psi(1) + psi(2)
  for (int m = 1; m < 200; ++m) {
    t0 *= -h2 / (static_cast<double>(m) * m);
    t1 *= -h2 / (static_cast<double>(m) * (m + 1));
    harmonic += 1.0 / m;
    j0 += t0;
    y0sum -= harmonic * t0;
    j1 += t1;
    // psi(m+1) + psi(m+2) = -2 gamma + 2 H_m + 1/(m+1)
    y1sum += (-2.0 * kEulerGamma + 2.0 * harmonic + 1.0 / (m + 1)) * t1;
    if (std::abs(t0) * (1.0 + harmonic) < 1e-17 && std::abs(t1) * (2.0 + 2.0 * harmonic) < 1e-17 &&
        m > h) {
      break;
    }
  }
  const double log_h = std::log(h);
  const double y0 = (2.0 / kPi) * ((log_h + kEulerGamma) * j0 + y0sum);
  const double y1 = (2.0 / kPi) * j1 * log_h - 2.0 / (kPi * x) - y1sum / kPi;
  return {j0, j1, y0, y1};
}

// Hankel asymptotic expansion: P and Q polynomials in 1/x for order nu.
void asymptotic_pq(int nu, double x, double& p, double& q) {
  const double mu = 4.0 * nu * nu;
  p = 1.0;
  q = 0.0;
  double term = 1.0;  // a_k(nu) / x^k with sign folded in
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 80; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    const double mag = std::abs(term);
    if (mag > last || mag < 1e-17) {
      break;
    }
    last = mag;
    // k odd -> Q with sign (-1)^((k-1)/2); k even -> P with sign (-1)^(k/2)
    if (k % 2 == 1) {
      q += ((k / 2) % 2 == 0 ? term : -term);
    } else {
      p += ((k / 2) % 2 == 0 ? term : -term);
    }
  }
}

BesselJY01 asymptotic(double x) {
  const double amp = std::sqrt(2.0 / (kPi * x));
  double p0, q0, p1, q1;
  asymptotic_pq(0, x, p0, q0);
  asymptotic_pq(1, x, p1, q1);
  const double chi0 = x - 0.25 * kPi;
  const double chi1 = x - 0.75 * kPi;
  const double c0 = std::cos(chi0), s0 = std::sin(chi0);
  const double c1 = std::cos(chi1), s1 = std::sin(chi1);
  return {amp * (p0 * c0 - q0 * s0), amp * (p1 * c1 - q1 * s1), amp * (p0 * s0 + q0 * c0),
          amp * (p1 * s1 + q1 * c1)};
}

double distance(const Vec2& x, const Vec2& y) {
  const double r = (x - y).norm();
  if (!(r > 0.0)) {
    throw DomainError("green kernel evaluated at coincident points");
  }
  return r;
}

}  // namespace

BesselJY01 bessel_j0j1y0y1(double x) {
  if (x < 0.0 || std::isnan(x)) {
    throw DomainError("bessel_j0j1y0y1: negative argument");
  }
  if (x == 0.0) {
    const double inf = std::numeric_limits<double>::infinity();
    return {1.0, 0.0, -inf, -inf};
  }
  return x <= kSeriesLimit ? series(x) : asymptotic(x);
}

double bessel_j0(double x) { return bessel_j0j1y0y1(std::abs(x)).j0; }

double bessel_j1(double x) {
  const double v = bessel_j0j1y0y1(std::abs(x)).j1;
  return x < 0.0 ? -v : v;
}

BesselArrays bessel_arrays(int nmax, double x) {
  if (nmax < 1) {
    throw DomainError("bessel_arrays: nmax must be >= 1");
  }
  if (!(x > 0.0)) {
    throw DomainError("bessel_arrays: x must be positive");
  }
  BesselArrays out;
  out.j.assign(nmax + 1, 0.0);
  out.y.assign(nmax + 1, 0.0);

  const BesselJY01 base = bessel_j0j1y0y1(x);
  out.y[0] = base.y0;
  out.y[1] = base.y1;
  out.y_valid_up_to = nmax;
  for (int n = 1; n < nmax; ++n) {
    const double next = (2.0 * n / x) * out.y[n] - out.y[n - 1];
    if (!std::isfinite(next) || std::abs(next) > 1e300) {
      out.y_valid_up_to = n;
      for (int m = n + 1; m <= nmax; ++m) {
        out.y[m] = -std::numeric_limits<double>::infinity();
      }
      break;
    }
    out.y[n + 1] = next;
  }

  // Miller: start well above both nmax and x, recur downward with rescaling.
  const double top = std::max(static_cast<double>(nmax), std::ceil(x));
  int start = static_cast<int>(top) + std::max(20, static_cast<int>(std::ceil(std::sqrt(40.0 * top))));
  if (start % 2 == 1) {
    ++start;
  }
  double above = 0.0;
  double current = 1e-300;
  double even_sum = 0.0;  // sum of J_2m for m >= 1 (unnormalized)
  double j0 = 0.0;
  for (int n = start; n >= 1; --n) {
    double below = (2.0 * n / x) * current - above;
    above = current;
    const int order = n - 1;
    if (std::abs(below) > 1e250) {
      constexpr double s = 1e-250;
      below *= s;
      above *= s;
      even_sum *= s;
      for (int m = order + 1; m <= nmax; ++m) {
        out.j[m] *= s;
      }
    }
    current = below;  // J_{order}
    if (order <= nmax) {
      out.j[order] = current;
    }
    if (order == 0) {
      j0 = current;
    } else if (order % 2 == 0) {
      even_sum += current;
    }
  }
  const double norm = j0 + 2.0 * even_sum;
  for (double& v : out.j) {
    v /= norm;
  }
  return out;
}

Hankel01 hankel01(double x) {
  const BesselJY01 b = bessel_j0j1y0y1(x);
  return {Complex(b.j0, b.y0), Complex(b.j1, b.y1)};
}

Complex hankel1(int order, double x) {
  if (!(x > 0.0)) {
    throw DomainError("hankel1: argument must be positive");
  }
  if (order != 0 && order != 1) {
    throw DomainError("hankel1: only orders 0 and 1 are supported");
  }
  const BesselJY01 b = bessel_j0j1y0y1(x);
  return order == 0 ? Complex(b.j0, b.y0) : Complex(b.j1, b.y1);
}

Complex green(double k, const Vec2& x, const Vec2& y) {
  const double r = distance(x, y);
  return 0.25 * kI * hankel1(0, k * r);
}

Complex green_dny(double k, const Vec2& x, const Vec2& y, const Vec2& n) {
  const double r = distance(x, y);
  return 0.25 * kI * k * hankel1(1, k * r) * ((x - y).dot(n) / r);
}

Complex green_dnx(double k, const Vec2& x, const Vec2& y, const Vec2& n) { return green_dny(k, y, x, n); }

Complex green_regular_part(double k, double r) {
  if (r < 0.0 || !(k > 0.0)) {
    throw DomainError("green_regular_part: need r >= 0 and k > 0");
  }
  const double z = k * r;
  if (z > kSeriesLimit) {
    return 0.25 * kI * hankel1(0, z) + std::log(r) / (2.0 * kPi);
  }
  // -Y0/4 expanded so that ln(r) only multiplies (J0 - 1), which vanishes at 0.
  const double h = 0.5 * z;
  const double h2 = h * h;
  double t = 1.0;
  double j0 = 1.0;
  double hsum = 0.0;
  double harmonic = 0.0;
  for (int m = 1; m < 200; ++m) {
    t *= -h2 / (static_cast<double>(m) * m);
    harmonic += 1.0 / m;
    j0 += t;
    hsum -= harmonic * t;
    if (std::abs(t) * (1.0 + harmonic) < 1e-18 && m > h) {
      break;
    }
  }
  const double log_term = r > 0.0 ? std::log(r) * (j0 - 1.0) : 0.0;
  const double real =
      -(std::log(0.5 * k) + kEulerGamma) * j0 / (2.0 * kPi) - log_term / (2.0 * kPi) - hsum / (2.0 * kPi);
  return {real, 0.25 * j0};
}

}  // namespace msbem::specfun
