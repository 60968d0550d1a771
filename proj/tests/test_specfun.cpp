#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "msbem/specfun.hpp"

using namespace msbem;
using namespace msbem::specfun;

namespace {

// Independent power series in long double; reliable while x stays small
// enough that the alternating terms do not swamp the result.
long double series_j(int n, long double x) {
  long double term = 1.0L, sum = 0.0L;
  for (int i = 1; i <= n; ++i) term *= x / (2.0L * i);
  for (int m = 0; m < 200; ++m) {
    sum += term;
    term *= -(x * x / 4.0L) / ((m + 1.0L) * (m + n + 1.0L));
    if (std::fabs(term) < 1e-30L * std::fabs(sum)) break;
  }
  return sum;
}

// Y0 from its series definition: (2/pi)(ln(x/2) + gamma) J0 + (2/pi) sum (-1)^{m+1} H_m (x^2/4)^m / (m!)^2
long double series_y0(long double x) {
  const long double gamma = 0.57721566490153286060651209L;
  const long double pi = 3.14159265358979323846264338L;
  long double term = 1.0L, harmonic = 0.0L, sum = 0.0L;
  for (int m = 1; m < 200; ++m) {
    term *= -(x * x / 4.0L) / (static_cast<long double>(m) * m);
    harmonic += 1.0L / m;
    sum -= term * harmonic;
    if (std::fabs(term * harmonic) < 1e-30L) break;
  }
  return 2.0L / pi * ((std::log(x / 2.0L) + gamma) * series_j(0, x) + sum);
}

}  // namespace

TEST_CASE("bessel values at the origin") {
  const auto v = bessel_j0j1y0y1(0.0);
  CHECK(v.j0 == 1.0);
  CHECK(v.j1 == 0.0);
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(bessel_j1(0.0) == 0.0);
}

TEST_CASE("bessel reference values at x = 1") {
  const auto v = bessel_j0j1y0y1(1.0);
  CHECK(std::abs(v.j0 - 0.7651976866) < 1e-8);
  CHECK(std::abs(v.y0 - 0.0882569642) < 1e-8);
  CHECK(std::abs(v.j1 - 0.4400505857) < 1e-8);
  CHECK(std::abs(v.y1 - (-0.7812128213)) < 1e-8);
}

TEST_CASE("bessel agrees with long-double series for small x") {
  for (double x = 0.05; x <= 12.0; x += 0.173) {
    const auto v = bessel_j0j1y0y1(x);
    CHECK(std::abs(v.j0 - static_cast<double>(series_j(0, x))) < 1e-10);
    CHECK(std::abs(v.j1 - static_cast<double>(series_j(1, x))) < 1e-10);
    CHECK(std::abs(v.y0 - static_cast<double>(series_y0(x))) < 1e-10);
  }
}

TEST_CASE("bessel agrees with the standard library on (0, 50]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(1e-3, 50.0);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng);
    const auto v = bessel_j0j1y0y1(x);
    worst = std::max({worst, std::abs(v.j0 - std::cyl_bessel_j(0.0, x)), std::abs(v.j1 - std::cyl_bessel_j(1.0, x)),
                      std::abs(v.y0 - std::cyl_neumann(0.0, x)), std::abs(v.y1 - std::cyl_neumann(1.0, x))});
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("negative or non-finite argument is a domain error") {
  CHECK_THROWS_AS(bessel_j0j1y0y1(-1.0), DomainError);
  CHECK_THROWS_AS(bessel_j0j1y0y1(std::nan("")), DomainError);
  CHECK_THROWS_AS(bessel_arrays(3, -0.5), DomainError);
}

TEST_CASE("bessel arrays") {
  SUBCASE("order one matches the scalar routine") {
    for (double x : {0.3, 1.0, 7.5, 13.0, 40.0}) {
      const auto a = bessel_arrays(1, x);
      const auto v = bessel_j0j1y0y1(x);
      CHECK(std::abs(a.j[0] - v.j0) < 1e-12);
      CHECK(std::abs(a.j[1] - v.j1) < 1e-12);
      CHECK(a.y[0] == v.y0);
      CHECK(a.y[1] == v.y1);
    }
  }
  SUBCASE("J_10(5)") {
    const auto a = bessel_arrays(10, 5.0);
    CHECK(std::abs(a.j[10] - 0.001467802647) < 1e-9);
    CHECK(std::abs(a.j[10] - static_cast<double>(series_j(10, 5.0L))) < 1e-14);
  }
  SUBCASE("Wronskian up to order 60") {
    for (double x : {1.0, 5.0, 20.0}) {
      const auto a = bessel_arrays(60, x);
      for (int n = 0; n < 60; ++n) {
        if (n + 1 > a.y_valid_up_to) break;
        const double w = a.j[n] * a.y[n + 1] - a.j[n + 1] * a.y[n];
        const double expect = -2.0 / (kPi * x);
        CHECK(std::abs(w - expect) <= 1e-9 * std::max(1.0, std::abs(expect)));
      }
    }
  }
  SUBCASE("higher orders against the standard library") {
    const auto a = bessel_arrays(40, 20.0);
    for (int n = 0; n <= 40; n += 5) {
      CHECK(a.j[n] == doctest::Approx(std::cyl_bessel_j(n, 20.0)).epsilon(1e-9));
      CHECK(a.y[n] == doctest::Approx(std::cyl_neumann(n, 20.0)).epsilon(1e-9));
    }
  }
  SUBCASE("Y overflow is flagged, J stays finite") {
    const auto a = bessel_arrays(200, 0.5);
    CHECK(a.y_overflow());
    CHECK(std::isinf(a.y.back()));
    CHECK(std::isfinite(a.j.back()));
    CHECK(a.j.back() >= 0.0);
  }
}

TEST_CASE("hankel function of the first kind") {
  const Complex h0 = hankel1(0, 1.0), h1 = hankel1(1, 1.0);
  CHECK(std::abs(h0 - Complex(0.7651976866, 0.0882569642)) < 1e-8);
  CHECK(std::abs(h1 - Complex(0.4400505857, -0.7812128213)) < 1e-8);
  const auto v = bessel_j0j1y0y1(3.3);
  CHECK(std::conj(hankel1(0, 3.3)) == Complex(v.j0, -v.y0));
  const auto both = hankel01(3.3);
  CHECK(both.h0 == hankel1(0, 3.3));
  CHECK(both.h1 == hankel1(1, 3.3));
  CHECK_THROWS_AS(hankel1(2, 1.0), DomainError);
  CHECK_THROWS_AS(hankel1(0, 0.0), DomainError);
}

TEST_CASE("green function") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 50; ++i) {
    const Vec2 x(u(rng), u(rng)), y(u(rng), u(rng)), t(u(rng), u(rng));
    CHECK(green(2.5, x, y) == green(2.5, y, x));
    CHECK(std::abs(green(2.5, x + t, y + t) - green(2.5, x, y)) <= 1e-12 * std::abs(green(2.5, x, y)));
  }
  CHECK(std::abs(green(1.0, Vec2(1, 0), Vec2(0, 0)) - Complex(-0.0220642410, 0.1912994217)) < 1e-8);
  CHECK_THROWS_AS(green(1.0, Vec2(1, 2), Vec2(1, 2)), DomainError);
}

TEST_CASE("normal derivatives of the green function") {
  const Vec2 x(1, 0), y(0, 0), n(1, 0);
  CHECK(std::abs(green_dny(1.0, x, y, n) - Complex(0.1953032053, 0.1100126464)) < 1e-8);
  CHECK(std::abs(green_dnx(1.0, x, y, n) - Complex(-0.1953032053, -0.1100126464)) < 1e-8);
  CHECK(green_dny(1.0, x, y, Vec2(0, 1)) == Complex(0.0, 0.0));
  CHECK(green_dnx(1.0, x, y, Vec2(0, 1)) == Complex(0.0, 0.0));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const Vec2 a(u(rng), u(rng)), b(u(rng), u(rng));
    const Vec2 m = Vec2(u(rng), u(rng)).normalized();
    CHECK(green_dny(3.0, a, b, -m) == -green_dny(3.0, a, b, m));
    CHECK(green_dnx(3.0, a, b, m) == green_dny(3.0, b, a, m));
    // central difference of G in y along m
    const double h = 1e-5;
    const Complex fd = (green(3.0, a, b + h * m) - green(3.0, a, b - h * m)) / (2.0 * h);
    CHECK(std::abs(fd - green_dny(3.0, a, b, m)) < 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("regular part of the green function") {
  // G + ln(r)/(2 pi) computed directly where there is no cancellation issue
  for (double r : {0.3, 1.0, 2.0, 5.0}) {
    const double k = 1.7;
    const Complex direct = green(k, Vec2(r, 0), Vec2(0, 0)) + std::log(r) / (2.0 * kPi);
    CHECK(std::abs(green_regular_part(k, r) - direct) < 1e-12);
  }
  // small r limit: i/4 - (ln(k/2) + gamma)/(2 pi)
  const double k = 3.0;
  const Complex limit(-(std::log(k / 2.0) + 0.57721566490153286) / (2.0 * kPi), 0.25);
  CHECK(std::abs(green_regular_part(k, 1e-9) - limit) < 1e-12);
}
