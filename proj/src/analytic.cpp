#include "msbem/analytic.hpp"

#include <cmath>

#include "msbem/specfun.hpp"

namespace msbem::analytic {

void MieConfig::validate() const {
  if (!(k > 0.0)) throw ParameterError("Mie: wavenumber must be positive");
  if (!(radius > 0.0)) throw ParameterError("Mie: radius must be positive");
  if (std::abs(beta.norm() - 1.0) > 1e-12) throw ParameterError("Mie: beta must be a unit vector");
  if (nmax != 0 && nmax < k * radius) throw ParameterError("Mie: truncation order below ka");
}

int default_truncation(double ka) { return static_cast<int>(std::ceil(ka + 8.0 * std::cbrt(ka) + 10.0)); }

ComplexVector mie_scattered(const MieConfig& cfg, const std::vector<Vec2>& points) {
  cfg.validate();
  const double ka = cfg.k * cfg.radius;
  const int nmax = cfg.nmax > 0 ? cfg.nmax : default_truncation(ka);

  const specfun::BesselArrays at_boundary = specfun::bessel_arrays(nmax, ka);
  // a_n = J_n(ka) / H_n(ka)
  std::vector<Complex> ratio(nmax + 1);
  for (int n = 0; n <= nmax; ++n) {
    ratio[n] = at_boundary.j[n] / Complex(at_boundary.j[n], at_boundary.y[n]);
  }
  const Complex phase = std::exp(kI * (cfg.k * cfg.beta.dot(cfg.center)));
  const Vec2 perp(-cfg.beta.y(), cfg.beta.x());

  ComplexVector out(static_cast<Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec2 d = points[i] - cfg.center;
    const double r = d.norm();
    if (r < cfg.radius * (1.0 - 1e-12)) throw DomainError("Mie: evaluation point inside the disk");
    const double theta = std::atan2(d.dot(perp), d.dot(cfg.beta));
    const specfun::BesselArrays at_r = specfun::bessel_arrays(nmax, cfg.k * r);
    Complex sum = ratio[0] * Complex(at_r.j[0], at_r.y[0]);
    Complex in = 1.0;  // i^n
    for (int n = 1; n <= nmax; ++n) {
      in *= kI;
      sum += 2.0 * std::cos(n * theta) * in * ratio[n] * Complex(at_r.j[n], at_r.y[n]);
    }
    out[static_cast<Index>(i)] = -phase * sum;
  }
  return out;
}

}  // namespace msbem::analytic
