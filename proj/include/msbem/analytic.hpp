#pragma once

#include <vector>

#include "msbem/common.hpp"

namespace msbem::analytic {

/// Plane wave exp(ik beta.x) on a sound-soft disk.
struct MieConfig {
  double k = 1.0;
  double radius = 1.0;
  Vec2 center = Vec2::Zero();
  Vec2 beta = Vec2(1.0, 0.0);
  int nmax = 0;  // 0 selects default_truncation(k * radius)

  void validate() const;
};

/// ceil(ka + 8 (ka)^{1/3} + 10)
int default_truncation(double ka);

/// Scattered field -sum_n i^n J_n(ka)/H_n(ka) H_n(kr) e^{in theta}, theta
/// measured from beta, summed as n = 0 plus 2 cos(n theta) pairs. Throws
/// DomainError for points strictly inside the disk.
ComplexVector mie_scattered(const MieConfig& cfg, const std::vector<Vec2>& points);

}  // namespace msbem::analytic
