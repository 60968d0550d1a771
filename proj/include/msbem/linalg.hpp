#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/LU>

#include "msbem/common.hpp"

namespace msbem::linalg {

/// Partial-pivoting LU of a square complex matrix.
class LuFactors {
 public:
  LuFactors() = default;
  explicit LuFactors(Eigen::PartialPivLU<ComplexMatrix> lu) : lu_(std::move(lu)) {}

  Index dimension() const { return lu_.rows(); }
  const Eigen::PartialPivLU<ComplexMatrix>& decomposition() const { return lu_; }

 private:
  Eigen::PartialPivLU<ComplexMatrix> lu_;
};

/// Throws NumericalError when a pivot is numerically zero
/// (|u_ii| <= max(1e-300, n eps max_j |u_jj|)).
LuFactors lu_factor(const ComplexMatrix& a);
ComplexVector lu_solve(const LuFactors& f, const ComplexVector& b);
ComplexMatrix lu_solve(const LuFactors& f, const ComplexMatrix& b);

using LinearOperator = std::function<ComplexVector(const ComplexVector&)>;

struct GmresReport {
  int iterations = 0;
  /// Relative residual before the first iteration (1 for a zero initial
  /// guess) followed by one entry per inner iteration. Measured in the
  /// preconditioned norm when a preconditioner is given.
  std::vector<double> residual_history;
  bool converged = false;
};

struct GmresResult {
  ComplexVector x;
  GmresReport report;
};

/// Restarted GMRES(restart) from a zero initial guess, left preconditioned
/// when `left_precond` is set: it solves P A x = P b and stops once
/// |P(b - A x)| / |P b| <= tol. `maxiter` bounds the total number of inner
/// iterations; exceeding it yields converged = false, not an exception.
GmresResult gmres(const LinearOperator& apply, const ComplexVector& b, int restart, double tol, int maxiter,
                  const std::optional<LinearOperator>& left_precond = std::nullopt);

/// All eigenvalues (Hessenberg reduction + shifted QR). Dimension <= 3000.
std::vector<Complex> eigenvalues(const ComplexMatrix& a);

inline constexpr Index kMaxEigenDimension = 3000;

/// max_i sum_j |a_ij|
double inf_norm(const ComplexMatrix& a);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix matsub(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace msbem::linalg
