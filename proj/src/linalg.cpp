#include "msbem/linalg.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace msbem::linalg {

LuFactors lu_factor(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("lu_factor: matrix is not square");
  if (a.rows() == 0) throw DimensionError("lu_factor: empty matrix");
  if (!a.allFinite()) throw NumericalError("lu_factor: non-finite entries");
  Eigen::PartialPivLU<ComplexMatrix> lu(a);
  const auto& packed = lu.matrixLU();
  double largest = 0.0;
  for (Index i = 0; i < packed.rows(); ++i) largest = std::max(largest, std::abs(packed(i, i)));
  const double threshold =
      std::max(1e-300, static_cast<double>(packed.rows()) * std::numeric_limits<double>::epsilon() * largest);
  for (Index i = 0; i < packed.rows(); ++i) {
    if (std::abs(packed(i, i)) <= threshold) {
      throw NumericalError("lu_factor: matrix is singular (pivot " + std::to_string(i) + ")");
    }
  }
  return LuFactors(std::move(lu));
}

ComplexVector lu_solve(const LuFactors& f, const ComplexVector& b) {
  if (b.size() != f.dimension()) throw DimensionError("lu_solve: right-hand side size mismatch");
  return f.decomposition().solve(b);
}

ComplexMatrix lu_solve(const LuFactors& f, const ComplexMatrix& b) {
  if (b.rows() != f.dimension()) throw DimensionError("lu_solve: right-hand side size mismatch");
  return f.decomposition().solve(b);
}

namespace {

// Givens rotation zeroing b in (a, b).
void make_rotation(Complex a, Complex b, double& c, Complex& s) {
  const double na = std::abs(a);
  const double nb = std::abs(b);
  if (nb == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (na == 0.0) {
    c = 0.0;
    s = std::conj(b) / nb;  // rotates (0, b) to (|b|, 0)
    return;
  }
  const double norm = std::hypot(na, nb);
  c = na / norm;
  s = (a / na) * std::conj(b) / norm;
}

void apply_rotation(double c, Complex s, Complex& x, Complex& y) {
  const Complex t = c * x + s * y;
  y = -std::conj(s) * x + c * y;
  x = t;
}

}  // namespace

GmresResult gmres(const LinearOperator& apply, const ComplexVector& b, int restart, double tol, int maxiter,
                  const std::optional<LinearOperator>& left_precond) {
  if (restart < 1) throw ParameterError("gmres: restart must be >= 1");
  const auto precondition = [&](const ComplexVector& v) { return left_precond ? (*left_precond)(v) : v; };

  GmresResult result;
  result.x = ComplexVector::Zero(b.size());
  GmresReport& report = result.report;

  const ComplexVector pb = precondition(b);
  if (pb.size() != b.size()) throw DimensionError("gmres: preconditioner size mismatch");
  const double pb_norm = pb.norm();
  if (pb_norm == 0.0) {
    report.residual_history.push_back(0.0);
    report.converged = true;
    return result;
  }
  ComplexVector r = pb;
  double rel = 1.0;
  report.residual_history.push_back(rel);

  const Index n = b.size();
  const int m = restart;
  ComplexMatrix basis(n, m + 1);
  ComplexMatrix hess = ComplexMatrix::Zero(m + 1, m);
  std::vector<double> cs(m);
  std::vector<Complex> sn(m);
  ComplexVector g(m + 1);

  while (report.iterations < maxiter) {
    const double beta = r.norm();
    basis.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    hess.setZero();
    int j = 0;
    for (; j < m && report.iterations < maxiter; ++j) {
      ComplexVector w = precondition(apply(basis.col(j)));
      if (w.size() != n) throw DimensionError("gmres: operator size mismatch");
      const double w_norm = w.norm();
      for (int i = 0; i <= j; ++i) {
        const Complex h = basis.col(i).dot(w);
        hess(i, j) = h;
        w -= h * basis.col(i);
      }
      if (w.norm() < w_norm / std::sqrt(2.0)) {
        for (int i = 0; i <= j; ++i) {
          const Complex h = basis.col(i).dot(w);
          hess(i, j) += h;
          w -= h * basis.col(i);
        }
      }
      const double h_next = w.norm();
      hess(j + 1, j) = h_next;
      if (h_next > 0.0) basis.col(j + 1) = w / h_next;

      for (int i = 0; i < j; ++i) apply_rotation(cs[i], sn[i], hess(i, j), hess(i + 1, j));
      make_rotation(hess(j, j), hess(j + 1, j), cs[j], sn[j]);
      apply_rotation(cs[j], sn[j], hess(j, j), hess(j + 1, j));
      apply_rotation(cs[j], sn[j], g[j], g[j + 1]);

      ++report.iterations;
      rel = std::abs(g[j + 1]) / pb_norm;
      report.residual_history.push_back(rel);
      if (rel <= tol || h_next == 0.0) {
        ++j;
        break;
      }
    }
    // Back substitution on the j x j triangular system.
    ComplexVector y = ComplexVector::Zero(j);
    for (int i = j - 1; i >= 0; --i) {
      Complex acc = g[i];
      for (int l = i + 1; l < j; ++l) acc -= hess(i, l) * y[l];
      y[i] = acc / hess(i, i);
    }
    result.x += basis.leftCols(j) * y;
    r = precondition(b - apply(result.x));
    rel = r.norm() / pb_norm;
    if (rel <= tol) {
      report.converged = true;
      report.residual_history.back() = rel;
      break;
    }
    if (j == 0) break;
  }
  return result;
}

std::vector<Complex> eigenvalues(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("eigenvalues: matrix is not square");
  if (a.rows() > kMaxEigenDimension) throw DimensionError("eigenvalues: dimension exceeds desk-scale guard");
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalues: QR iteration did not converge");
  const ComplexVector& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

double inf_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
  return a * b;
}

ComplexMatrix matsub(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matsub: shapes differ");
  return a - b;
}

}  // namespace msbem::linalg
