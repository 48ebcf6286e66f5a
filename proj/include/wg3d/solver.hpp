// Preconditioned conjugate gradients for the assembled SPD face system,
// plus a dense Cholesky used as a correctness oracle on small systems.
#pragma once

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wg3d/assembly.hpp"

namespace wg3d {

enum class Preconditioner { None, Jacobi };

struct SolveReport {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  double seconds = 0.0;
  bool converged = true;
  /// Preconditioned residual norm per iteration (index 0 = initial).
  std::vector<double> residual_history;
};

inline std::size_t default_max_iter(std::size_t n) {
  return static_cast<std::size_t>(20.0 * std::sqrt(static_cast<double>(n))) + 200;
}

/// CG with an optional Jacobi preconditioner. Dot products run in a fixed
/// order, so repeated single-threaded runs are bit-identical.
inline std::vector<double> cg_solve(const SparseMatrix& A, const std::vector<double>& b,
                                    SolveReport& report, double tol = 1e-12,
                                    std::size_t max_iter = 0,
                                    Preconditioner precond = Preconditioner::Jacobi) {
  if (tol <= 0.0 || tol >= 1.0) throw std::invalid_argument("cg_solve: tol must be in (0,1)");
  const std::size_t n = A.n;
  if (b.size() != n) throw std::invalid_argument("cg_solve: size mismatch");
  if (max_iter == 0) max_iter = default_max_iter(n);
  auto t0 = std::chrono::steady_clock::now();

  auto dot = [](const std::vector<double>& a, const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * c[i];
    return s;
  };

  std::vector<double> x(n, 0.0);
  double bnorm = std::sqrt(dot(b, b));
  report = SolveReport{};
  if (bnorm == 0.0) {
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return x;
  }

  std::vector<double> inv_diag;
  if (precond == Preconditioner::Jacobi) {
    inv_diag.assign(n, 1.0);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k)
        if (A.col[k] == r) {
          if (A.val[k] <= 0.0)
            throw std::runtime_error("cg_solve: non-positive diagonal, system is not SPD");
          inv_diag[r] = 1.0 / A.val[k];
        }
  }
  auto apply_precond = [&](const std::vector<double>& r, std::vector<double>& z) {
    if (precond == Preconditioner::Jacobi) {
      for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    } else {
      z = r;
    }
  };

  std::vector<double> r = b, z(n), p(n), Ap(n);
  apply_precond(r, z);
  p = z;
  double rz = dot(r, z);
  report.residual_history.push_back(std::sqrt(rz));

  for (std::size_t it = 0; it < max_iter; ++it) {
    A.multiply(p, Ap);
    double alpha = rz / dot(p, Ap);
    for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
    for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * Ap[i];
    double rnorm = std::sqrt(dot(r, r));
    apply_precond(r, z);
    double rz_new = dot(r, z);
    report.residual_history.push_back(std::sqrt(std::max(rz_new, 0.0)));
    report.iterations = it + 1;
    if (rnorm / bnorm <= tol) {
      report.relative_residual = rnorm / bnorm;
      report.converged = true;
      report.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return x;
    }
    double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  double rnorm = std::sqrt(dot(r, r));
  report.relative_residual = rnorm / bnorm;
  report.converged = false;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return x;
}

/// Dense Cholesky solve. Limited to small systems; a non-positive pivot
/// signals a non-SPD assembly bug.
inline std::vector<double> dense_solve(const SparseMatrix& A, const std::vector<double>& b) {
  const std::size_t n = A.n;
  if (n > 5000) throw std::invalid_argument("dense_solve: system too large (N > 5000)");
  if (b.size() != n) throw std::invalid_argument("dense_solve: size mismatch");
  std::vector<double> L(n * n, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k)
      L[r * n + A.col[k]] = A.val[k];
  // In-place lower Cholesky.
  for (std::size_t j = 0; j < n; ++j) {
    double d = L[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= L[j * n + k] * L[j * n + k];
    if (d <= 0.0)
      throw std::runtime_error("dense_solve: non-positive pivot at row " + std::to_string(j));
    d = std::sqrt(d);
    L[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = L[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
      L[i * n + j] = s / d;
    }
  }
  std::vector<double> y(n), x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= L[i * n + k] * y[k];
    y[i] = s / L[i * n + i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= L[k * n + ii] * x[k];
    x[ii] = s / L[ii * n + ii];
  }
  return x;
}

}  // namespace wg3d
