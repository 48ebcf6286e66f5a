// The five error measures of the verification harness and convergence-rate
// computation across refinement levels.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wg3d/local_ops.hpp"
#include "wg3d/mesh.hpp"
#include "wg3d/problems.hpp"
#include "wg3d/quadrature.hpp"
#include "wg3d/solver.hpp"

namespace wg3d {

struct ErrorNorms {
  double inf_star = 0.0;   // max_T |(u - S(u_b))(M_c)|
  double l2_e0 = 0.0;      // || Q_0 u - S(u_b) ||_0
  double h1_db = 0.0;      // || grad_d (Q_b u - u_b) ||_0
  double w11_star = 0.0;   // || grad_d u_b - grad u(M_c) ||
  double w11_semi = 0.0;   // || grad (Q_0 u - S(u_b)) ||_0

  std::array<double, 5> as_array() const { return {inf_star, l2_e0, h1_db, w11_star, w11_semi}; }
};

/// Per-element evaluation against the manufactured solution. u_b must carry
/// values on every face, boundary included.
inline ErrorNorms error_norms(const TensorMesh& mesh, const Problem& problem,
                              const FaceField& u_b, int order = 4) {
  if (u_b.size() != mesh.face_count())
    throw std::invalid_argument("error_norms: face field size mismatch");
  ErrorNorms norms;
  double l2_sq = 0.0, h1_sq = 0.0, w11s_sq = 0.0, w11_sq = 0.0;
  for (int s = 0; s < mesh.nz(); ++s)
    for (int j = 0; j < mesh.ny(); ++j)
      for (int i = 0; i < mesh.nx(); ++i) {
        ElementGeom g = mesh.element_geom(i, j, s);
        auto C = extension_map(g);
        auto G = weak_gradient_map(g);
        Vec6 vb{};
        for (int p = 0; p < 6; ++p) vb[p] = u_b[g.face_ids[p]];

        // S(u_b) coefficients in the centered basis.
        std::array<double, 4> sc{};
        for (int k = 0; k < 4; ++k)
          for (int p = 0; p < 6; ++p) sc[k] += C[k][p] * vb[p];

        double uc = problem.u(g.center[0], g.center[1], g.center[2]);
        norms.inf_star = std::max(norms.inf_star, std::abs(uc - sc[0]));

        // e0 = Q_0 u - S(u_b) is linear; the centered basis is orthogonal.
        P1Coeffs q0 = project_p1(problem.u, g, order);
        std::array<double, 4> d = {q0.a0 - sc[0], q0.a1 - sc[1], q0.a2 - sc[2],
                                   q0.a3 - sc[3]};
        l2_sq += g.volume * (d[0] * d[0] + d[1] * d[1] * g.e[0] * g.e[0] / 12.0 +
                             d[2] * d[2] * g.e[1] * g.e[1] / 12.0 +
                             d[3] * d[3] * g.e[2] * g.e[2] / 12.0);
        w11_sq += g.volume * (d[1] * d[1] + d[2] * d[2] + d[3] * d[3]);

        // e_b = Q_b u - u_b; its weak gradient is constant per element.
        auto qb = face_averages(problem.u, g, order);
        for (int r = 0; r < 3; ++r) {
          double gd = 0.0;
          for (int p = 0; p < 6; ++p) gd += G[r][p] * (qb[p] - vb[p]);
          h1_sq += g.volume * gd * gd;
        }

        Vec3 grad_exact = problem.grad_u(g.center[0], g.center[1], g.center[2]);
        for (int r = 0; r < 3; ++r) {
          double gd = 0.0;
          for (int p = 0; p < 6; ++p) gd += G[r][p] * vb[p];
          double diff = gd - grad_exact[r];
          w11s_sq += g.volume * diff * diff;
        }
      }
  norms.l2_e0 = std::sqrt(l2_sq);
  norms.h1_db = std::sqrt(h1_sq);
  norms.w11_star = std::sqrt(w11s_sq);
  norms.w11_semi = std::sqrt(w11_sq);
  return norms;
}

struct RateSummary {
  std::vector<double> pairwise;  // log(E_i/E_{i+1}) / log(h_i/h_{i+1})
  double lsq_slope = 0.0;        // least-squares slope of log E vs log h
};

/// Convergence rates of one error column across refinement levels.
inline RateSummary rates(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2)
    throw std::invalid_argument("rates: need at least two matching levels");
  RateSummary out;
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    if (h[i] <= h[i + 1])
      throw std::invalid_argument("rates: mesh sizes must strictly decrease");
    out.pairwise.push_back(std::log(err[i] / err[i + 1]) / std::log(h[i] / h[i + 1]));
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  auto n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    double lx = std::log(h[i]), ly = std::log(err[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  out.lsq_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

}  // namespace wg3d
