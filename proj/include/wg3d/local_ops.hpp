// Element-local operators of the lowest-order simplified weak Galerkin
// scheme: weak gradient, extension to an element linear, stabilizer
// differences, stiffness block, and load vector.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "wg3d/mesh.hpp"
#include "wg3d/quadrature.hpp"

namespace wg3d {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Mat6 = std::array<std::array<double, 6>, 6>;
using Vec6 = std::array<double, 6>;

inline Mat3 identity3() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

/// Maps from the six face values of an element to derived local quantities.
///
///   G (3x6): face values -> element-constant weak gradient.
///   C (4x6): face values -> P1 coefficients of the extension S(v_b) in the
///            centered basis {1, x-x_c, y-y_c, z-z_c}.
///   D (6x6): face values -> (Q_b S(v_b) - v_b) per face. Since S(v_b) is
///            linear, Q_b S(v_b) on face p is just S(v_b)(M_p).
///   W (6):   face areas, the weights of the boundary inner product.
struct LocalOps {
  std::array<std::array<double, 6>, 3> G{};
  std::array<std::array<double, 6>, 4> C{};
  Mat6 D{};
  Vec6 W{};
};

/// Weak gradient: opposite-face difference quotients.
inline std::array<std::array<double, 6>, 3> weak_gradient_map(const ElementGeom& g) {
  std::array<std::array<double, 6>, 3> G{};
  for (int d = 0; d < 3; ++d) {
    G[d][2 * d] = -1.0 / g.e[d];
    G[d][2 * d + 1] = 1.0 / g.e[d];
  }
  return G;
}

/// Coefficient functionals of the extension S(v_b):
///   c1 = (|F1|(v1+v2) + |F3|(v3+v4) + |F5|(v5+v6)) / (2(|F1|+|F3|+|F5|)),
///   c2..c4 = the weak-gradient components.
inline std::array<std::array<double, 6>, 4> extension_map(const ElementGeom& g) {
  std::array<std::array<double, 6>, 4> C{};
  double denom = 2.0 * (g.face_area[0] + g.face_area[2] + g.face_area[4]);
  for (int p = 0; p < 6; ++p) C[0][p] = g.face_area[2 * (p / 2)] / denom;
  auto G = weak_gradient_map(g);
  for (int d = 0; d < 3; ++d) C[d + 1] = G[d];
  return C;
}

/// Stabilizer differences (S(v_b) - v_b)(M_p). Rows come in equal pairs
/// (1,2), (3,4), (5,6); the pair for axis d is
///   (sum over other axes of |F|(v_lo+v_hi) - (sum of their |F|)(v_lo+v_hi
///   of axis d)) / (2(|F1|+|F3|+|F5|)).
inline Mat6 stabilizer_map(const ElementGeom& g) {
  Mat6 D{};
  double denom = 2.0 * (g.face_area[0] + g.face_area[2] + g.face_area[4]);
  for (int d = 0; d < 3; ++d) {
    std::array<double, 6> row{};
    for (int a = 0; a < 3; ++a) {
      double coef = (a == d) ? -(denom / 2.0 - g.face_area[2 * d]) : g.face_area[2 * a];
      row[2 * a] += coef / denom;
      row[2 * a + 1] += coef / denom;
    }
    D[2 * d] = row;
    D[2 * d + 1] = row;
  }
  return D;
}

inline LocalOps local_ops(const ElementGeom& g) {
  LocalOps ops;
  ops.G = weak_gradient_map(g);
  ops.C = extension_map(g);
  ops.D = stabilizer_map(g);
  ops.W = g.face_area;
  return ops;
}

inline bool is_spd3(const Mat3& A) {
  // Sylvester's criterion plus symmetry.
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(A[i][j] - A[j][i]) > 1e-12 * (std::abs(A[i][j]) + 1.0)) return false;
  double m1 = A[0][0];
  double m2 = A[0][0] * A[1][1] - A[0][1] * A[1][0];
  double m3 = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
              A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
              A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
  return m1 > 0.0 && m2 > 0.0 && m3 > 0.0;
}

/// Stiffness block K = |T| G' A G + (rho/h) D' diag(W) D.
inline Mat6 stiffness(const ElementGeom& g, const Mat3& A_bar, double rho, double h) {
  if (rho <= 0.0) throw std::invalid_argument("stiffness: rho must be positive");
  if (h <= 0.0) throw std::invalid_argument("stiffness: h must be positive");
  if (!is_spd3(A_bar)) throw std::invalid_argument("stiffness: A_bar must be SPD");
  LocalOps ops = local_ops(g);
  Mat6 K{};
  // Gradient part: (A grad_d u, grad_d v)_T with constant gradients.
  std::array<std::array<double, 6>, 3> AG{};
  for (int r = 0; r < 3; ++r)
    for (int cidx = 0; cidx < 6; ++cidx)
      for (int k = 0; k < 3; ++k) AG[r][cidx] += A_bar[r][k] * ops.G[k][cidx];
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      double v = 0.0;
      for (int r = 0; r < 3; ++r) v += ops.G[r][a] * AG[r][b];
      K[a][b] = g.volume * v;
    }
  // Stabilizer part: (rho/h) sum_p |F_p| (Du)_p (Dv)_p.
  double w = rho / h;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      double v = 0.0;
      for (int p = 0; p < 6; ++p) v += ops.W[p] * ops.D[p][a] * ops.D[p][b];
      K[a][b] += w * v;
    }
  return K;
}

/// Load vector b = C' m with m the first moments of f against the centered
/// P1 basis; realizes (f, S(v_b))_T.
template <class F>
Vec6 load(const ElementGeom& g, const F& f, int order) {
  if (order < 2) throw std::invalid_argument("load: order must be >= 2");
  std::array<double, 4> m{};
  m[0] = integrate_box(f, g, order);
  for (int d = 0; d < 3; ++d) {
    auto fd = [&](double x, double y, double z) {
      Vec3 pt{x, y, z};
      return f(x, y, z) * (pt[d] - g.center[d]);
    };
    m[d + 1] = integrate_box(fd, g, order);
  }
  auto C = extension_map(g);
  Vec6 b{};
  for (int p = 0; p < 6; ++p)
    for (int k = 0; k < 4; ++k) b[p] += C[k][p] * m[k];
  return b;
}

/// Mass block for a constant reaction coefficient c:
/// (c S(u_b), S(v_b))_T = C' diag(c|T|, c|T|e_x^2/12, ...) C.
inline Mat6 reaction_block(const ElementGeom& g, double c) {
  auto C = extension_map(g);
  std::array<double, 4> diag = {c * g.volume, c * g.volume * g.e[0] * g.e[0] / 12.0,
                                c * g.volume * g.e[1] * g.e[1] / 12.0,
                                c * g.volume * g.e[2] * g.e[2] / 12.0};
  Mat6 M{};
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      double v = 0.0;
      for (int k = 0; k < 4; ++k) v += C[k][a] * diag[k] * C[k][b];
      M[a][b] = v;
    }
  return M;
}

}  // namespace wg3d
