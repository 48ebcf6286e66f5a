// Tensor-product Gauss-Legendre quadrature on boxes and faces, and the
// L2 projections onto element-local linears, face constants, and
// element-constant vectors.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "wg3d/mesh.hpp"

namespace wg3d {

using ScalarField = std::function<double(double, double, double)>;
using VectorField = std::function<Vec3(double, double, double)>;

/// Gauss-Legendre rule on [-1,1]. A p-point rule integrates polynomials of
/// degree <= 2p-1 exactly.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Nodes are roots of the Legendre polynomial P_p, found by Newton
  /// iteration from the Chebyshev initial guess; no tabulated constants.
  static const GaussRule& get(int p) {
    if (p < 1) throw std::invalid_argument("GaussRule: order must be >= 1");
    static std::map<int, GaussRule> cache;
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, compute(p)).first;
    return it->second;
  }

 private:
  static GaussRule compute(int p) {
    GaussRule r;
    r.nodes.resize(p);
    r.weights.resize(p);
    for (int k = 0; k < p; ++k) {
      double x = -std::cos(M_PI * (k + 0.75) / (p + 0.5));
      double dP = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        // Evaluate P_p and P_p' by the three-term recurrence.
        double P0 = 1.0, P1 = x;
        for (int n = 2; n <= p; ++n) {
          double P2 = ((2 * n - 1) * x * P1 - (n - 1) * P0) / n;
          P0 = P1;
          P1 = P2;
        }
        dP = p * (x * P1 - P0) / (x * x - 1.0);
        double dx = P1 / dP;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      r.nodes[k] = x;
      r.weights[k] = 2.0 / ((1.0 - x * x) * dP * dP);
    }
    return r;
  }
};

/// Coefficients in the element-centered P1 basis {1, x-x_c, y-y_c, z-z_c}.
/// The basis is L2-orthogonal on a box, so the representation is unique.
struct P1Coeffs {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;

  double eval(const ElementGeom& g, double x, double y, double z) const {
    return a0 + a1 * (x - g.center[0]) + a2 * (y - g.center[1]) + a3 * (z - g.center[2]);
  }
  Vec3 gradient() const { return {a1, a2, a3}; }
};

/// Integral of f over the element by a tensor Gauss rule with `order` points
/// per direction; exact for tri-degree <= 2*order-1.
template <class F>
double integrate_box(const F& f, const ElementGeom& g, int order) {
  const GaussRule& r = GaussRule::get(order);
  const int p = static_cast<int>(r.nodes.size());
  double sum = 0.0;
  for (int a = 0; a < p; ++a) {
    double x = g.center[0] + 0.5 * g.e[0] * r.nodes[a];
    for (int b = 0; b < p; ++b) {
      double y = g.center[1] + 0.5 * g.e[1] * r.nodes[b];
      double wab = r.weights[a] * r.weights[b];
      for (int c = 0; c < p; ++c) {
        double z = g.center[2] + 0.5 * g.e[2] * r.nodes[c];
        sum += wab * r.weights[c] * f(x, y, z);
      }
    }
  }
  return sum * g.volume / 8.0;
}

/// Mean value (1/|F|) \int_F g over a face rectangle by a 2D tensor rule.
template <class F>
double face_average(const F& f, const FaceGeom& fg, int order) {
  const GaussRule& r = GaussRule::get(order);
  const int p = static_cast<int>(r.nodes.size());
  double cu = 0.5 * (fg.lo_u + fg.hi_u), su = 0.5 * (fg.hi_u - fg.lo_u);
  double cv = 0.5 * (fg.lo_v + fg.hi_v), sv = 0.5 * (fg.hi_v - fg.lo_v);
  double sum = 0.0;
  for (int a = 0; a < p; ++a) {
    double u = cu + su * r.nodes[a];
    for (int b = 0; b < p; ++b) {
      double v = cv + sv * r.nodes[b];
      Vec3 pt = fg.point(u, v);
      sum += r.weights[a] * r.weights[b] * f(pt[0], pt[1], pt[2]);
    }
  }
  return sum / 4.0;  // weights sum to 2 per direction
}

/// Face geometry of local face p (0-based) of an element.
inline FaceGeom local_face_geom(const ElementGeom& g, int p) {
  if (p < 0 || p > 5) throw std::out_of_range("local_face_geom: p out of range");
  int axis = p / 2;
  double coord = (p % 2 == 0) ? g.lo[axis] : g.hi[axis];
  switch (axis) {
    case 0: return {0, coord, g.lo[1], g.hi[1], g.lo[2], g.hi[2]};
    case 1: return {1, coord, g.lo[0], g.hi[0], g.lo[2], g.hi[2]};
    default: return {2, coord, g.lo[0], g.hi[0], g.lo[1], g.hi[1]};
  }
}

/// Q_b u on the six faces of an element: face averages in the F1..F6 order.
template <class F>
std::array<double, 6> face_averages(const F& f, const ElementGeom& g, int order) {
  std::array<double, 6> out;
  for (int p = 0; p < 6; ++p) out[p] = face_average(f, local_face_geom(g, p), order);
  return out;
}

/// L2 projection Q_0 onto P1(T). The centered basis is orthogonal on a box,
/// so each coefficient is a single moment divided by the basis norm:
/// \int (x-x_c)^2 dT = |T| e_x^2 / 12.
template <class F>
P1Coeffs project_p1(const F& u, const ElementGeom& g, int order) {
  if (order < 2) throw std::invalid_argument("project_p1: order must be >= 2");
  P1Coeffs c;
  c.a0 = integrate_box(u, g, order) / g.volume;
  auto moment = [&](int d) {
    auto f = [&](double x, double y, double z) {
      Vec3 pt{x, y, z};
      return u(x, y, z) * (pt[d] - g.center[d]);
    };
    return integrate_box(f, g, order) / (g.volume * g.e[d] * g.e[d] / 12.0);
  };
  c.a1 = moment(0);
  c.a2 = moment(1);
  c.a3 = moment(2);
  return c;
}

/// L2 projection onto [P0(T)]^3: the per-component cell average of a vector field.
template <class F>
Vec3 project_cell_gradient(const F& grad, const ElementGeom& g, int order) {
  Vec3 out{};
  for (int d = 0; d < 3; ++d) {
    auto comp = [&](double x, double y, double z) { return grad(x, y, z)[d]; };
    out[d] = integrate_box(comp, g, order) / g.volume;
  }
  return out;
}

}  // namespace wg3d
