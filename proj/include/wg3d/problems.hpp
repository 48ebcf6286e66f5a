// Manufactured test problems: exact solution with derivatives, diffusion
// tensor, source term, and reaction coefficient. Sources are stored in
// closed form and guarded by a consistency residual check.
#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "wg3d/expression.hpp"
#include "wg3d/local_ops.hpp"
#include "wg3d/mesh.hpp"
#include "wg3d/quadrature.hpp"

namespace wg3d {

using MatrixField = std::function<Mat3(double, double, double)>;

struct Problem {
  std::string name;
  ScalarField u;
  VectorField grad_u;
  MatrixField hess_u;
  MatrixField A;
  VectorField div_A;  // row divergence (sum_j d a_ij / d x_j); zero for constant A
  ScalarField f;
  double reaction = 0.0;
  bool diagonal_A = true;
  /// When set, meshes used with this problem must place a breakpoint at this
  /// x so the coefficient jump lies on a mesh plane.
  std::optional<double> required_x_breakpoint;

  /// Residual of f + div(A grad u) - c u; should vanish for a consistent catalog entry.
  double consistency_residual(double x, double y, double z) const {
    Mat3 a = A(x, y, z);
    Mat3 H = hess_u(x, y, z);
    Vec3 g = grad_u(x, y, z);
    Vec3 dA = div_A(x, y, z);
    double div_flux = 0.0;
    for (int i = 0; i < 3; ++i) {
      div_flux += dA[i] * g[i];
      for (int j = 0; j < 3; ++j) div_flux += a[i][j] * H[i][j];
    }
    return f(x, y, z) + div_flux - reaction * u(x, y, z);
  }
};

namespace detail {
inline VectorField zero_vec_field() {
  return [](double, double, double) { return Vec3{0.0, 0.0, 0.0}; };
}
inline MatrixField constant_matrix_field(const Mat3& A) {
  return [A](double, double, double) { return A; };
}
}  // namespace detail

/// Globally linear exact solution with A = I and f = 0; the scheme must
/// reproduce these to machine precision (patch test).
inline Problem linear_problem(double a0, double a1, double a2, double a3) {
  Problem p;
  std::ostringstream nm;
  nm << "linear(" << a0 << "," << a1 << "," << a2 << "," << a3 << ")";
  p.name = nm.str();
  p.u = [=](double x, double y, double z) { return a0 + a1 * x + a2 * y + a3 * z; };
  p.grad_u = [=](double, double, double) { return Vec3{a1, a2, a3}; };
  p.hess_u = detail::constant_matrix_field(Mat3{});
  p.A = detail::constant_matrix_field(identity3());
  p.div_A = detail::zero_vec_field();
  p.f = [](double, double, double) { return 0.0; };
  return p;
}

/// The nine manufactured test cases.
inline Problem catalog(int id) {
  const double pi = M_PI;
  Problem p;
  p.A = detail::constant_matrix_field(identity3());
  p.div_A = detail::zero_vec_field();
  switch (id) {
    case 1: {
      p.name = "case1";
      p.u = [=](double x, double y, double z) {
        return std::sin(pi * x) * std::sin(pi * y) * std::sin(pi * z);
      };
      p.grad_u = [=](double x, double y, double z) {
        return Vec3{pi * std::cos(pi * x) * std::sin(pi * y) * std::sin(pi * z),
                    pi * std::sin(pi * x) * std::cos(pi * y) * std::sin(pi * z),
                    pi * std::sin(pi * x) * std::sin(pi * y) * std::cos(pi * z)};
      };
      p.hess_u = [=](double x, double y, double z) {
        double sx = std::sin(pi * x), cx = std::cos(pi * x);
        double sy = std::sin(pi * y), cy = std::cos(pi * y);
        double sz = std::sin(pi * z), cz = std::cos(pi * z);
        double p2 = pi * pi;
        Mat3 H;
        H[0][0] = H[1][1] = H[2][2] = -p2 * sx * sy * sz;
        H[0][1] = H[1][0] = p2 * cx * cy * sz;
        H[0][2] = H[2][0] = p2 * cx * sy * cz;
        H[1][2] = H[2][1] = p2 * sx * cy * cz;
        return H;
      };
      p.f = [=](double x, double y, double z) {
        return 3.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y) * std::sin(pi * z);
      };
      break;
    }
    case 2: {
      p.name = "case2";
      p.u = [](double x, double y, double z) {
        return std::cos(x) * std::sin(y) * std::cos(z);
      };
      p.grad_u = [](double x, double y, double z) {
        return Vec3{-std::sin(x) * std::sin(y) * std::cos(z),
                    std::cos(x) * std::cos(y) * std::cos(z),
                    -std::cos(x) * std::sin(y) * std::sin(z)};
      };
      p.hess_u = [](double x, double y, double z) {
        double sx = std::sin(x), cx = std::cos(x);
        double sy = std::sin(y), cy = std::cos(y);
        double sz = std::sin(z), cz = std::cos(z);
        Mat3 H;
        H[0][0] = H[1][1] = H[2][2] = -cx * sy * cz;
        H[0][1] = H[1][0] = -sx * cy * cz;
        H[0][2] = H[2][0] = sx * sy * sz;
        H[1][2] = H[2][1] = -cx * cy * sz;
        return H;
      };
      p.f = [](double x, double y, double z) {
        return 3.0 * std::cos(x) * std::sin(y) * std::cos(z);
      };
      break;
    }
    case 3: {
      p.name = "case3";
      p.u = [=](double x, double y, double z) {
        return std::cos(pi * x) * std::cos(pi * y) * std::exp(z);
      };
      p.grad_u = [=](double x, double y, double z) {
        double ez = std::exp(z);
        return Vec3{-pi * std::sin(pi * x) * std::cos(pi * y) * ez,
                    -pi * std::cos(pi * x) * std::sin(pi * y) * ez,
                    std::cos(pi * x) * std::cos(pi * y) * ez};
      };
      p.hess_u = [=](double x, double y, double z) {
        double sx = std::sin(pi * x), cx = std::cos(pi * x);
        double sy = std::sin(pi * y), cy = std::cos(pi * y);
        double ez = std::exp(z), p2 = pi * pi;
        Mat3 H;
        H[0][0] = -p2 * cx * cy * ez;
        H[1][1] = -p2 * cx * cy * ez;
        H[2][2] = cx * cy * ez;
        H[0][1] = H[1][0] = p2 * sx * sy * ez;
        H[0][2] = H[2][0] = -pi * sx * cy * ez;
        H[1][2] = H[2][1] = -pi * cx * sy * ez;
        return H;
      };
      p.f = [=](double x, double y, double z) {
        return (2.0 * pi * pi - 1.0) * std::cos(pi * x) * std::cos(pi * y) * std::exp(z);
      };
      break;
    }
    case 4:
    case 8: {
      p.name = id == 4 ? "case4" : "case8";
      p.u = [](double x, double y, double z) {
        return std::sin(x) * std::sin(y) * std::sin(z);
      };
      p.grad_u = [](double x, double y, double z) {
        return Vec3{std::cos(x) * std::sin(y) * std::sin(z),
                    std::sin(x) * std::cos(y) * std::sin(z),
                    std::sin(x) * std::sin(y) * std::cos(z)};
      };
      p.hess_u = [](double x, double y, double z) {
        double sx = std::sin(x), cx = std::cos(x);
        double sy = std::sin(y), cy = std::cos(y);
        double sz = std::sin(z), cz = std::cos(z);
        Mat3 H;
        H[0][0] = H[1][1] = H[2][2] = -sx * sy * sz;
        H[0][1] = H[1][0] = cx * cy * sz;
        H[0][2] = H[2][0] = cx * sy * cz;
        H[1][2] = H[2][1] = sx * cy * cz;
        return H;
      };
      if (id == 4) {
        Mat3 A = {{{10, 3, 1}, {3, 2, 1}, {1, 1, 2}}};
        p.A = detail::constant_matrix_field(A);
        p.diagonal_A = false;
        p.f = [](double x, double y, double z) {
          double sx = std::sin(x), cx = std::cos(x);
          double sy = std::sin(y), cy = std::cos(y);
          double sz = std::sin(z), cz = std::cos(z);
          return 14.0 * sx * sy * sz -
                 2.0 * (3.0 * cx * cy * sz + cx * sy * cz + sx * cy * cz);
        };
      } else {
        p.A = [](double x, double y, double z) {
          Mat3 A;
          A[0][0] = 1.0 + x * x;
          A[1][1] = 1.0 + y * y;
          A[2][2] = 1.0 + z * z;
          A[0][1] = A[1][0] = x * y / 4.0;
          A[0][2] = A[2][0] = x * z / 4.0;
          A[1][2] = A[2][1] = y * z / 4.0;
          return A;
        };
        p.div_A = [](double x, double y, double z) {
          // row i: d a_i1/dx + d a_i2/dy + d a_i3/dz
          return Vec3{2.0 * x + x / 4.0 + x / 4.0, y / 4.0 + 2.0 * y + y / 4.0,
                      z / 4.0 + z / 4.0 + 2.0 * z};
        };
        p.diagonal_A = false;
        // f = -(div_A . grad u + sum_ij a_ij u_ij)
        p.f = [A = p.A, dA = p.div_A, gu = p.grad_u, Hu = p.hess_u](double x, double y,
                                                                   double z) {
          Mat3 a = A(x, y, z), H = Hu(x, y, z);
          Vec3 g = gu(x, y, z), d = dA(x, y, z);
          double div_flux = 0.0;
          for (int i = 0; i < 3; ++i) {
            div_flux += d[i] * g[i];
            for (int j = 0; j < 3; ++j) div_flux += a[i][j] * H[i][j];
          }
          return -div_flux;
        };
      }
      break;
    }
    case 5:
    case 6: {
      p.name = id == 5 ? "case5" : "case6";
      p.u = [=](double x, double y, double z) {
        return std::cos(pi * x) * std::sin(pi * y) * std::cos(pi * z);
      };
      p.grad_u = [=](double x, double y, double z) {
        return Vec3{-pi * std::sin(pi * x) * std::sin(pi * y) * std::cos(pi * z),
                    pi * std::cos(pi * x) * std::cos(pi * y) * std::cos(pi * z),
                    -pi * std::cos(pi * x) * std::sin(pi * y) * std::sin(pi * z)};
      };
      p.hess_u = [=](double x, double y, double z) {
        double sx = std::sin(pi * x), cx = std::cos(pi * x);
        double sy = std::sin(pi * y), cy = std::cos(pi * y);
        double sz = std::sin(pi * z), cz = std::cos(pi * z);
        double p2 = pi * pi;
        Mat3 H;
        H[0][0] = H[1][1] = H[2][2] = -p2 * cx * sy * cz;
        H[0][1] = H[1][0] = -p2 * sx * cy * cz;
        H[0][2] = H[2][0] = p2 * sx * sy * sz;
        H[1][2] = H[2][1] = -p2 * cx * cy * sz;
        return H;
      };
      p.f = [=](double x, double y, double z) {
        return 3.0 * pi * pi * std::cos(pi * x) * std::sin(pi * y) * std::cos(pi * z);
      };
      break;
    }
    case 7: {
      p.name = "case7";
      p.required_x_breakpoint = 0.5;
      // Subdomain 1: x < 1/2, A = diag(1000,100,10),  u = 0.01 w
      // Subdomain 2: x > 1/2, A = diag(1,0.1,0.01),   u = 10 w
      // with w = cos(pi x) sin(pi y) cos(pi z).
      auto side = [](double x) { return x < 0.5 ? 0 : 1; };
      static constexpr double alpha[2] = {0.01, 10.0};
      static constexpr double ax[2] = {1000.0, 1.0};
      static constexpr double ay[2] = {100.0, 0.1};
      static constexpr double az[2] = {10.0, 0.01};
      auto w = [=](double x, double y, double z) {
        return std::cos(pi * x) * std::sin(pi * y) * std::cos(pi * z);
      };
      p.u = [=](double x, double y, double z) { return alpha[side(x)] * w(x, y, z); };
      p.grad_u = [=](double x, double y, double z) {
        double a = alpha[side(x)];
        return Vec3{-a * pi * std::sin(pi * x) * std::sin(pi * y) * std::cos(pi * z),
                    a * pi * std::cos(pi * x) * std::cos(pi * y) * std::cos(pi * z),
                    -a * pi * std::cos(pi * x) * std::sin(pi * y) * std::sin(pi * z)};
      };
      p.hess_u = [=](double x, double y, double z) {
        double a = alpha[side(x)];
        double sx = std::sin(pi * x), cx = std::cos(pi * x);
        double sy = std::sin(pi * y), cy = std::cos(pi * y);
        double sz = std::sin(pi * z), cz = std::cos(pi * z);
        double p2 = pi * pi;
        Mat3 H;
        H[0][0] = H[1][1] = H[2][2] = -a * p2 * cx * sy * cz;
        H[0][1] = H[1][0] = -a * p2 * sx * cy * cz;
        H[0][2] = H[2][0] = a * p2 * sx * sy * sz;
        H[1][2] = H[2][1] = -a * p2 * cx * cy * sz;
        return H;
      };
      p.A = [=](double x, double, double) {
        int k = side(x);
        Mat3 A{};
        A[0][0] = ax[k];
        A[1][1] = ay[k];
        A[2][2] = az[k];
        return A;
      };
      p.f = [=](double x, double y, double z) {
        int k = side(x);
        return alpha[k] * pi * pi * (ax[k] + ay[k] + az[k]) * w(x, y, z);
      };
      break;
    }
    case 9: {
      p.name = "case9";
      p.reaction = 2.0;
      auto X = [](double x) { return x * (1.0 - x); };
      auto Y = [](double y) { return y * (1.0 - 2.0 * y); };
      auto Z = [](double z) { return z * (1.0 - 3.0 * z); };
      p.u = [=](double x, double y, double z) { return X(x) * Y(y) * Z(z); };
      p.grad_u = [=](double x, double y, double z) {
        return Vec3{(1.0 - 2.0 * x) * Y(y) * Z(z), X(x) * (1.0 - 4.0 * y) * Z(z),
                    X(x) * Y(y) * (1.0 - 6.0 * z)};
      };
      p.hess_u = [=](double x, double y, double z) {
        Mat3 H;
        H[0][0] = -2.0 * Y(y) * Z(z);
        H[1][1] = -4.0 * X(x) * Z(z);
        H[2][2] = -6.0 * X(x) * Y(y);
        H[0][1] = H[1][0] = (1.0 - 2.0 * x) * (1.0 - 4.0 * y) * Z(z);
        H[0][2] = H[2][0] = (1.0 - 2.0 * x) * Y(y) * (1.0 - 6.0 * z);
        H[1][2] = H[2][1] = X(x) * (1.0 - 4.0 * y) * (1.0 - 6.0 * z);
        return H;
      };
      p.f = [=](double x, double y, double z) {
        return 2.0 * Y(y) * Z(z) + 4.0 * X(x) * Z(z) + 6.0 * X(x) * Y(y) +
               2.0 * X(x) * Y(y) * Z(z);
      };
      break;
    }
    default:
      throw std::invalid_argument("catalog: case id must be in 1..9");
  }
  return p;
}

/// Build a problem from a declarative config: one `key = expression` per
/// line, '#' comments. Keys: name, u, c, and the upper-triangle entries
/// a11,a12,a13,a22,a23,a33 (defaults: identity tensor, c = 0). Derivatives
/// and the source term are obtained by symbolic differentiation.
inline Problem problem_from_config_text(const std::string& text) {
  std::string name = "user";
  ExprPtr u_expr;
  double c = 0.0;
  std::array<std::array<ExprPtr, 3>, 3> a{};
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw std::invalid_argument("problem config: expected 'key = value' in: " + line);
      continue;
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key == "name") name = val;
    else if (key == "u") u_expr = ExprParser::parse(val);
    else if (key == "c") c = std::stod(val);
    else if (key.size() == 3 && key[0] == 'a') {
      int i = key[1] - '1', j = key[2] - '1';
      if (i < 0 || i > 2 || j < 0 || j > 2 || i > j)
        throw std::invalid_argument("problem config: unknown key " + key);
      a[i][j] = ExprParser::parse(val);
    } else {
      throw std::invalid_argument("problem config: unknown key " + key);
    }
  }
  if (!u_expr) throw std::invalid_argument("problem config: missing u");
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      if (!a[i][j]) a[i][j] = Expr::constant(i == j ? 1.0 : 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j) a[i][j] = a[j][i];

  Problem p;
  p.name = name;
  p.reaction = c;
  p.diagonal_A = a[0][1]->is_constant_zero() && a[0][2]->is_constant_zero() &&
                 a[1][2]->is_constant_zero();

  std::array<ExprPtr, 3> du;
  std::array<std::array<ExprPtr, 3>, 3> ddu;
  for (int d = 0; d < 3; ++d) du[d] = u_expr->diff(d);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) ddu[i][j] = du[i]->diff(j);
  std::array<ExprPtr, 3> divA;
  for (int i = 0; i < 3; ++i) {
    divA[i] = Expr::constant(0.0);
    for (int j = 0; j < 3; ++j)
      divA[i] = Expr::binary(Expr::Kind::Add, divA[i], a[i][j]->diff(j));
  }
  // f = -(divA . grad u + sum_ij a_ij u_ij) + c u
  ExprPtr f = Expr::constant(0.0);
  for (int i = 0; i < 3; ++i) {
    f = Expr::binary(Expr::Kind::Add, f, Expr::binary(Expr::Kind::Mul, divA[i], du[i]));
    for (int j = 0; j < 3; ++j)
      f = Expr::binary(Expr::Kind::Add, f,
                       Expr::binary(Expr::Kind::Mul, a[i][j], ddu[i][j]));
  }
  f = Expr::binary(Expr::Kind::Add, Expr::negate(f),
                   Expr::binary(Expr::Kind::Mul, Expr::constant(c), u_expr));

  p.u = [u_expr](double x, double y, double z) { return u_expr->eval(x, y, z); };
  p.grad_u = [du](double x, double y, double z) {
    return Vec3{du[0]->eval(x, y, z), du[1]->eval(x, y, z), du[2]->eval(x, y, z)};
  };
  p.hess_u = [ddu](double x, double y, double z) {
    Mat3 H;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) H[i][j] = ddu[i][j]->eval(x, y, z);
    return H;
  };
  p.A = [a](double x, double y, double z) {
    Mat3 A;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) A[i][j] = a[i][j]->eval(x, y, z);
    return A;
  };
  p.div_A = [divA](double x, double y, double z) {
    return Vec3{divA[0]->eval(x, y, z), divA[1]->eval(x, y, z), divA[2]->eval(x, y, z)};
  };
  p.f = [f](double x, double y, double z) { return f->eval(x, y, z); };
  return p;
}

inline Problem problem_from_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("problem config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return problem_from_config_text(ss.str());
}

}  // namespace wg3d
