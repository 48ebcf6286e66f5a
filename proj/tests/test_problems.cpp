#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "wg3d/local_ops.hpp"
#include "wg3d/problems.hpp"

using namespace wg3d;

TEST_CASE("catalog entries are internally consistent") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pt(0.01, 0.99);
  for (int id = 1; id <= 9; ++id) {
    Problem p = catalog(id);
    INFO("case " << id);
    for (int t = 0; t < 100; ++t) {
      double x = pt(rng), y = pt(rng), z = pt(rng);
      double scale = std::max(1.0, std::abs(p.f(x, y, z)));
      REQUIRE(std::abs(p.consistency_residual(x, y, z)) <= 1e-10 * scale);
      REQUIRE(is_spd3(p.A(x, y, z)));
    }
  }
  CHECK_THROWS_AS(catalog(0), std::invalid_argument);
  CHECK_THROWS_AS(catalog(10), std::invalid_argument);
}

TEST_CASE("catalog derivatives match numerical differentiation") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> pt(0.05, 0.95);
  const double step = 1e-5;
  for (int id = 1; id <= 9; ++id) {
    Problem p = catalog(id);
    INFO("case " << id);
    for (int t = 0; t < 30; ++t) {
      Vec3 q{pt(rng), pt(rng), pt(rng)};
      // Keep clear of the coefficient interface of the piecewise case.
      if (p.required_x_breakpoint && std::abs(q[0] - *p.required_x_breakpoint) < 0.05)
        q[0] += 0.1;
      Vec3 g = p.grad_u(q[0], q[1], q[2]);
      Mat3 H = p.hess_u(q[0], q[1], q[2]);
      for (int d = 0; d < 3; ++d) {
        Vec3 a = q, b = q;
        a[d] += step;
        b[d] -= step;
        double fd = (p.u(a[0], a[1], a[2]) - p.u(b[0], b[1], b[2])) / (2.0 * step);
        REQUIRE(g[d] == Catch::Approx(fd).margin(1e-6));
        for (int e = 0; e < 3; ++e) {
          double fd2 = (p.grad_u(a[0], a[1], a[2])[e] - p.grad_u(b[0], b[1], b[2])[e]) /
                       (2.0 * step);
          REQUIRE(H[d][e] == Catch::Approx(fd2).margin(1e-5));
        }
      }
      // div_A against numerical row divergence.
      Vec3 dA = p.div_A(q[0], q[1], q[2]);
      for (int i = 0; i < 3; ++i) {
        double sum = 0.0;
        for (int j = 0; j < 3; ++j) {
          Vec3 a = q, b = q;
          a[j] += step;
          b[j] -= step;
          sum += (p.A(a[0], a[1], a[2])[i][j] - p.A(b[0], b[1], b[2])[i][j]) / (2.0 * step);
        }
        REQUIRE(dA[i] == Catch::Approx(sum).margin(1e-6));
      }
    }
  }
}

TEST_CASE("catalog spot values") {
  Problem c1 = catalog(1);
  CHECK(c1.u(0.5, 0.5, 0.5) == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(c1.f(0.5, 0.5, 0.5) == Catch::Approx(3.0 * M_PI * M_PI).epsilon(1e-14));
  CHECK(c1.u(0.0, 0.3, 0.7) == Catch::Approx(0.0).margin(1e-15));  // homogeneous data
  CHECK(c1.reaction == 0.0);
  CHECK(c1.diagonal_A);

  Problem c4 = catalog(4);
  CHECK_FALSE(c4.diagonal_A);
  CHECK(c4.A(0, 0, 0)[0][0] == 10.0);
  CHECK(c4.A(0, 0, 0)[0][1] == 3.0);

  Problem c7 = catalog(7);
  REQUIRE(c7.required_x_breakpoint.has_value());
  CHECK(*c7.required_x_breakpoint == 0.5);
  CHECK(c7.A(0.25, 0.5, 0.5)[0][0] == 1000.0);
  CHECK(c7.A(0.75, 0.5, 0.5)[0][0] == 1.0);
  // The flux A u_x is continuous across the interface by construction:
  // alpha jumps by 1000x while a11 drops by the same factor.
  double left = c7.A(0.49, 0.3, 0.3)[0][0] * c7.grad_u(0.49, 0.3, 0.3)[0];
  double right = c7.A(0.51, 0.3, 0.3)[0][0] * c7.grad_u(0.51, 0.3, 0.3)[0];
  CHECK(left == Catch::Approx(right).epsilon(0.2));

  Problem c9 = catalog(9);
  CHECK(c9.reaction == 2.0);
  // Dirichlet data is not homogeneous on the whole boundary.
  CHECK(std::abs(c9.u(0.3, 1.0, 0.4)) > 1e-3);
}

TEST_CASE("linear problems form the patch-test family") {
  Problem p = linear_problem(0.5, 2.0, -3.0, 1.0);
  CHECK(p.u(1.0, 1.0, 1.0) == Catch::Approx(0.5).epsilon(1e-14));
  Vec3 g = p.grad_u(0.2, 0.9, 0.1);
  CHECK(g[0] == 2.0);
  CHECK(g[1] == -3.0);
  CHECK(g[2] == 1.0);
  CHECK(p.f(0.3, 0.3, 0.3) == 0.0);
  CHECK(p.consistency_residual(0.4, 0.2, 0.8) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("user problem config derives the source symbolically") {
  Problem p = problem_from_config_text(
      "# manufactured sine problem\n"
      "name = sines\n"
      "u = sin(pi*x)*sin(pi*y)*sin(pi*z)\n");
  CHECK(p.name == "sines");
  CHECK(p.diagonal_A);
  Problem ref = catalog(1);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> pt(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    double x = pt(rng), y = pt(rng), z = pt(rng);
    REQUIRE(p.u(x, y, z) == Catch::Approx(ref.u(x, y, z)).margin(1e-13));
    REQUIRE(p.f(x, y, z) == Catch::Approx(ref.f(x, y, z)).margin(1e-11));
    for (int d = 0; d < 3; ++d)
      REQUIRE(p.grad_u(x, y, z)[d] == Catch::Approx(ref.grad_u(x, y, z)[d]).margin(1e-12));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        REQUIRE(p.hess_u(x, y, z)[i][j] ==
                Catch::Approx(ref.hess_u(x, y, z)[i][j]).margin(1e-11));
  }
}

TEST_CASE("user problem config with full tensor and reaction") {
  Problem p = problem_from_config_text(
      "u = sin(x)*y + x*z^2\n"
      "c = 2\n"
      "a11 = 1 + x^2\n"
      "a12 = x*y/4\n"
      "a22 = 1 + y^2\n"
      "a33 = 2\n");
  CHECK(p.reaction == 2.0);
  CHECK_FALSE(p.diagonal_A);
  // The tensor is mirrored to the lower triangle.
  Mat3 A = p.A(0.4, 0.8, 0.1);
  CHECK(A[1][0] == A[0][1]);
  CHECK(A[0][1] == Catch::Approx(0.4 * 0.8 / 4.0).epsilon(1e-14));
  CHECK(A[2][2] == 2.0);
  // Symbolic machinery keeps the residual at zero.
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> pt(0.1, 0.9);
  for (int t = 0; t < 50; ++t) {
    double x = pt(rng), y = pt(rng), z = pt(rng);
    REQUIRE(std::abs(p.consistency_residual(x, y, z)) <= 1e-12);
  }
}

TEST_CASE("user problem config validation") {
  CHECK_THROWS_AS(problem_from_config_text("c = 1\n"), std::invalid_argument);  // no u
  CHECK_THROWS_AS(problem_from_config_text("u = x\nbogus = 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(problem_from_config_text("u = x\na21 = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(problem_from_config_text("u = x\na44 = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(problem_from_config_text("just some words\n"), std::invalid_argument);
  CHECK_THROWS_AS(problem_from_config_file("/nonexistent/problem.cfg"),
                  std::invalid_argument);
  // Blank lines and comments are fine; name defaults to "user".
  Problem p = problem_from_config_text("\n# comment only\nu = x*y\n\n");
  CHECK(p.name == "user");

  // Round trip through a file.
  std::string path = "test_problem_config.tmp";
  {
    std::ofstream out(path);
    out << "name = filecase\nu = x + 2*y\n";
  }
  Problem q = problem_from_config_file(path);
  CHECK(q.name == "filecase");
  CHECK(q.u(1, 1, 0) == 3.0);
  std::remove(path.c_str());
}
