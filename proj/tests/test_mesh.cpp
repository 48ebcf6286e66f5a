#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "wg3d/mesh.hpp"

using namespace wg3d;

TEST_CASE("uniform mesh counts") {
  TensorMesh m = TensorMesh::uniform(4, 3, 2);
  CHECK(m.nx() == 4);
  CHECK(m.ny() == 3);
  CHECK(m.nz() == 2);
  CHECK(m.element_count() == 24);
  CHECK(m.x_face_count() == 5 * 3 * 2);
  CHECK(m.y_face_count() == 4 * 4 * 2);
  CHECK(m.z_face_count() == 4 * 3 * 3);
  CHECK(m.face_count() == 30 + 32 + 36);
}

TEST_CASE("mesh size conventions") {
  TensorMesh m = TensorMesh::uniform(4, 3, 2);
  CHECK(m.mesh_size(HDef::MaxEdge) == Catch::Approx(0.5).epsilon(1e-14));
  double diag = std::sqrt(0.25 * 0.25 + 1.0 / 9.0 + 0.25);
  CHECK(m.mesh_size(HDef::Diagonal) == Catch::Approx(diag).epsilon(1e-14));
  CHECK(m.mesh_size() == m.mesh_size(HDef::MaxEdge));  // default convention
  m.set_h_def(HDef::Diagonal);
  CHECK(m.mesh_size() == m.mesh_size(HDef::Diagonal));
}

TEST_CASE("face ids cover interior faces twice and boundary faces once") {
  for (const TensorMesh& m : {TensorMesh::uniform(3, 4, 5),
                              TensorMesh::perturbed_random(3, 11, 0.2)}) {
    std::map<std::size_t, int> hits;
    for (int s = 0; s < m.nz(); ++s)
      for (int j = 0; j < m.ny(); ++j)
        for (int i = 0; i < m.nx(); ++i)
          for (std::size_t fid : m.element_geom(i, j, s).face_ids) ++hits[fid];
    REQUIRE(hits.size() == m.face_count());
    for (auto [fid, n] : hits) CHECK(n == (m.is_boundary(fid) ? 1 : 2));
  }
}

TEST_CASE("face_info inverts face numbering") {
  TensorMesh m = TensorMesh::uniform(3, 4, 5);
  for (std::size_t fid = 0; fid < m.face_count(); ++fid) {
    FaceInfo f = m.face_info(fid);
    CHECK(m.face_index(f.axis, f.i, f.j, f.s) == fid);
  }
  CHECK_THROWS_AS(m.face_info(m.face_count()), std::out_of_range);
  CHECK_THROWS_AS(m.face_index(3, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("element volumes partition the unit cube") {
  for (const TensorMesh& m : {TensorMesh::graded(4, 5, 6, 1.0),
                              TensorMesh::perturbed_random(5, 3, 0.4)}) {
    double vol = 0.0;
    for (int s = 0; s < m.nz(); ++s)
      for (int j = 0; j < m.ny(); ++j)
        for (int i = 0; i < m.nx(); ++i) vol += m.element_geom(i, j, s).volume;
    CHECK(vol == Catch::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("graded breakpoints follow the exponential map") {
  TensorMesh m = TensorMesh::graded(2, 2, 2, 1.0);
  // phi(1/2) = (sqrt(e)-1)/(e-1)
  double expected = (std::sqrt(M_E) - 1.0) / (M_E - 1.0);
  CHECK(m.xs()[1] == Catch::Approx(expected).epsilon(1e-14));
  CHECK(m.xs().front() == 0.0);
  CHECK(m.xs().back() == 1.0);

  // A vanishing stretch degenerates to the uniform partition exactly.
  TensorMesh flat = TensorMesh::graded(8, 8, 8, 0.0);
  TensorMesh uni = TensorMesh::uniform(8, 8, 8);
  for (int i = 0; i <= 8; ++i) CHECK(flat.xs()[i] == uni.xs()[i]);

  CHECK_THROWS_AS(TensorMesh::graded(4, 4, 4, -1.0), std::invalid_argument);
}

TEST_CASE("perturbed meshes are reproducible and stay monotone") {
  TensorMesh a = TensorMesh::perturbed_random(8, 42, 0.2);
  TensorMesh b = TensorMesh::perturbed_random(8, 42, 0.2);
  TensorMesh c = TensorMesh::perturbed_random(8, 43, 0.2);
  CHECK(a.xs() == b.xs());
  CHECK(a.ys() == b.ys());
  CHECK(a.xs() != c.xs());

  // Interior points move by at most amplitude/(2n) from the uniform grid,
  // so element lengths deviate from 1/n by less than amplitude/n.
  const int n = 8;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    TensorMesh m = TensorMesh::perturbed_random(n, seed, 0.9);
    for (const auto* br : {&m.xs(), &m.ys(), &m.zs()})
      for (int i = 1; i <= n; ++i) {
        double len = (*br)[i] - (*br)[i - 1];
        REQUIRE(len > 0.0);
        REQUIRE(std::abs(len - 1.0 / n) < 0.9 / n);
      }
  }

  TensorMesh zero = TensorMesh::perturbed_random(4, 42, 0.0);
  CHECK(zero.xs() == TensorMesh::uniform(4, 4, 4).xs());

  CHECK_THROWS_AS(TensorMesh::perturbed_random(4, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TensorMesh::perturbed_random(4, 0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(TensorMesh::perturbed_random(1, 0, 0.2), std::invalid_argument);
}

TEST_CASE("breakpoint validation") {
  CHECK_THROWS_AS(TensorMesh({0.0, 0.5}, {0.0, 1.0}, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(TensorMesh({0.1, 1.0}, {0.0, 1.0}, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(TensorMesh({0.0, 0.6, 0.5, 1.0}, {0.0, 1.0}, {0.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(TensorMesh({0.0, 0.5, 0.5, 1.0}, {0.0, 1.0}, {0.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(TensorMesh::uniform(0, 1, 1), std::invalid_argument);
}

TEST_CASE("element geometry of a 2x2x2 uniform mesh") {
  TensorMesh m = TensorMesh::uniform(2, 2, 2);
  ElementGeom g = m.element_geom(0, 0, 0);
  CHECK(g.e[0] == 0.5);
  CHECK(g.volume == 0.125);
  for (double a : g.face_area) CHECK(a == 0.25);
  CHECK(g.center[0] == 0.25);
  CHECK(g.face_center[0][0] == 0.0);   // F1 sits on x = 0
  CHECK(g.face_center[0][1] == 0.25);
  CHECK(g.face_center[1][0] == 0.5);   // F2 sits on x = 1/2
  CHECK(g.face_center[3][1] == 0.5);   // F4 sits on y = 1/2
  CHECK(g.face_center[5][2] == 0.5);   // F6 sits on z = 1/2

  CHECK_THROWS_AS(m.element_geom(2, 0, 0), std::out_of_range);
  CHECK_THROWS_AS(m.element_geom(0, -1, 0), std::out_of_range);
}

TEST_CASE("face geometry matches the breakpoints") {
  TensorMesh m = TensorMesh::graded(3, 3, 3, 1.0);
  FaceGeom fg = m.face_geom(m.x_face(1, 0, 2));
  CHECK(fg.axis == 0);
  CHECK(fg.coord == m.xs()[1]);
  CHECK(fg.lo_u == m.ys()[0]);
  CHECK(fg.hi_u == m.ys()[1]);
  CHECK(fg.lo_v == m.zs()[2]);
  CHECK(fg.hi_v == m.zs()[3]);
  CHECK(fg.area() == Catch::Approx((m.ys()[1] - m.ys()[0]) * (m.zs()[3] - m.zs()[2])));
  Vec3 p = fg.point(0.5, 0.7);
  CHECK(p[0] == fg.coord);
  CHECK(p[1] == 0.5);
  CHECK(p[2] == 0.7);
}

TEST_CASE("boundary classification and adjacency") {
  TensorMesh m = TensorMesh::uniform(2, 2, 2);
  CHECK(m.is_boundary(m.x_face(0, 1, 1)));
  CHECK(m.is_boundary(m.x_face(2, 0, 0)));
  CHECK_FALSE(m.is_boundary(m.x_face(1, 0, 0)));
  CHECK(m.boundary_adjacent_element(m.x_face(0, 1, 1)) == std::array<int, 3>{0, 1, 1});
  CHECK(m.boundary_adjacent_element(m.x_face(2, 0, 0)) == std::array<int, 3>{1, 0, 0});
  CHECK(m.boundary_adjacent_element(m.z_face(1, 1, 2)) == std::array<int, 3>{1, 1, 1});
  CHECK_THROWS_AS(m.boundary_adjacent_element(m.x_face(1, 0, 0)), std::invalid_argument);

  // 2x1x1: exactly one interior face.
  TensorMesh line = TensorMesh::uniform(2, 1, 1);
  int interior = 0;
  for (std::size_t f = 0; f < line.face_count(); ++f)
    if (!line.is_boundary(f)) ++interior;
  CHECK(interior == 1);
}
