// Shared helpers for the unit tests: random element geometries and a dense
// brute-force assembly oracle used to validate the sparse scatter.
#pragma once

#include <random>
#include <vector>

#include "wg3d/wg3d.hpp"

namespace wg3d::testing {

/// Axis-aligned box with random position and edge lengths in [0.05, 1].
inline ElementGeom random_geom(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> len(0.05, 1.0);
  std::uniform_real_distribution<double> pos(-1.0, 1.0);
  ElementGeom g;
  for (int d = 0; d < 3; ++d) {
    g.lo[d] = pos(rng);
    g.e[d] = len(rng);
    g.hi[d] = g.lo[d] + g.e[d];
    g.center[d] = g.lo[d] + 0.5 * g.e[d];
  }
  g.volume = g.e[0] * g.e[1] * g.e[2];
  g.face_area = {g.e[1] * g.e[2], g.e[1] * g.e[2], g.e[0] * g.e[2],
                 g.e[0] * g.e[2], g.e[0] * g.e[1], g.e[0] * g.e[1]};
  for (int p = 0; p < 6; ++p) {
    g.face_center[p] = g.center;
    g.face_center[p][p / 2] = (p % 2 == 0) ? g.lo[p / 2] : g.hi[p / 2];
  }
  return g;
}

struct DenseSystem {
  std::vector<std::vector<double>> A;
  std::vector<double> rhs;
};

/// Brute-force reference assembly: same element kernels, but scattered into
/// a dense matrix with an independent boundary-elimination loop.
inline DenseSystem dense_assemble(const TensorMesh& mesh, const Problem& problem,
                                  const AssemblyOptions& opts) {
  DofMap map = build_dof_map(mesh);
  double h = mesh.mesh_size();
  FaceField g = project_boundary(problem, mesh, opts.boundary, opts.rho, h, opts.quad_order);
  std::size_t N = map.n_dofs();
  DenseSystem sys;
  sys.A.assign(N, std::vector<double>(N, 0.0));
  sys.rhs.assign(N, 0.0);
  for (int s = 0; s < mesh.nz(); ++s)
    for (int j = 0; j < mesh.ny(); ++j)
      for (int i = 0; i < mesh.nx(); ++i) {
        ElementKernel k =
            element_kernel(mesh, problem, i, j, s, opts.rho, h, opts.quad_order);
        for (int a = 0; a < 6; ++a) {
          auto ra = map.face_to_dof[k.face_ids[a]];
          if (ra < 0) continue;
          sys.rhs[static_cast<std::size_t>(ra)] += k.b[a];
          for (int b = 0; b < 6; ++b) {
            auto cb = map.face_to_dof[k.face_ids[b]];
            if (cb >= 0)
              sys.A[static_cast<std::size_t>(ra)][static_cast<std::size_t>(cb)] += k.K[a][b];
            else
              sys.rhs[static_cast<std::size_t>(ra)] -= k.K[a][b] * g[k.face_ids[b]];
          }
        }
      }
  return sys;
}

}  // namespace wg3d::testing
