// Global degree-of-freedom management over interior faces, sparse SPD
// assembly, and Dirichlet boundary treatment (plain or perturbed L2
// projection of the boundary data).
#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "wg3d/local_ops.hpp"
#include "wg3d/mesh.hpp"
#include "wg3d/problems.hpp"
#include "wg3d/quadrature.hpp"

namespace wg3d {

enum class BoundaryMode { L2, Perturbed };

struct AssemblyOptions {
  double rho = 1.0;
  BoundaryMode boundary = BoundaryMode::L2;
  int quad_order = 4;
  int threads = 1;
};

/// Interior faces get contiguous dof indices in face-id order; boundary
/// faces carry prescribed values.
struct DofMap {
  std::vector<std::int64_t> face_to_dof;  // -1 for boundary faces
  std::vector<std::size_t> dof_to_face;

  std::size_t n_dofs() const { return dof_to_face.size(); }
};

/// Symmetric sparse matrix in compressed-row form, both triangles stored,
/// column indices sorted within each row.
struct SparseMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> col;
  std::vector<double> val;

  void multiply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      double sum = 0.0;
      for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) sum += val[k] * x[col[k]];
      y[r] = sum;
    }
  }

  double& entry(std::size_t r, std::size_t c) {
    auto first = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[r]);
    auto last = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[r + 1]);
    auto it = std::lower_bound(first, last, c);
    if (it == last || *it != c) throw std::logic_error("SparseMatrix: entry not in pattern");
    return val[static_cast<std::size_t>(it - col.begin())];
  }
};

struct SparseSystem {
  SparseMatrix A;
  std::vector<double> rhs;
  DofMap dof_map;
  FaceField boundary_values;  // full face field, zero on interior faces
  double h = 0.0;             // global mesh size used in the stabilizer
};

inline DofMap build_dof_map(const TensorMesh& mesh) {
  DofMap map;
  map.face_to_dof.assign(mesh.face_count(), -1);
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    if (!mesh.is_boundary(f)) {
      map.face_to_dof[f] = static_cast<std::int64_t>(map.dof_to_face.size());
      map.dof_to_face.push_back(f);
    }
  }
  return map;
}

/// Prescribed values for every boundary face. L2 mode takes the face mean
/// of g. Perturbed mode adds the O(h^2) correction built from the two
/// tangential second derivatives of g, evaluated at the face centroid, and
/// the adjacent element's edge lengths; it requires a diagonal diffusion
/// tensor.
inline FaceField project_boundary(const Problem& problem, const TensorMesh& mesh,
                                  BoundaryMode mode, double rho, double h,
                                  int quad_order = 4) {
  if (mode == BoundaryMode::Perturbed && !problem.diagonal_A)
    throw std::invalid_argument(
        "project_boundary: the perturbed projection is defined only for diagonal "
        "diffusion tensors (problem '" + problem.name + "' has off-diagonal entries)");
  FaceField values(mesh.face_count(), 0.0);
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    if (!mesh.is_boundary(f)) continue;
    FaceGeom fg = mesh.face_geom(f);
    double qb = face_average(problem.u, fg, quad_order);
    if (mode == BoundaryMode::L2) {
      values[f] = qb;
      continue;
    }
    auto [ei, ej, es] = mesh.boundary_adjacent_element(f);
    ElementGeom geom = mesh.element_geom(ei, ej, es);
    int t1 = fg.axis == 0 ? 1 : 0;
    int t2 = fg.axis == 2 ? 1 : 2;
    Vec3 mc = fg.center();
    Mat3 A = problem.A(mc[0], mc[1], mc[2]);
    Mat3 H = problem.hess_u(mc[0], mc[1], mc[2]);
    double corr = 0.0;
    for (int t : {t1, t2}) {
      double gtt = H[t][t];
      double e = geom.e[t];
      corr += e * (e - 6.0 / rho * h * A[t][t]) * gtt;
    }
    values[f] = qb + corr / 12.0;
  }
  return values;
}

/// Element average of the diffusion tensor; exact for the bilinear form
/// since the weak gradient is constant per element.
inline Mat3 average_tensor(const MatrixField& A, const ElementGeom& g, int order) {
  const GaussRule& r = GaussRule::get(order);
  const int p = static_cast<int>(r.nodes.size());
  Mat3 sum{};
  for (int a = 0; a < p; ++a) {
    double x = g.center[0] + 0.5 * g.e[0] * r.nodes[a];
    for (int b = 0; b < p; ++b) {
      double y = g.center[1] + 0.5 * g.e[1] * r.nodes[b];
      for (int c = 0; c < p; ++c) {
        double z = g.center[2] + 0.5 * g.e[2] * r.nodes[c];
        double w = r.weights[a] * r.weights[b] * r.weights[c];
        Mat3 m = A(x, y, z);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) sum[i][j] += w * m[i][j];
      }
    }
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) sum[i][j] /= 8.0;
  return sum;
}

struct ElementKernel {
  Mat6 K{};
  Vec6 b{};
  std::array<std::size_t, 6> face_ids{};
};

inline ElementKernel element_kernel(const TensorMesh& mesh, const Problem& problem,
                                    int i, int j, int s, double rho, double h,
                                    int quad_order) {
  ElementGeom geom = mesh.element_geom(i, j, s);
  Mat3 A_bar = average_tensor(problem.A, geom, quad_order);
  ElementKernel k;
  k.K = stiffness(geom, A_bar, rho, h);
  if (problem.reaction != 0.0) {
    Mat6 M = reaction_block(geom, problem.reaction);
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) k.K[a][b] += M[a][b];
  }
  k.b = load(geom, problem.f, quad_order);
  k.face_ids = geom.face_ids;
  return k;
}

/// Assemble the face system. Element kernels may be computed in parallel;
/// the scatter is sequential in element order, so the result is deterministic.
inline SparseSystem assemble(const TensorMesh& mesh, const Problem& problem,
                             const AssemblyOptions& opts = {}) {
  if (opts.rho <= 0.0) throw std::invalid_argument("assemble: rho must be positive");
  if (problem.required_x_breakpoint) {
    double xb = *problem.required_x_breakpoint;
    bool found = false;
    for (double x : mesh.xs())
      if (std::abs(x - xb) < 1e-12) found = true;
    if (!found)
      throw std::invalid_argument(
          "assemble: problem '" + problem.name +
          "' requires a mesh breakpoint at its coefficient interface");
  }

  SparseSystem sys;
  sys.h = mesh.mesh_size();
  sys.dof_map = build_dof_map(mesh);
  sys.boundary_values =
      project_boundary(problem, mesh, opts.boundary, opts.rho, sys.h, opts.quad_order);

  const int n = mesh.nx(), m = mesh.ny(), q = mesh.nz();
  const std::size_t n_elems = mesh.element_count();
  std::vector<ElementKernel> kernels(n_elems);
  auto elem_of = [&](std::size_t idx) {
    int i = static_cast<int>(idx % n);
    int j = static_cast<int>((idx / n) % m);
    int s = static_cast<int>(idx / (static_cast<std::size_t>(n) * m));
    return std::array<int, 3>{i, j, s};
  };
  auto compute_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t idx = lo; idx < hi; ++idx) {
      auto [i, j, s] = elem_of(idx);
      kernels[idx] = element_kernel(mesh, problem, i, j, s, opts.rho, sys.h, opts.quad_order);
    }
  };
  int threads = std::max(1, opts.threads);
  if (threads == 1 || n_elems < 64) {
    compute_range(0, n_elems);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (n_elems + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      std::size_t lo = std::min(n_elems, t * chunk), hi = std::min(n_elems, lo + chunk);
      if (lo < hi) pool.emplace_back(compute_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // Sparsity pattern: a dof couples to the interior faces of its adjacent
  // elements (at most 11 columns per row).
  const std::size_t N = sys.dof_map.n_dofs();
  std::vector<std::vector<std::size_t>> pattern(N);
  for (const auto& k : kernels)
    for (int a = 0; a < 6; ++a) {
      std::int64_t ra = sys.dof_map.face_to_dof[k.face_ids[a]];
      if (ra < 0) continue;
      for (int b = 0; b < 6; ++b) {
        std::int64_t cb = sys.dof_map.face_to_dof[k.face_ids[b]];
        if (cb >= 0) pattern[static_cast<std::size_t>(ra)].push_back(static_cast<std::size_t>(cb));
      }
    }
  sys.A.n = N;
  sys.A.row_ptr.assign(N + 1, 0);
  for (std::size_t r = 0; r < N; ++r) {
    auto& row = pattern[r];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    sys.A.row_ptr[r + 1] = sys.A.row_ptr[r] + row.size();
  }
  sys.A.col.reserve(sys.A.row_ptr[N]);
  for (auto& row : pattern) sys.A.col.insert(sys.A.col.end(), row.begin(), row.end());
  sys.A.val.assign(sys.A.col.size(), 0.0);
  sys.rhs.assign(N, 0.0);

  for (const auto& k : kernels)
    for (int a = 0; a < 6; ++a) {
      std::int64_t ra = sys.dof_map.face_to_dof[k.face_ids[a]];
      if (ra < 0) continue;
      auto r = static_cast<std::size_t>(ra);
      sys.rhs[r] += k.b[a];
      for (int b = 0; b < 6; ++b) {
        std::int64_t cb = sys.dof_map.face_to_dof[k.face_ids[b]];
        if (cb >= 0)
          sys.A.entry(r, static_cast<std::size_t>(cb)) += k.K[a][b];
        else
          sys.rhs[r] -= k.K[a][b] * sys.boundary_values[k.face_ids[b]];
      }
    }
  return sys;
}

/// Combine the interior solution with the prescribed boundary values into a
/// full face field.
inline FaceField expand_solution(const SparseSystem& sys, const std::vector<double>& x) {
  FaceField full = sys.boundary_values;
  for (std::size_t d = 0; d < sys.dof_map.n_dofs(); ++d)
    full[sys.dof_map.dof_to_face[d]] = x[d];
  return full;
}

/// Matrix Market coordinate dump (general format, 1-based indices).
inline void write_matrix_market(const SparseMatrix& A, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.n << " " << A.n << " " << A.col.size() << "\n";
  out.precision(16);
  for (std::size_t r = 0; r < A.n; ++r)
    for (std::size_t k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k)
      out << r + 1 << " " << A.col[k] + 1 << " " << std::scientific << A.val[k] << "\n";
}

inline void write_matrix_market(const SparseMatrix& A, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_matrix_market(A, out);
}

}  // namespace wg3d
