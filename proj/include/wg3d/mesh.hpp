// Tensor-product hexahedral partitions of the unit cube.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace wg3d {

using Vec3 = std::array<double, 3>;

/// Convention used when reducing per-element edge lengths to a single mesh size h.
enum class HDef { MaxEdge, Diagonal };

/// Geometry of one axis-aligned hexahedral element.
///
/// Faces are numbered F1(x-),F2(x+),F3(y-),F4(y+),F5(z-),F6(z+) with outward
/// normals -x,+x,-y,+y,-z,+z. Index p below is 0-based (p=0 is F1).
struct ElementGeom {
  int i = 0, j = 0, s = 0;
  Vec3 lo{}, hi{};
  Vec3 e{};       // edge lengths (e_x, e_y, e_z)
  Vec3 center{};  // M_c
  double volume = 0.0;
  std::array<double, 6> face_area{};
  std::array<Vec3, 6> face_center{};
  std::array<std::size_t, 6> face_ids{};
};

/// Which coordinate a face is orthogonal to, plus its lattice position.
struct FaceInfo {
  int axis = 0;  // 0: x-face, 1: y-face, 2: z-face
  int i = 0, j = 0, s = 0;
};

/// Rectangle geometry of a face, parameterized by the two tangential axes.
/// For axis==0 the (u,v) parameters run over (y,z), for axis==1 over (x,z),
/// for axis==2 over (x,y).
struct FaceGeom {
  int axis = 0;
  double coord = 0.0;  // constant coordinate along the face normal
  double lo_u = 0.0, hi_u = 0.0;
  double lo_v = 0.0, hi_v = 0.0;

  double area() const { return (hi_u - lo_u) * (hi_v - lo_v); }
  Vec3 point(double u, double v) const {
    switch (axis) {
      case 0: return {coord, u, v};
      case 1: return {u, coord, v};
      default: return {u, v, coord};
    }
  }
  Vec3 center() const { return point(0.5 * (lo_u + hi_u), 0.5 * (lo_v + hi_v)); }
};

/// A partition of (0,1)^3 as the Cartesian product of three 1D partitions.
/// Immutable after construction; all queries are pure.
class TensorMesh {
 public:
  TensorMesh(std::vector<double> xs, std::vector<double> ys, std::vector<double> zs,
             HDef h_def = HDef::MaxEdge)
      : xs_(std::move(xs)), ys_(std::move(ys)), zs_(std::move(zs)), h_def_(h_def) {
    validate_breaks(xs_, "xs");
    validate_breaks(ys_, "ys");
    validate_breaks(zs_, "zs");
  }

  static TensorMesh uniform(int n, int m, int q, HDef h_def = HDef::MaxEdge) {
    return TensorMesh(uniform_breaks(n), uniform_breaks(m), uniform_breaks(q), h_def);
  }

  /// Breakpoints x_i = phi(i/n) with phi(t) = (exp(stretch*t)-1)/(exp(stretch)-1).
  /// stretch -> 0 degenerates to uniform spacing.
  static TensorMesh graded(int n, int m, int q, double stretch, HDef h_def = HDef::MaxEdge) {
    if (stretch <= 0.0 && std::abs(stretch) > 1e-12)
      throw std::invalid_argument("graded: stretch must be positive");
    return TensorMesh(graded_breaks(n, stretch), graded_breaks(m, stretch),
                      graded_breaks(q, stretch), h_def);
  }

  /// Uniform n^3 partition with interior breakpoints shifted by
  /// amplitude*(u-0.5)/n, u drawn uniformly from (0,1) by a seeded generator.
  /// amplitude < 1 guarantees strict monotonicity.
  static TensorMesh perturbed_random(int n, std::uint64_t seed, double amplitude = 0.2,
                                     HDef h_def = HDef::MaxEdge) {
    if (n < 2) throw std::invalid_argument("perturbed_random: n must be >= 2");
    if (amplitude >= 1.0 || amplitude < 0.0)
      throw std::invalid_argument("perturbed_random: amplitude must be in [0,1)");
    std::mt19937_64 rng(seed);
    auto draw = [&rng]() {  // uniform in (0,1), bit-stable across platforms
      return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    };
    auto perturb = [&](std::vector<double> b) {
      for (int i = 1; i < n; ++i) b[i] += amplitude * (draw() - 0.5) / n;
      return b;
    };
    auto xs = perturb(uniform_breaks(n));
    auto ys = perturb(uniform_breaks(n));
    auto zs = perturb(uniform_breaks(n));
    return TensorMesh(std::move(xs), std::move(ys), std::move(zs), h_def);
  }

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  const std::vector<double>& zs() const { return zs_; }
  HDef h_def() const { return h_def_; }
  void set_h_def(HDef d) { h_def_ = d; }

  int nx() const { return static_cast<int>(xs_.size()) - 1; }
  int ny() const { return static_cast<int>(ys_.size()) - 1; }
  int nz() const { return static_cast<int>(zs_.size()) - 1; }

  std::size_t element_count() const {
    return static_cast<std::size_t>(nx()) * ny() * nz();
  }
  std::size_t x_face_count() const { return static_cast<std::size_t>(nx() + 1) * ny() * nz(); }
  std::size_t y_face_count() const { return static_cast<std::size_t>(nx()) * (ny() + 1) * nz(); }
  std::size_t z_face_count() const { return static_cast<std::size_t>(nx()) * ny() * (nz() + 1); }
  std::size_t face_count() const { return x_face_count() + y_face_count() + z_face_count(); }

  double mesh_size() const { return mesh_size(h_def_); }
  double mesh_size(HDef def) const {
    double ex = max_gap(xs_), ey = max_gap(ys_), ez = max_gap(zs_);
    if (def == HDef::MaxEdge) return std::max({ex, ey, ez});
    // Largest element diagonal. Elements are a tensor product, so the max
    // diagonal combines the largest gap in each direction.
    return std::sqrt(ex * ex + ey * ey + ez * ez);
  }

  // Face numbering: all x-faces first, then y-faces, then z-faces,
  // lexicographic (i fastest, then j, then s) within each kind.
  std::size_t x_face(int i, int j, int s) const {
    check_range(i, 0, nx(), "x_face i");
    check_range(j, 0, ny() - 1, "x_face j");
    check_range(s, 0, nz() - 1, "x_face s");
    return (static_cast<std::size_t>(s) * ny() + j) * (nx() + 1) + i;
  }
  std::size_t y_face(int i, int j, int s) const {
    check_range(i, 0, nx() - 1, "y_face i");
    check_range(j, 0, ny(), "y_face j");
    check_range(s, 0, nz() - 1, "y_face s");
    return x_face_count() + (static_cast<std::size_t>(s) * (ny() + 1) + j) * nx() + i;
  }
  std::size_t z_face(int i, int j, int s) const {
    check_range(i, 0, nx() - 1, "z_face i");
    check_range(j, 0, ny() - 1, "z_face j");
    check_range(s, 0, nz(), "z_face s");
    return x_face_count() + y_face_count() +
           (static_cast<std::size_t>(s) * ny() + j) * nx() + i;
  }
  std::size_t face_index(int axis, int i, int j, int s) const {
    switch (axis) {
      case 0: return x_face(i, j, s);
      case 1: return y_face(i, j, s);
      case 2: return z_face(i, j, s);
      default: throw std::invalid_argument("face_index: axis must be 0, 1 or 2");
    }
  }

  FaceInfo face_info(std::size_t fid) const {
    if (fid >= face_count()) throw std::out_of_range("face_info: id out of range");
    if (fid < x_face_count()) {
      int w = nx() + 1;
      return {0, static_cast<int>(fid % w), static_cast<int>((fid / w) % ny()),
              static_cast<int>(fid / (static_cast<std::size_t>(w) * ny()))};
    }
    fid -= x_face_count();
    if (fid < y_face_count()) {
      int w = nx();
      return {1, static_cast<int>(fid % w), static_cast<int>((fid / w) % (ny() + 1)),
              static_cast<int>(fid / (static_cast<std::size_t>(w) * (ny() + 1)))};
    }
    fid -= y_face_count();
    int w = nx();
    return {2, static_cast<int>(fid % w), static_cast<int>((fid / w) % ny()),
            static_cast<int>(fid / (static_cast<std::size_t>(w) * ny()))};
  }

  bool is_boundary(std::size_t fid) const {
    FaceInfo f = face_info(fid);
    switch (f.axis) {
      case 0: return f.i == 0 || f.i == nx();
      case 1: return f.j == 0 || f.j == ny();
      default: return f.s == 0 || f.s == nz();
    }
  }

  FaceGeom face_geom(std::size_t fid) const {
    FaceInfo f = face_info(fid);
    switch (f.axis) {
      case 0:
        return {0, xs_[f.i], ys_[f.j], ys_[f.j + 1], zs_[f.s], zs_[f.s + 1]};
      case 1:
        return {1, ys_[f.j], xs_[f.i], xs_[f.i + 1], zs_[f.s], zs_[f.s + 1]};
      default:
        return {2, zs_[f.s], xs_[f.i], xs_[f.i + 1], ys_[f.j], ys_[f.j + 1]};
    }
  }

  /// The unique element adjacent to a boundary face, as (i,j,s).
  std::array<int, 3> boundary_adjacent_element(std::size_t fid) const {
    if (!is_boundary(fid))
      throw std::invalid_argument("boundary_adjacent_element: face is interior");
    FaceInfo f = face_info(fid);
    switch (f.axis) {
      case 0: return {f.i == 0 ? 0 : nx() - 1, f.j, f.s};
      case 1: return {f.i, f.j == 0 ? 0 : ny() - 1, f.s};
      default: return {f.i, f.j, f.s == 0 ? 0 : nz() - 1};
    }
  }

  ElementGeom element_geom(int i, int j, int s) const {
    check_range(i, 0, nx() - 1, "element i");
    check_range(j, 0, ny() - 1, "element j");
    check_range(s, 0, nz() - 1, "element s");
    ElementGeom g;
    g.i = i; g.j = j; g.s = s;
    g.lo = {xs_[i], ys_[j], zs_[s]};
    g.hi = {xs_[i + 1], ys_[j + 1], zs_[s + 1]};
    for (int d = 0; d < 3; ++d) {
      g.e[d] = g.hi[d] - g.lo[d];
      g.center[d] = 0.5 * (g.lo[d] + g.hi[d]);
    }
    g.volume = g.e[0] * g.e[1] * g.e[2];
    g.face_area = {g.e[1] * g.e[2], g.e[1] * g.e[2], g.e[0] * g.e[2],
                   g.e[0] * g.e[2], g.e[0] * g.e[1], g.e[0] * g.e[1]};
    for (int p = 0; p < 6; ++p) {
      g.face_center[p] = g.center;
      g.face_center[p][p / 2] = (p % 2 == 0) ? g.lo[p / 2] : g.hi[p / 2];
    }
    g.face_ids = {x_face(i, j, s), x_face(i + 1, j, s), y_face(i, j, s),
                  y_face(i, j + 1, s), z_face(i, j, s), z_face(i, j, s + 1)};
    return g;
  }

 private:
  static std::vector<double> uniform_breaks(int n) {
    if (n < 1) throw std::invalid_argument("mesh: subdivision count must be >= 1");
    std::vector<double> b(n + 1);
    for (int i = 0; i <= n; ++i) b[i] = static_cast<double>(i) / n;
    return b;
  }

  static std::vector<double> graded_breaks(int n, double stretch) {
    if (n < 1) throw std::invalid_argument("mesh: subdivision count must be >= 1");
    if (std::abs(stretch) < 1e-12) return uniform_breaks(n);
    std::vector<double> b(n + 1);
    double denom = std::expm1(stretch);
    for (int i = 0; i <= n; ++i)
      b[i] = std::expm1(stretch * static_cast<double>(i) / n) / denom;
    b.front() = 0.0;
    b.back() = 1.0;
    return b;
  }

  static void validate_breaks(const std::vector<double>& b, const char* name) {
    if (b.size() < 2 || b.front() != 0.0 || b.back() != 1.0)
      throw std::invalid_argument(std::string("mesh: ") + name +
                                  " must start at 0 and end at 1");
    for (std::size_t i = 1; i < b.size(); ++i)
      if (b[i] <= b[i - 1])
        throw std::invalid_argument(std::string("mesh: ") + name +
                                    " must be strictly increasing");
  }

  static double max_gap(const std::vector<double>& b) {
    double g = 0.0;
    for (std::size_t i = 1; i < b.size(); ++i) g = std::max(g, b[i] - b[i - 1]);
    return g;
  }

  static void check_range(int v, int lo, int hi, const char* what) {
    if (v < lo || v > hi)
      throw std::out_of_range(std::string("mesh: ") + what + " out of range");
  }

  std::vector<double> xs_, ys_, zs_;
  HDef h_def_;
};

/// One real value per mesh face; the global unknown vector of the scheme.
using FaceField = std::vector<double>;

}  // namespace wg3d
