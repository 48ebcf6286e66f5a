// Refinement studies: drive mesh -> assemble -> solve -> norms across
// levels, emit CSV or a paper-style table, and diff reports against
// reference tables.
#pragma once

#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wg3d/assembly.hpp"
#include "wg3d/errors.hpp"
#include "wg3d/mesh.hpp"
#include "wg3d/problems.hpp"
#include "wg3d/solver.hpp"

namespace wg3d {

/// Mesh generator selection parsed from CLI strings like
/// "uniform:8x8x8", "graded:8x8x8:stretch=1.0", "random:8:seed=42:amp=0.2".
struct MeshSpec {
  enum class Kind { Uniform, Graded, Random };
  Kind kind = Kind::Uniform;
  int n = 1, m = 1, q = 1;
  double stretch = 1.0;
  std::uint64_t seed = 42;
  double amplitude = 0.2;

  static MeshSpec parse(const std::string& text) {
    MeshSpec spec;
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw std::invalid_argument("mesh spec: empty");
    auto parse_counts = [&](const std::string& t) {
      if (std::sscanf(t.c_str(), "%dx%dx%d", &spec.n, &spec.m, &spec.q) != 3)
        throw std::invalid_argument("mesh spec: expected NxMxQ, got '" + t + "'");
    };
    auto parse_kv = [&](const std::string& t) {
      auto eq = t.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("mesh spec: expected key=value, got '" + t + "'");
      std::string key = t.substr(0, eq), val = t.substr(eq + 1);
      if (key == "stretch") spec.stretch = std::stod(val);
      else if (key == "seed") spec.seed = std::stoull(val);
      else if (key == "amp") spec.amplitude = std::stod(val);
      else throw std::invalid_argument("mesh spec: unknown key '" + key + "'");
    };
    if (parts[0] == "uniform" || parts[0] == "graded") {
      spec.kind = parts[0] == "uniform" ? Kind::Uniform : Kind::Graded;
      if (parts.size() < 2) throw std::invalid_argument("mesh spec: missing counts");
      parse_counts(parts[1]);
      for (std::size_t i = 2; i < parts.size(); ++i) parse_kv(parts[i]);
    } else if (parts[0] == "random") {
      spec.kind = Kind::Random;
      if (parts.size() < 2) throw std::invalid_argument("mesh spec: missing count");
      spec.n = spec.m = spec.q = std::stoi(parts[1]);
      for (std::size_t i = 2; i < parts.size(); ++i) parse_kv(parts[i]);
    } else {
      throw std::invalid_argument("mesh spec: unknown generator '" + parts[0] + "'");
    }
    return spec;
  }

  TensorMesh build(int multiplier, HDef h_def) const {
    switch (kind) {
      case Kind::Uniform:
        return TensorMesh::uniform(n * multiplier, m * multiplier, q * multiplier, h_def);
      case Kind::Graded:
        return TensorMesh::graded(n * multiplier, m * multiplier, q * multiplier, stretch,
                                  h_def);
      default:
        return TensorMesh::perturbed_random(n * multiplier, seed, amplitude, h_def);
    }
  }

  std::string label(int multiplier) const {
    std::ostringstream os;
    os << n * multiplier << "x" << m * multiplier << "x" << q * multiplier;
    return os.str();
  }
};

struct RunConfig {
  Problem problem;
  MeshSpec mesh;
  double rho = 1.0;
  HDef h_def = HDef::MaxEdge;
  BoundaryMode boundary = BoundaryMode::L2;
  int quad_order = 4;
  double solver_tol = 1e-12;
  std::size_t solver_max_iter = 0;  // 0: default heuristic
  Preconditioner precond = Preconditioner::Jacobi;
  int levels = 1;
  int refinement = 2;
  int threads = 1;
};

struct StudyRow {
  int level = 0;
  std::string mesh_label;
  double h = 0.0;
  std::size_t dofs = 0;
  ErrorNorms norms;
  std::size_t iterations = 0;
  double solve_seconds = 0.0;
};

inline constexpr std::array<const char*, 5> kNormColumns = {"inf_star", "l2_e0", "h1_db",
                                                            "w11_star", "w11_semi"};

struct StudyReport {
  std::vector<StudyRow> rows;
  std::array<RateSummary, 5> rates{};
  bool has_rates = false;
};

struct StudyError : std::runtime_error {
  StudyReport partial;
  StudyError(const std::string& what, StudyReport p)
      : std::runtime_error(what), partial(std::move(p)) {}
};

inline void compute_rates(StudyReport& report) {
  if (report.rows.size() < 2) return;
  std::vector<double> h;
  for (const auto& r : report.rows) h.push_back(r.h);
  for (int c = 0; c < 5; ++c) {
    std::vector<double> err;
    for (const auto& r : report.rows) err.push_back(r.norms.as_array()[c]);
    report.rates[c] = rates(h, err);
  }
  report.has_rates = true;
}

/// Run one refinement study. Levels are sequential; a solver failure aborts
/// with the partial report attached.
inline StudyReport run_study(const RunConfig& cfg) {
  if (cfg.levels < 1) throw std::invalid_argument("run_study: levels must be >= 1");
  if (cfg.refinement < 2) throw std::invalid_argument("run_study: refinement must be >= 2");
  StudyReport report;
  int mult = 1;
  for (int level = 0; level < cfg.levels; ++level, mult *= cfg.refinement) {
    TensorMesh mesh = cfg.mesh.build(mult, cfg.h_def);
    AssemblyOptions opts;
    opts.rho = cfg.rho;
    opts.boundary = cfg.boundary;
    opts.quad_order = cfg.quad_order;
    opts.threads = cfg.threads;
    SparseSystem sys = assemble(mesh, cfg.problem, opts);

    StudyRow row;
    row.level = level;
    row.mesh_label = cfg.mesh.label(mult);
    row.h = mesh.mesh_size();
    row.dofs = sys.dof_map.n_dofs();

    FaceField u_b;
    if (sys.dof_map.n_dofs() == 0) {
      // Single-element mesh: no interior unknowns, nothing to solve.
      u_b = sys.boundary_values;
    } else {
      SolveReport sr;
      std::vector<double> x =
          cg_solve(sys.A, sys.rhs, sr, cfg.solver_tol, cfg.solver_max_iter, cfg.precond);
      row.iterations = sr.iterations;
      row.solve_seconds = sr.seconds;
      if (!sr.converged) {
        report.rows.push_back(row);
        std::ostringstream os;
        os << "solver failed at level " << level << " (" << row.mesh_label << "): "
           << sr.iterations << " iterations, relative residual " << std::scientific
           << sr.relative_residual;
        throw StudyError(os.str(), report);
      }
      u_b = expand_solution(sys, x);
    }
    row.norms = error_norms(mesh, cfg.problem, u_b, cfg.quad_order);
    report.rows.push_back(row);
  }
  compute_rates(report);
  return report;
}

// ---------------------------------------------------------------------------
// Report I/O.

inline void emit_csv(const StudyReport& report, std::ostream& out) {
  out << "level,mesh,h,dofs";
  for (auto* c : kNormColumns) out << "," << c;
  out << ",iters,solve_s\n";
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return std::string(buf);
  };
  for (const auto& r : report.rows) {
    out << r.level << "," << r.mesh_label << "," << fmt(r.h) << "," << r.dofs;
    for (double v : r.norms.as_array()) out << "," << fmt(v);
    out << "," << r.iterations << "," << fmt(r.solve_seconds) << "\n";
  }
  if (report.has_rates) {
    out << "# rate_lsq";
    for (const auto& rs : report.rates) out << "," << fmt(rs.lsq_slope);
    out << "\n";
    if (!report.rates[0].pairwise.empty())
      for (std::size_t k = 0; k < report.rates[0].pairwise.size(); ++k) {
        out << "# rate_pair_" << k;
        for (const auto& rs : report.rates) out << "," << fmt(rs.pairwise[k]);
        out << "\n";
      }
  }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

inline StudyReport parse_csv(std::istream& in) {
  StudyReport report;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("parse_csv: empty input");
  auto header = split_csv_line(line);
  std::vector<std::string> expected = {"level", "mesh", "h", "dofs"};
  for (auto* c : kNormColumns) expected.emplace_back(c);
  expected.emplace_back("iters");
  expected.emplace_back("solve_s");
  if (header != expected) throw std::invalid_argument("parse_csv: unexpected schema");
  std::size_t pair_count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (line[0] == '#') {
      std::string tag = fields[0];
      if (fields.size() != 6) throw std::invalid_argument("parse_csv: bad rate row");
      if (tag == "# rate_lsq") {
        for (int c = 0; c < 5; ++c) report.rates[c].lsq_slope = std::stod(fields[c + 1]);
        report.has_rates = true;
      } else {
        for (int c = 0; c < 5; ++c) report.rates[c].pairwise.push_back(std::stod(fields[c + 1]));
        ++pair_count;
      }
      continue;
    }
    if (fields.size() != expected.size())
      throw std::invalid_argument("parse_csv: wrong field count in: " + line);
    StudyRow r;
    r.level = std::stoi(fields[0]);
    r.mesh_label = fields[1];
    r.h = std::stod(fields[2]);
    r.dofs = std::stoull(fields[3]);
    r.norms.inf_star = std::stod(fields[4]);
    r.norms.l2_e0 = std::stod(fields[5]);
    r.norms.h1_db = std::stod(fields[6]);
    r.norms.w11_star = std::stod(fields[7]);
    r.norms.w11_semi = std::stod(fields[8]);
    r.iterations = std::stoull(fields[9]);
    r.solve_seconds = std::stod(fields[10]);
    report.rows.push_back(r);
  }
  return report;
}

/// Paper-style aligned table, 4 significant digits, with a Rate footer.
inline void emit_table(const StudyReport& report, std::ostream& out) {
  out << std::left << std::setw(14) << "meshes";
  for (auto* c : kNormColumns) out << std::setw(13) << c;
  out << std::setw(8) << "iters" << "solve_s\n";
  char buf[64];
  for (const auto& r : report.rows) {
    out << std::left << std::setw(14) << r.mesh_label;
    for (double v : r.norms.as_array()) {
      std::snprintf(buf, sizeof buf, "%.4e", v);
      out << std::setw(13) << buf;
    }
    std::snprintf(buf, sizeof buf, "%.3f", r.solve_seconds);
    out << std::setw(8) << r.iterations << buf << "\n";
  }
  if (report.has_rates) {
    out << std::left << std::setw(14) << "Rate(lsq)";
    for (const auto& rs : report.rates) {
      std::snprintf(buf, sizeof buf, "%.2f", rs.lsq_slope);
      out << std::setw(13) << buf;
    }
    out << "\n";
  }
}

// ---------------------------------------------------------------------------
// Report comparison against reference tables.

/// A loosely-typed CSV table: header + string cells, '#' footer lines kept
/// aside. Reference tables transcribed from published results carry only a
/// subset of the full schema.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> footer;

  static CsvTable read(std::istream& in) {
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("CsvTable: empty input");
    t.header = split_csv_line(line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (line[0] == '#') {
        t.footer.push_back(line);
        continue;
      }
      auto fields = split_csv_line(line);
      if (fields.size() != t.header.size())
        throw std::invalid_argument("CsvTable: ragged row: " + line);
      t.rows.push_back(fields);
    }
    return t;
  }

  int column(const std::string& name) const {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == name) return static_cast<int>(c);
    return -1;
  }
};

struct CompareResult {
  bool pass = true;
  double worst_rel_diff = 0.0;
  std::string worst_cell;
  std::vector<std::string> lines;
};

/// Cell-by-cell relative comparison over the norm columns both tables share.
/// Row counts must match; missing shared norm columns is a schema mismatch.
inline CompareResult compare_tables(const CsvTable& got, const CsvTable& ref,
                                    double rtol) {
  if (got.rows.size() != ref.rows.size())
    throw std::invalid_argument("compare: row count mismatch");
  CompareResult res;
  int shared = 0;
  for (auto* name : kNormColumns) {
    int cg = got.column(name), cr = ref.column(name);
    if (cg < 0 || cr < 0) continue;
    ++shared;
    for (std::size_t r = 0; r < got.rows.size(); ++r) {
      double a = std::stod(got.rows[r][cg]);
      double b = std::stod(ref.rows[r][cr]);
      double denom = std::max(std::abs(b), 1e-300);
      double rel = std::abs(a - b) / denom;
      std::ostringstream os;
      os << name << " row " << r << ": got " << std::scientific << a << ", ref " << b
         << ", rel diff " << rel << (rel <= rtol ? "" : "  <-- exceeds tolerance");
      res.lines.push_back(os.str());
      if (rel > res.worst_rel_diff) {
        res.worst_rel_diff = rel;
        res.worst_cell = std::string(name) + " row " + std::to_string(r);
      }
      if (rel > rtol) res.pass = false;
    }
  }
  if (shared == 0) throw std::invalid_argument("compare: no shared norm columns");
  return res;
}

}  // namespace wg3d
