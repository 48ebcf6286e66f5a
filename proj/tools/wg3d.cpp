// Command-line front end: refinement studies, reference-table comparison,
// matrix dumps, and an invariant self-test battery.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "wg3d/wg3d.hpp"

namespace {

constexpr int kExitSolverFailure = 2;
constexpr int kExitConfigError = 3;

int effective_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("WG3D_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) hw = std::min(hw, static_cast<unsigned>(cap));
  }
  return static_cast<int>(hw);
}

struct RunFlags {
  int case_id = 0;
  std::string problem_file;
  std::string mesh = "uniform:4x4x4";
  double rho = 1.0;
  std::string h_def = "max";
  std::string boundary = "l2";
  int quad_order = 4;
  double tol = 1e-12;
  std::size_t max_iter = 0;
  std::string precond = "jacobi";
  int levels = 1;
  int refine = 2;
  std::string format = "table";
  std::string output;
  std::string dump_matrix;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_study) {
  cmd->add_option("--case", f.case_id, "catalog test case (1..9)");
  cmd->add_option("--problem", f.problem_file, "user problem config file");
  cmd->add_option("--mesh", f.mesh,
                  "mesh spec: uniform:NxMxQ | graded:NxMxQ:stretch=S | random:N:seed=S:amp=A");
  cmd->add_option("--rho", f.rho, "stabilization parameter (default 1)");
  cmd->add_option("--h-def", f.h_def, "mesh size convention: max | diag");
  cmd->add_option("--boundary", f.boundary, "boundary projection: l2 | perturbed");
  cmd->add_option("--quad-order", f.quad_order, "Gauss points per direction");
  cmd->add_option("--tol", f.tol, "CG relative tolerance");
  cmd->add_option("--max-iter", f.max_iter, "CG iteration cap (0: automatic)");
  cmd->add_option("--precond", f.precond, "preconditioner: none | jacobi");
  if (with_study) {
    cmd->add_option("--levels", f.levels, "number of refinement levels");
    cmd->add_option("--refine", f.refine, "refinement factor between levels");
    cmd->add_option("--format", f.format, "output format: csv | table");
    cmd->add_option("--output", f.output, "write report here instead of stdout");
    cmd->add_option("--dump-matrix", f.dump_matrix,
                    "write the final-level matrix in Matrix Market format");
  }
}

wg3d::RunConfig make_config(const RunFlags& f) {
  wg3d::RunConfig cfg;
  if ((f.case_id == 0) == f.problem_file.empty())
    throw std::invalid_argument("specify exactly one of --case and --problem");
  cfg.problem = f.case_id ? wg3d::catalog(f.case_id)
                          : wg3d::problem_from_config_file(f.problem_file);
  cfg.mesh = wg3d::MeshSpec::parse(f.mesh);
  cfg.rho = f.rho;
  if (f.h_def == "max") cfg.h_def = wg3d::HDef::MaxEdge;
  else if (f.h_def == "diag") cfg.h_def = wg3d::HDef::Diagonal;
  else throw std::invalid_argument("--h-def must be 'max' or 'diag'");
  if (f.boundary == "l2") cfg.boundary = wg3d::BoundaryMode::L2;
  else if (f.boundary == "perturbed") cfg.boundary = wg3d::BoundaryMode::Perturbed;
  else throw std::invalid_argument("--boundary must be 'l2' or 'perturbed'");
  cfg.quad_order = f.quad_order;
  cfg.solver_tol = f.tol;
  cfg.solver_max_iter = f.max_iter;
  if (f.precond == "none") cfg.precond = wg3d::Preconditioner::None;
  else if (f.precond == "jacobi") cfg.precond = wg3d::Preconditioner::Jacobi;
  else throw std::invalid_argument("--precond must be 'none' or 'jacobi'");
  cfg.levels = f.levels;
  cfg.refinement = f.refine;
  cfg.threads = effective_threads();
  return cfg;
}

void write_report(const wg3d::StudyReport& report, const RunFlags& f) {
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!f.output.empty()) {
    file.open(f.output);
    if (!file) throw std::invalid_argument("cannot open output file " + f.output);
    out = &file;
  }
  if (f.format == "csv") wg3d::emit_csv(report, *out);
  else if (f.format == "table") wg3d::emit_table(report, *out);
  else throw std::invalid_argument("--format must be 'csv' or 'table'");
}

int cmd_run(const RunFlags& f) {
  wg3d::RunConfig cfg = make_config(f);
  wg3d::StudyReport report;
  try {
    report = wg3d::run_study(cfg);
  } catch (const wg3d::StudyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    write_report(e.partial, f);
    return kExitSolverFailure;
  }
  write_report(report, f);
  if (!f.dump_matrix.empty()) {
    int mult = 1;
    for (int l = 1; l < cfg.levels; ++l) mult *= cfg.refinement;
    wg3d::TensorMesh mesh = cfg.mesh.build(mult, cfg.h_def);
    wg3d::AssemblyOptions opts{cfg.rho, cfg.boundary, cfg.quad_order, cfg.threads};
    wg3d::write_matrix_market(wg3d::assemble(mesh, cfg.problem, opts).A, f.dump_matrix);
  }
  return 0;
}

int cmd_dump_matrix(const RunFlags& f, const std::string& path) {
  wg3d::RunConfig cfg = make_config(f);
  wg3d::TensorMesh mesh = cfg.mesh.build(1, cfg.h_def);
  wg3d::AssemblyOptions opts{cfg.rho, cfg.boundary, cfg.quad_order, cfg.threads};
  wg3d::write_matrix_market(wg3d::assemble(mesh, cfg.problem, opts).A, path);
  return 0;
}

int cmd_compare(const std::string& report_path, const std::string& ref_path, double rtol,
                bool verbose) {
  std::ifstream a(report_path), b(ref_path);
  if (!a) throw std::invalid_argument("cannot open " + report_path);
  if (!b) throw std::invalid_argument("cannot open " + ref_path);
  auto got = wg3d::CsvTable::read(a);
  auto ref = wg3d::CsvTable::read(b);
  auto res = wg3d::compare_tables(got, ref, rtol);
  if (verbose)
    for (const auto& line : res.lines) std::cout << line << "\n";
  std::cout << (res.pass ? "PASS" : "FAIL") << ": worst relative deviation "
            << std::scientific << res.worst_rel_diff << " at " << res.worst_cell
            << " (tolerance " << rtol << ")\n";
  return res.pass ? 0 : 1;
}

// --- selftest -------------------------------------------------------------

bool report_check(const std::string& name, bool ok, double worst) {
  std::cout << (ok ? "PASS" : "FAIL") << "  " << name;
  std::cout << "  (worst " << std::scientific << worst << ")\n";
  return ok;
}

int cmd_selftest() {
  using namespace wg3d;
  bool all = true;
  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  auto random_geom = [&]() {
    ElementGeom g;
    g.lo = {sym(rng), sym(rng), sym(rng)};
    for (int d = 0; d < 3; ++d) {
      g.e[d] = unit(rng);
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
  };

  {  // a15 weighted kernel identity and D row pairing
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      ElementGeom g = random_geom();
      Mat6 D = stabilizer_map(g);
      Vec6 v;
      double scale = 0.0;
      for (auto& x : v) {
        x = sym(rng);
        scale = std::max(scale, std::abs(x));
      }
      Vec6 Dv{};
      for (int p = 0; p < 6; ++p)
        for (int q = 0; q < 6; ++q) Dv[p] += D[p][q] * v[q];
      double a15 = g.face_area[0] * Dv[0] + g.face_area[2] * Dv[2] + g.face_area[4] * Dv[4];
      worst = std::max(worst, std::abs(a15) / scale);
      for (int d = 0; d < 3; ++d)
        worst = std::max(worst, std::abs(Dv[2 * d] - Dv[2 * d + 1]) / scale);
    }
    all &= report_check("stabilizer kernel identity + row pairing", worst < 1e-13, worst);
  }

  {  // extension reproduces linears; commutative property for cubics
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      ElementGeom g = random_geom();
      double c0 = sym(rng), c1 = sym(rng), c2 = sym(rng), c3 = sym(rng);
      auto psi = [&](double x, double y, double z) { return c0 + c1 * x + c2 * y + c3 * z; };
      Vec6 v;
      for (int p = 0; p < 6; ++p)
        v[p] = psi(g.face_center[p][0], g.face_center[p][1], g.face_center[p][2]);
      auto C = extension_map(g);
      std::array<double, 4> sc{};
      for (int k = 0; k < 4; ++k)
        for (int p = 0; p < 6; ++p) sc[k] += C[k][p] * v[p];
      worst = std::max(worst, std::abs(sc[0] - psi(g.center[0], g.center[1], g.center[2])));
      worst = std::max({worst, std::abs(sc[1] - c1), std::abs(sc[2] - c2),
                        std::abs(sc[3] - c3)});
      // commutative property: weak gradient of face averages = cell mean gradient
      auto w = [&](double x, double y, double z) {
        return x * x * x - 2.0 * y * y * z + x * y * z + c1 * x + c2 * y * y;
      };
      auto gw = [&](double x, double y, double z) {
        return Vec3{3.0 * x * x + y * z + c1, -4.0 * y * z + x * z + 2.0 * c2 * y,
                    -2.0 * y * y + x * y};
      };
      auto qb = face_averages(w, g, 4);
      auto G = weak_gradient_map(g);
      Vec3 mean = project_cell_gradient(gw, g, 4);
      for (int r = 0; r < 3; ++r) {
        double gd = 0.0;
        for (int p = 0; p < 6; ++p) gd += G[r][p] * qb[p];
        worst = std::max(worst, std::abs(gd - mean[r]));
      }
    }
    all &= report_check("extension P1 reproduction + commutative property", worst < 1e-12,
                        worst);
  }

  {  // patch test over mesh generators and rho
    double worst = 0.0;
    Problem lin = linear_problem(0.5, 2.0, -3.0, 1.0);
    std::vector<TensorMesh> meshes;
    meshes.push_back(TensorMesh::uniform(3, 3, 3));
    meshes.push_back(TensorMesh::graded(3, 3, 3, 1.0));
    meshes.push_back(TensorMesh::perturbed_random(3, 7, 0.2));
    for (const auto& mesh : meshes)
      for (double rho : {0.01, 1.0, 6.0}) {
        SparseSystem sys = assemble(mesh, lin, {.rho = rho});
        SolveReport sr;
        auto x = cg_solve(sys.A, sys.rhs, sr, 1e-13);
        auto u_b = expand_solution(sys, x);
        ErrorNorms n = error_norms(mesh, lin, u_b);
        for (double v : n.as_array()) worst = std::max(worst, v);
      }
    all &= report_check("patch test (linear exactness)", worst < 1e-9, worst);
  }

  {  // dense oracle: CG equals Cholesky
    double worst = 0.0;
    TensorMesh mesh = TensorMesh::uniform(3, 3, 3);
    SparseSystem sys = assemble(mesh, catalog(2), {.rho = 1.0});
    SolveReport sr;
    auto x_cg = cg_solve(sys.A, sys.rhs, sr, 1e-13);
    auto x_dense = dense_solve(sys.A, sys.rhs);
    for (std::size_t i = 0; i < x_cg.size(); ++i)
      worst = std::max(worst, std::abs(x_cg[i] - x_dense[i]));
    all &= report_check("CG vs dense Cholesky oracle", worst < 1e-10, worst);
  }

  {  // catalog consistency: f + div(A grad u) - c u = 0
    double worst = 0.0;
    std::uniform_real_distribution<double> pt(0.01, 0.99);
    for (int id = 1; id <= 9; ++id) {
      Problem p = catalog(id);
      for (int t = 0; t < 100; ++t) {
        double x = pt(rng), y = pt(rng), z = pt(rng);
        double scale = std::max(1.0, std::abs(p.f(x, y, z)));
        worst = std::max(worst, std::abs(p.consistency_residual(x, y, z)) / scale);
      }
    }
    all &= report_check("catalog source-term consistency", worst < 1e-10, worst);
  }

  std::cout << (all ? "selftest: all checks passed\n" : "selftest: FAILURES\n");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lowest-order simplified weak Galerkin solver for 3D elliptic problems"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "run a refinement study");
  add_run_flags(run, run_flags, true);

  auto* selftest = app.add_subcommand("selftest", "run the invariant self-test battery");

  std::string cmp_report, cmp_ref;
  double cmp_rtol = 0.02;
  bool cmp_verbose = false;
  auto* compare = app.add_subcommand("compare", "diff a report CSV against a reference CSV");
  compare->add_option("report", cmp_report, "report CSV")->required();
  compare->add_option("reference", cmp_ref, "reference CSV")->required();
  compare->add_option("--rtol", cmp_rtol, "relative tolerance per cell");
  compare->add_flag("--verbose", cmp_verbose, "print every cell comparison");

  RunFlags dump_flags;
  std::string dump_path;
  auto* dump = app.add_subcommand("dump-matrix", "assemble and write the system matrix");
  add_run_flags(dump, dump_flags, false);
  dump->add_option("--output", dump_path, "Matrix Market output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    if (run->parsed()) return cmd_run(run_flags);
    if (selftest->parsed()) return cmd_selftest();
    if (compare->parsed()) return cmd_compare(cmp_report, cmp_ref, cmp_rtol, cmp_verbose);
    if (dump->parsed()) return cmd_dump_matrix(dump_flags, dump_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
