// Command-line front end: mesh audits, Ritz projections, maximum-principle
// checks, stability studies and mesh export.
//
// Exit codes: 0 success, 1 verification/solve failure, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ritzlab/fem.hpp"
#include "ritzlab/io.hpp"
#include "ritzlab/maxprinciple.hpp"
#include "ritzlab/mesh.hpp"
#include "ritzlab/stability.hpp"

namespace {

using nlohmann::json;
using namespace ritzlab;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::filesystem::path output_dir(const std::string& flag_value) {
  const char* env = std::getenv("RITZLAB_OUT");
  std::filesystem::path dir = env ? env : flag_value;
  std::filesystem::create_directories(dir);
  return dir;
}

TetMesh load_mesh(const std::string& mesh_file, const std::string& domain,
                  int n, DomainSpec* spec_out = nullptr) {
  if (!mesh_file.empty()) {
    std::ifstream in(mesh_file);
    if (!in) throw UsageError("cannot open mesh file: " + mesh_file);
    return read_mesh_text(in);
  }
  DomainSpec spec = DomainSpec::preset(domain);
  if (spec_out) *spec_out = spec;
  return generate(spec, n);
}

std::vector<int> parse_levels(const std::string& levels) {
  std::vector<int> out;
  std::stringstream ss(levels);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  if (out.empty()) throw UsageError("no levels given");
  return out;
}

json audit_to_json(const DihedralReport& report, double tol) {
  json j;
  j["pass"] = report.pass();
  j["tol"] = tol;
  j["global_max_angle"] = report.global_max;
  j["violation_count"] = report.violations.size();
  j["violations"] = json::array();
  std::size_t limit = std::min<std::size_t>(report.violations.size(), 100);
  for (std::size_t i = 0; i < limit; ++i) {
    const auto& v = report.violations[i];
    j["violations"].push_back(
        {{"elem", v.elem}, {"edge", v.edge}, {"angle", v.angle}});
  }
  return j;
}

int cmd_mesh_audit(const std::string& mesh_file, const std::string& domain,
                   int n, double tol, const std::string& out) {
  TetMesh mesh = load_mesh(mesh_file, domain, n);
  DihedralReport report = audit_non_obtuse(mesh, tol);
  json j = audit_to_json(report, tol);
  j["vertices"] = mesh.num_vertices();
  j["tets"] = mesh.num_tets();
  auto dir = output_dir(out);
  std::ofstream os(dir / "mesh_audit.json");
  os << j.dump(2) << "\n";
  std::cout << "elements: " << mesh.num_tets()
            << "  max dihedral: " << fmt17(report.global_max)
            << "  violations: " << report.violations.size() << "\n";
  return report.pass() ? kExitOk : kExitFail;
}

const TestFunction& lookup_function(const std::vector<TestFunction>& catalog,
                                    const std::string& name) {
  const TestFunction* f = find_test_function(catalog, name);
  if (!f) {
    std::string names;
    for (const auto& g : catalog) names += " " + g.name;
    throw UsageError("unknown test function '" + name + "'; available:" + names);
  }
  return *f;
}

int cmd_ritz(const std::string& domain, int n, const std::string& func,
             double rtol, const std::string& out, bool vtk) {
  DomainSpec spec = DomainSpec::preset(domain);
  auto catalog = builtin_test_functions(spec);
  const TestFunction& u = lookup_function(catalog, func);

  TetMesh mesh = generate(spec, n);
  RitzResult result = ritz_project(mesh, u.field, rtol);

  NodalField ih = interpolate(mesh, u.field);
  double max_nodal_err = 0.0;
  for (int i = 0; i < mesh.num_vertices(); ++i)
    max_nodal_err = std::max(
        max_nodal_err, std::abs(result.field.values[i] - ih.values[i]));

  std::cout << "Rhu_linf: " << fmt17(linf_norm(result.field))
            << "  Rhu_w1inf: " << fmt17(w1inf_norm(mesh, result.field))
            << "  max_nodal_error_vs_u: " << fmt17(max_nodal_err) << "\n";
  std::cout << "cg: iterations " << result.stats.iterations << " residual "
            << fmt17(result.stats.relative_residual)
            << (result.stats.converged ? " converged" : " NOT CONVERGED")
            << "\n";

  auto dir = output_dir(out);
  {
    std::ofstream os(dir / ("ritz_" + domain + "_" + func + ".txt"));
    write_field_text(os, result.field);
  }
  if (vtk) {
    std::ofstream os(dir / ("ritz_" + domain + "_" + func + ".vtk"));
    write_vtk(os, mesh, &result.field, "ritz");
  }
  return result.stats.converged ? kExitOk : kExitFail;
}

int cmd_maxprinciple(const std::string& mesh_file, const std::string& domain,
                     int n, int trials, unsigned long long seed, double tol,
                     double rtol, const std::string& out) {
  TetMesh mesh = load_mesh(mesh_file, domain, n);
  SparseMatrix A = assemble_stiffness(mesh);

  SignAuditReport sign = offdiagonal_sign_audit(A, mesh.interior_nodes());
  ElementSignAudit elem = element_gradient_sign_audit(mesh);

  std::cout << "seed: " << seed << "\n";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int passed = 0;
  double worst_margin = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> g(mesh.num_vertices(), 0.0);
    for (int i = 0; i < mesh.num_vertices(); ++i)
      if (mesh.node_on_boundary[i]) g[i] = unif(rng);
    HarmonicResult harmonic = discrete_harmonic(mesh, A, g, rtol);
    MaxPrincipleCheck check = check_max_principle(harmonic.field, tol);
    if (check.pass) ++passed;
    worst_margin = std::min(worst_margin, check.margin);
  }
  bool ok = sign.pass && elem.pass && passed == trials;
  std::cout << passed << "/" << trials << " harmonic trials pass\n";
  std::cout << "sign audit: " << (sign.pass ? "pass" : "FAIL")
            << " worst entry " << fmt17(sign.worst_value) << "\n";

  json j;
  j["pass"] = ok;
  j["seed"] = seed;
  j["trials"] = trials;
  j["trials_passed"] = passed;
  j["worst_margin"] = worst_margin;
  j["sign_audit"] = {{"pass", sign.pass},
                     {"rows_scanned", sign.rows_scanned},
                     {"violation_count", sign.violation_count},
                     {"worst_entry",
                      {{"i", sign.worst_i}, {"j", sign.worst_j},
                       {"value", sign.worst_value}}}};
  j["element_audit"] = {{"pass", elem.pass},
                        {"worst_elem", elem.worst_elem},
                        {"worst_value", elem.worst_value}};
  auto dir = output_dir(out);
  std::ofstream os(dir / "maxprinciple.json");
  os << j.dump(2) << "\n";
  return ok ? kExitOk : kExitFail;
}

int cmd_study(const std::string& mesh_file, const std::string& domain,
              const std::string& levels_str, const std::string& func,
              int margin, double rtol, double audit_tol,
              const std::string& out) {
  if (!mesh_file.empty()) {
    // mesh-file input only gates on the audit; studies need a preset domain
    TetMesh mesh = load_mesh(mesh_file, domain, 1);
    DihedralReport report = audit_non_obtuse(mesh, audit_tol);
    if (!report.pass()) {
      std::cerr << "non-obtuse audit failed (" << report.violations.size()
                << " violations); refusing to run the study\n";
      return kExitFail;
    }
    throw UsageError("stability studies need --domain (a preset)");
  }
  DomainSpec spec = DomainSpec::preset(domain);
  auto catalog = builtin_test_functions(spec);
  const TestFunction& u = lookup_function(catalog, func);
  std::vector<int> levels = parse_levels(levels_str);

  StudyOptions options;
  options.margin = margin;
  options.rtol = rtol;
  options.audit_tol = audit_tol;
  StabilityReport report = run_study(spec, domain, u, levels, options);

  auto dir = output_dir(out);
  {
    std::ofstream os(dir / ("study_" + domain + "_" + func + ".csv"));
    write_csv(report, os);
  }
  {
    std::ofstream os(dir / ("study_" + domain + "_" + func + ".json"));
    write_json(report, os);
  }
  write_csv(report, std::cout);
  return kExitOk;
}

int cmd_export_mesh(const std::string& domain, int n, const std::string& out,
                    bool vtk) {
  DomainSpec spec = DomainSpec::preset(domain);
  TetMesh mesh = generate(spec, n);
  auto dir = output_dir(out);
  std::string base = domain + "_n" + std::to_string(n);
  {
    std::ofstream os(dir / (base + ".txt"));
    write_mesh_text(os, mesh);
  }
  if (vtk) {
    std::ofstream os(dir / (base + ".vtk"));
    write_vtk(os, mesh);
  }
  std::cout << "wrote " << (dir / (base + ".txt")).string() << " ("
            << mesh.num_vertices() << " vertices, " << mesh.num_tets()
            << " tets)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ritzlab: piecewise-linear Ritz projection laboratory on "
               "non-obtuse tetrahedral meshes"};
  app.require_subcommand(1);

  std::string mesh_file, domain = "cube", func = "sinprod", out = "out";
  std::string levels = "2,4,8";
  int n = 4, trials = 100, margin = 1;
  unsigned long long seed = 0;
  double tol = 1e-9, mp_tol = 1e-10, rtol = 1e-12;
  bool vtk = false;

  auto* audit = app.add_subcommand("mesh-audit", "dihedral angle audit");
  audit->add_option("--mesh", mesh_file, "mesh file (text format)");
  audit->add_option("--domain", domain, "domain preset");
  audit->add_option("--n", n, "subdivisions per unit cell");
  audit->add_option("--tol", tol, "angle tolerance (rad)");
  audit->add_option("--out", out, "output directory");

  auto* ritz = app.add_subcommand("ritz", "Ritz projection of a test function");
  ritz->add_option("--domain", domain, "domain preset");
  ritz->add_option("--n", n, "subdivisions per unit cell");
  ritz->add_option("--func", func, "test function name");
  ritz->add_option("--rtol", rtol, "CG relative tolerance");
  ritz->add_option("--out", out, "output directory");
  ritz->add_flag("--vtk", vtk, "also write a VTK file");

  auto* mp = app.add_subcommand("maxprinciple",
                                "M-matrix audit and harmonic trials");
  mp->add_option("--mesh", mesh_file, "mesh file (text format)");
  mp->add_option("--domain", domain, "domain preset");
  mp->add_option("--n", n, "subdivisions per unit cell");
  mp->add_option("--trials", trials, "number of random harmonic trials");
  mp->add_option("--seed", seed, "RNG seed (printed for reproducibility)");
  mp->add_option("--tol", mp_tol, "max-principle tolerance");
  mp->add_option("--rtol", rtol, "CG relative tolerance");
  mp->add_option("--out", out, "output directory");

  auto* study = app.add_subcommand("study", "refinement stability study");
  study->add_option("--mesh", mesh_file, "mesh file (audit gate only)");
  study->add_option("--domain", domain, "domain preset");
  study->add_option("--levels", levels, "comma-separated n values");
  study->add_option("--func", func, "test function name");
  study->add_option("--margin", margin, "extension margin in cells");
  study->add_option("--rtol", rtol, "CG relative tolerance");
  study->add_option("--tol", tol, "audit angle tolerance (rad)");
  study->add_option("--out", out, "output directory");

  auto* exp = app.add_subcommand("export-mesh", "write mesh files");
  exp->add_option("--domain", domain, "domain preset");
  exp->add_option("--n", n, "subdivisions per unit cell");
  exp->add_option("--out", out, "output directory");
  exp->add_flag("--vtk", vtk, "also write a VTK file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (audit->parsed())
      return cmd_mesh_audit(mesh_file, domain, n, tol, out);
    if (ritz->parsed()) return cmd_ritz(domain, n, func, rtol, out, vtk);
    if (mp->parsed())
      return cmd_maxprinciple(mesh_file, domain, n, trials, seed, mp_tol, rtol,
                              out);
    if (study->parsed())
      return cmd_study(mesh_file, domain, levels, func, margin, rtol, tol, out);
    if (exp->parsed()) return cmd_export_mesh(domain, n, out, vtk);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
