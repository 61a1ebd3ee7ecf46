#include "ritzlab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace ritzlab {

namespace {

bool point_in_domain(const DomainSpec& spec, const Vec3& p, double eps = 1e-12) {
  for (const auto& c : spec.cells) {
    if (p.x >= c[0] - eps && p.x <= c[0] + 1 + eps && p.y >= c[1] - eps &&
        p.y <= c[1] + 1 + eps && p.z >= c[2] - eps && p.z <= c[2] + 1 + eps)
      return true;
  }
  return false;
}

bool is_fichera(const DomainSpec& spec) {
  return spec.cells == DomainSpec::preset("fichera").cells;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

std::vector<TestFunction> builtin_test_functions(const DomainSpec& spec) {
  auto lo = spec.box_min();
  auto hi = spec.box_max();
  const Vec3 blo = {static_cast<double>(lo[0]), static_cast<double>(lo[1]),
                    static_cast<double>(lo[2])};
  const Vec3 bhi = {static_cast<double>(hi[0]), static_cast<double>(hi[1]),
                    static_cast<double>(hi[2])};
  const Vec3 ext = bhi - blo;

  std::vector<TestFunction> catalog;

  {
    TestFunction f;
    f.name = "const";
    f.field.value = [](const Vec3&) { return 1.0; };
    f.field.gradient = [](const Vec3&) { return Vec3{0, 0, 0}; };
    f.reg = Regularity::Smooth;
    f.exact_sup = 1.0;
    f.exact_w1inf = 1.0;
    catalog.push_back(std::move(f));
  }
  {
    TestFunction f;
    f.name = "linear";
    f.field.value = [](const Vec3& p) { return 1.0 + 2.0 * p.x - 3.0 * p.y + p.z; };
    f.field.gradient = [](const Vec3&) { return Vec3{2.0, -3.0, 1.0}; };
    f.reg = Regularity::Smooth;
    catalog.push_back(std::move(f));
  }
  {
    TestFunction f;
    f.name = "quadratic";
    f.field.value = [](const Vec3& p) { return p.x * p.x + p.y * p.z; };
    f.field.gradient = [](const Vec3& p) { return Vec3{2.0 * p.x, p.z, p.y}; };
    f.reg = Regularity::Smooth;
    catalog.push_back(std::move(f));
  }
  {
    TestFunction f;
    f.name = "sinprod";
    const Vec3 k = {kPi / ext.x, kPi / ext.y, kPi / ext.z};
    f.field.value = [blo, k](const Vec3& p) {
      return std::sin(k.x * (p.x - blo.x)) * std::sin(k.y * (p.y - blo.y)) *
             std::sin(k.z * (p.z - blo.z));
    };
    f.field.gradient = [blo, k](const Vec3& p) {
      double sx = std::sin(k.x * (p.x - blo.x)), cx = std::cos(k.x * (p.x - blo.x));
      double sy = std::sin(k.y * (p.y - blo.y)), cy = std::cos(k.y * (p.y - blo.y));
      double sz = std::sin(k.z * (p.z - blo.z)), cz = std::cos(k.z * (p.z - blo.z));
      return Vec3{k.x * cx * sy * sz, k.y * sx * cy * sz, k.z * sx * sy * cz};
    };
    f.reg = Regularity::Smooth;
    if (point_in_domain(spec, blo + ext * 0.5)) f.exact_sup = 1.0;
    catalog.push_back(std::move(f));
  }
  {
    TestFunction f;
    f.name = "layer";
    const double eps = 0.25;
    const double x0 = blo.x;
    f.field.value = [x0, eps](const Vec3& p) { return std::exp(-(p.x - x0) / eps); };
    f.field.gradient = [x0, eps](const Vec3& p) {
      return Vec3{-std::exp(-(p.x - x0) / eps) / eps, 0.0, 0.0};
    };
    f.reg = Regularity::Smooth;
    f.exact_sup = 1.0;
    f.exact_w1inf = std::max(1.0, 1.0 / eps);
    f.feature_scale = eps;
    catalog.push_back(std::move(f));
  }
  {
    TestFunction f;
    f.name = "kink";
    const double c = 0.5 * (blo.x + bhi.x);
    f.field.value = [c](const Vec3& p) { return std::abs(p.x - c) + p.y; };
    f.field.gradient = [c](const Vec3& p) {
      return Vec3{p.x >= c ? 1.0 : -1.0, 1.0, 0.0};
    };
    f.reg = Regularity::W1inf;
    catalog.push_back(std::move(f));
  }
  if (is_fichera(spec)) {
    for (double alpha : {2.0 / 3.0, 0.5}) {
      TestFunction f;
      f.name = alpha > 0.6 ? "corner23" : "corner12";
      const Vec3 corner = {1.0, 1.0, 1.0};
      f.field.value = [corner, alpha](const Vec3& p) {
        return std::pow(norm(p - corner), alpha);
      };
      f.field.gradient = [corner, alpha](const Vec3& p) {
        Vec3 d = p - corner;
        double rho = norm(d);
        if (rho == 0.0) return Vec3{0, 0, 0};
        return d * (alpha * std::pow(rho, alpha - 2.0));
      };
      f.reg = Regularity::Cont;  // gradient blows up at the corner
      f.exact_sup = std::pow(3.0, alpha / 2.0);  // attained at distance sqrt(3)
      catalog.push_back(std::move(f));
    }
  }
  return catalog;
}

const TestFunction* find_test_function(const std::vector<TestFunction>& catalog,
                                       const std::string& name) {
  for (const auto& f : catalog)
    if (f.name == name) return &f;
  return nullptr;
}

ScalarField build_extension(const ScalarField& u, const DomainSpec& spec,
                            int margin, const ExtensionRecipe& recipe) {
  if (recipe.cutoff_cells > static_cast<double>(margin))
    throw std::invalid_argument("cutoff width exceeds the extension margin");
  auto lo = spec.box_min();
  auto hi = spec.box_max();
  const Vec3 blo = {static_cast<double>(lo[0] - margin),
                    static_cast<double>(lo[1] - margin),
                    static_cast<double>(lo[2] - margin)};
  const Vec3 bhi = {static_cast<double>(hi[0] + margin),
                    static_cast<double>(hi[1] + margin),
                    static_cast<double>(hi[2] + margin)};
  const double w = recipe.cutoff_cells;
  const double M = recipe.clamp_bound;
  auto inner_value = u.value;

  ScalarField out;
  out.value = [blo, bhi, w, M, inner_value](const Vec3& p) {
    double d = std::min({p.x - blo.x, bhi.x - p.x, p.y - blo.y, bhi.y - p.y,
                         p.z - blo.z, bhi.z - p.z});
    double chi = std::clamp(d / w, 0.0, 1.0);
    if (chi == 0.0) return 0.0;
    return chi * std::clamp(inner_value(p), -M, M);
  };
  return out;
}

IdentityRecord verify_identity_3_2(const TetMesh& mesh,
                                   const SparseMatrix& omega_stiffness,
                                   const std::vector<double>& u_load,
                                   const ExtendedMesh& ext,
                                   const NodalField& aux_outer, double tol) {
  NodalField w = restrict_to_omega(mesh, ext, aux_outer);
  std::vector<double> Aw = matvec(omega_stiffness, w.values);
  IdentityRecord record;
  for (int i : mesh.interior_nodes()) {
    record.residual_inf = std::max(record.residual_inf, std::abs(Aw[i] - u_load[i]));
    record.normalizer = std::max(record.normalizer, std::abs(u_load[i]));
  }
  record.normalized = record.normalizer > 0.0
                          ? record.residual_inf / record.normalizer
                          : record.residual_inf;
  record.pass = record.normalized <= tol;
  return record;
}

StabilityReport run_study(const DomainSpec& spec, const std::string& domain_name,
                          const TestFunction& u, const std::vector<int>& levels,
                          const StudyOptions& options) {
  for (std::size_t k = 1; k < levels.size(); ++k)
    if (levels[k] <= levels[k - 1])
      throw std::invalid_argument("study levels must be strictly increasing");

  StabilityReport report;
  report.domain = domain_name;
  report.func = u.name;
  for (int n : levels) {
    TetMesh mesh = generate(spec, n);
    DihedralReport audit = audit_non_obtuse(mesh, options.audit_tol);
    if (!audit.pass())
      throw std::runtime_error(
          "non-obtuse audit failed at level n=" + std::to_string(n) +
          "; the stability bounds assume non-obtuse elements");
    MeshMetrics met = metrics(mesh);

    SparseMatrix A = assemble_stiffness(mesh);
    RitzResult ritz = ritz_project(mesh, A, u.field, options.rtol);

    StudyRow row;
    row.n = n;
    row.h = met.h_max;
    row.log_h = std::abs(std::log(met.h_max));
    row.u_linf = u.exact_sup ? *u.exact_sup : field_linf(u.field, mesh);
    row.rhu_linf = linf_norm(ritz.field);
    row.ratio1 = row.rhu_linf / row.u_linf;
    row.ratio2 = row.ratio1 / row.log_h;
    row.cg_iters = ritz.stats.iterations;
    row.residual = ritz.stats.relative_residual;
    if (u.feature_scale && *u.feature_scale < 2.0 * met.h_max)
      row.under_resolved = true;

    if (u.has_w1inf()) {
      row.u_w1inf = u.exact_w1inf ? *u.exact_w1inf : field_w1inf(u.field, mesh);
      row.rhu_w1inf = w1inf_norm(mesh, ritz.field);
      row.ratio3 = *row.rhu_w1inf / (row.log_h * *row.u_w1inf);
    }

    if (options.with_extension) {
      ExtendedMesh ext = extend_to_box(mesh, spec, options.margin);
      ExtensionRecipe recipe;
      recipe.cutoff_cells = options.cutoff_cells;
      recipe.clamp_bound = row.u_linf;
      ScalarField u_ext = build_extension(u.field, spec, options.margin, recipe);
      AuxResult aux = solve_aux(ext, u_ext, options.rtol);
      NodalField w = restrict_to_omega(mesh, ext, aux.field);

      NodalField diff;
      diff.mesh = &mesh;
      diff.values.resize(mesh.num_vertices());
      for (int i = 0; i < mesh.num_vertices(); ++i)
        diff.values[i] = ritz.field.values[i] - w.values[i];

      row.aux_linf = linf_norm(w);
      row.chain_lhs = linf_norm(diff);
      row.u_boundary_linf = boundary_linf(u.field, mesh);
      row.aux_boundary_linf = boundary_linf(w);
      row.chain_rhs = *row.u_boundary_linf + *row.aux_boundary_linf;
    }
    report.rows.push_back(row);
  }
  return report;
}

std::vector<InverseChainRow> verify_inverse_chain(const DomainSpec& spec,
                                                  const TestFunction& u,
                                                  const std::vector<int>& levels,
                                                  double rtol) {
  std::vector<InverseChainRow> rows;
  for (int n : levels) {
    TetMesh mesh = generate(spec, n);
    MeshMetrics met = metrics(mesh);
    SparseMatrix A = assemble_stiffness(mesh);
    RitzResult ritz = ritz_project(mesh, A, u.field, rtol);
    NodalField ih = interpolate(mesh, u.field);

    NodalField diff;
    diff.mesh = &mesh;
    diff.values.resize(mesh.num_vertices());
    for (int i = 0; i < mesh.num_vertices(); ++i)
      diff.values[i] = ritz.field.values[i] - ih.values[i];

    InverseChainRow row;
    row.n = n;
    row.h = met.h_max;
    double diff_linf = linf_norm(diff);
    row.a = w1inf_norm(mesh, diff);
    row.b = diff_linf / met.h_max;
    double scale = std::max(linf_norm(ritz.field), linf_norm(ih));
    row.degenerate = diff_linf <= 1e-10 * std::max(scale, 1.0);
    row.a_over_b = row.degenerate ? 0.0 : row.a / row.b;
    double interp_err = sampled_interp_error(mesh, ih, u.field);
    double log_h = std::abs(std::log(met.h_max));
    row.log_ratio =
        interp_err > 0.0 ? diff_linf / (log_h * interp_err) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

double sampled_interp_error(const TetMesh& mesh, const NodalField& f,
                            const ScalarField& u, int divisions) {
  double err = 0.0;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    auto v = mesh.tet_vertices(t);
    const auto& T = mesh.tets[t];
    for (int i = 0; i <= divisions; ++i) {
      for (int j = 0; j <= divisions - i; ++j) {
        for (int k = 0; k <= divisions - i - j; ++k) {
          double l1 = static_cast<double>(i) / divisions;
          double l2 = static_cast<double>(j) / divisions;
          double l3 = static_cast<double>(k) / divisions;
          double l0 = 1.0 - l1 - l2 - l3;
          Vec3 p = v[0] * l0 + v[1] * l1 + v[2] * l2 + v[3] * l3;
          double fh = l0 * f.values[T[0]] + l1 * f.values[T[1]] +
                      l2 * f.values[T[2]] + l3 * f.values[T[3]];
          err = std::max(err, std::abs(u(p) - fh));
        }
      }
    }
  }
  return err;
}

double field_w1inf(const ScalarField& u, const TetMesh& mesh) {
  double m = field_linf(u, mesh);
  if (!u.has_gradient()) return m;
  const TetRule& rule = tet_rule_deg4();
  for (int t = 0; t < mesh.num_tets(); ++t) {
    auto v = mesh.tet_vertices(t);
    for (const auto& bc : rule.points) {
      Vec3 p = v[0] * bc[0] + v[1] * bc[1] + v[2] * bc[2] + v[3] * bc[3];
      m = std::max(m, norm(u.gradient(p)));
    }
  }
  return m;
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string opt17(const std::optional<double>& v) {
  return v ? fmt17(*v) : std::string();
}

}  // namespace

void write_csv(const StabilityReport& report, std::ostream& os) {
  os << "domain,func,n,h,log_h,u_linf,Rhu_linf,ratio1,ratio2,u_w1inf,"
        "Rhu_w1inf,ratio3,aux_linf,chain_lhs,chain_rhs,cg_iters,residual\n";
  for (const auto& r : report.rows) {
    os << report.domain << ',' << report.func << ',' << r.n << ',' << fmt17(r.h)
       << ',' << fmt17(r.log_h) << ',' << fmt17(r.u_linf) << ','
       << fmt17(r.rhu_linf) << ',' << fmt17(r.ratio1) << ',' << fmt17(r.ratio2)
       << ',' << opt17(r.u_w1inf) << ',' << opt17(r.rhu_w1inf) << ','
       << opt17(r.ratio3) << ',' << opt17(r.aux_linf) << ','
       << opt17(r.chain_lhs) << ',' << opt17(r.chain_rhs) << ',' << r.cg_iters
       << ',' << fmt17(r.residual) << "\n";
  }
}

void write_json(const StabilityReport& report, std::ostream& os) {
  nlohmann::json out;
  out["domain"] = report.domain;
  out["func"] = report.func;
  out["rows"] = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json row;
    row["n"] = r.n;
    row["h"] = r.h;
    row["log_h"] = r.log_h;
    row["u_linf"] = r.u_linf;
    row["Rhu_linf"] = r.rhu_linf;
    row["ratio1"] = r.ratio1;
    row["ratio2"] = r.ratio2;
    auto put = [&row](const char* key, const std::optional<double>& v) {
      if (v) row[key] = *v;
    };
    put("u_w1inf", r.u_w1inf);
    put("Rhu_w1inf", r.rhu_w1inf);
    put("ratio3", r.ratio3);
    put("aux_linf", r.aux_linf);
    put("chain_lhs", r.chain_lhs);
    put("chain_rhs", r.chain_rhs);
    put("u_boundary_linf", r.u_boundary_linf);
    put("aux_boundary_linf", r.aux_boundary_linf);
    row["cg_iters"] = r.cg_iters;
    row["residual"] = r.residual;
    row["under_resolved"] = r.under_resolved;
    out["rows"].push_back(row);
  }
  os << out.dump(2) << "\n";
}

}  // namespace ritzlab
