#include "ritzlab/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ritzlab {

double tet_volume(const std::array<Vec3, 4>& v) {
  return signed_volume(v[0], v[1], v[2], v[3]);
}

namespace {

TetRule make_tet_rule_deg4() {
  TetRule rule;
  auto orbit4 = [&rule](double a, double w) {
    double b = 1.0 - 3.0 * a;
    for (int odd = 0; odd < 4; ++odd) {
      std::array<double, 4> p = {a, a, a, a};
      p[odd] = b;
      rule.points.push_back(p);
      rule.weights.push_back(w);
    }
  };
  auto orbit6 = [&rule](double a, double w) {
    double b = 0.5 - a;
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        std::array<double, 4> p = {b, b, b, b};
        p[i] = a;
        p[j] = a;
        rule.points.push_back(p);
        rule.weights.push_back(w);
      }
    }
  };
  orbit4(0.3108859192633005, 0.1126879257180162);
  orbit4(0.0927352503108912, 0.0734930431163619);
  orbit6(0.0455037041256497, 0.0425460207770812);
  return rule;
}

TriRule make_tri_rule_deg4() {
  TriRule rule;
  auto orbit3 = [&rule](double a, double w) {
    double b = 1.0 - 2.0 * a;
    for (int odd = 0; odd < 3; ++odd) {
      std::array<double, 3> p = {a, a, a};
      p[odd] = b;
      rule.points.push_back(p);
      rule.weights.push_back(w);
    }
  };
  orbit3(0.445948490915965, 0.223381589678011);
  orbit3(0.091576213509771, 0.109951743655322);
  return rule;
}

TriRule make_tri_rule_deg6() {
  TriRule rule;
  auto orbit3 = [&rule](double a, double w) {
    double b = 1.0 - 2.0 * a;
    for (int odd = 0; odd < 3; ++odd) {
      std::array<double, 3> p = {a, a, a};
      p[odd] = b;
      rule.points.push_back(p);
      rule.weights.push_back(w);
    }
  };
  auto orbit6 = [&rule](double a, double b, double w) {
    double c = 1.0 - a - b;
    const std::array<std::array<double, 3>, 6> perms = {{{a, b, c},
                                                         {a, c, b},
                                                         {b, a, c},
                                                         {b, c, a},
                                                         {c, a, b},
                                                         {c, b, a}}};
    for (const auto& p : perms) {
      rule.points.push_back(p);
      rule.weights.push_back(w);
    }
  };
  orbit3(0.249286745170910, 0.116786275726379);
  orbit3(0.063089014491502, 0.050844906370207);
  orbit6(0.310352451033785, 0.636502499121399, 0.082851075618374);
  return rule;
}

}  // namespace

const TetRule& tet_rule_deg4() {
  static const TetRule rule = make_tet_rule_deg4();
  return rule;
}
const TriRule& tri_rule_deg4() {
  static const TriRule rule = make_tri_rule_deg4();
  return rule;
}
const TriRule& tri_rule_deg6() {
  static const TriRule rule = make_tri_rule_deg6();
  return rule;
}

std::array<Vec3, 4> barycentric_gradients(const std::array<Vec3, 4>& v) {
  Vec3 e1 = v[1] - v[0], e2 = v[2] - v[0], e3 = v[3] - v[0];
  double det = dot(e1, cross(e2, e3));
  if (det <= 0.0)
    throw std::invalid_argument("barycentric_gradients: degenerate tet");
  std::array<Vec3, 4> g;
  g[1] = cross(e2, e3) / det;
  g[2] = cross(e3, e1) / det;
  g[3] = cross(e1, e2) / det;
  g[0] = (g[1] + g[2] + g[3]) * -1.0;
  return g;
}

SparseMatrix assemble_stiffness(const TetMesh& mesh) {
  const double s = mesh.grid_spacing > 0.0 ? mesh.grid_spacing : 1.0;
  const double vol_eps = 1e-14 * s * s * s;
  std::vector<std::vector<std::pair<int, double>>> rows(mesh.num_vertices());
  for (int t = 0; t < mesh.num_tets(); ++t) {
    auto v = mesh.tet_vertices(t);
    double vol = tet_volume(v);
    if (vol <= vol_eps)
      throw std::runtime_error("assemble_stiffness: degenerate element " +
                               std::to_string(t));
    auto g = barycentric_gradients(v);
    const auto& T = mesh.tets[t];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        rows[T[i]].emplace_back(T[j], vol * dot(g[i], g[j]));
  }
  return compress_rows(mesh.num_vertices(), std::move(rows));
}

std::vector<double> gradient_load(const TetMesh& mesh, const ScalarField& u,
                                  const TetRule& rule) {
  if (!u.has_gradient())
    throw std::invalid_argument(
        "gradient_load: the field must declare an analytic gradient");
  std::vector<double> load(mesh.num_vertices(), 0.0);
  for (int t = 0; t < mesh.num_tets(); ++t) {
    auto v = mesh.tet_vertices(t);
    double vol = tet_volume(v);
    auto g = barycentric_gradients(v);
    const auto& T = mesh.tets[t];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& bc = rule.points[q];
      Vec3 p = v[0] * bc[0] + v[1] * bc[1] + v[2] * bc[2] + v[3] * bc[3];
      Vec3 grad_u = u.gradient(p);
      double w = rule.weights[q] * vol;
      for (int i = 0; i < 4; ++i) load[T[i]] += w * dot(grad_u, g[i]);
    }
  }
  return load;
}

RitzResult ritz_project(const TetMesh& mesh, const SparseMatrix& stiffness,
                        const ScalarField& u, double rtol) {
  RitzResult result;
  result.field.mesh = &mesh;
  result.field.values.assign(mesh.num_vertices(), 0.0);

  std::vector<double> load = gradient_load(mesh, u);
  std::vector<double> boundary_vals(mesh.num_vertices(), 0.0);
  for (int i = 0; i < mesh.num_vertices(); ++i)
    if (mesh.node_on_boundary[i]) boundary_vals[i] = u(mesh.vertices[i]);

  std::vector<int> interior = mesh.interior_nodes();
  std::vector<double> rhs(interior.size());
  for (std::size_t k = 0; k < interior.size(); ++k) {
    int i = interior[k];
    double b = load[i];
    for (int p = stiffness.row_ptr[i]; p < stiffness.row_ptr[i + 1]; ++p) {
      int j = stiffness.col[p];
      if (mesh.node_on_boundary[j]) b -= stiffness.val[p] * boundary_vals[j];
    }
    rhs[k] = b;
  }
  SparseMatrix A_int = restrict_to(stiffness, interior);
  auto [x, stats] = cg_solve(A_int, rhs, rtol);
  if (!stats.converged)
    throw std::runtime_error("ritz_project: CG did not converge");
  result.stats = stats;
  for (int i = 0; i < mesh.num_vertices(); ++i)
    if (mesh.node_on_boundary[i]) result.field.values[i] = boundary_vals[i];
  for (std::size_t k = 0; k < interior.size(); ++k)
    result.field.values[interior[k]] = x[k];
  return result;
}

RitzResult ritz_project(const TetMesh& mesh, const ScalarField& u,
                        double rtol) {
  return ritz_project(mesh, assemble_stiffness(mesh), u, rtol);
}

NodalField interpolate(const TetMesh& mesh, const ScalarField& u) {
  NodalField f;
  f.mesh = &mesh;
  f.values.resize(mesh.num_vertices());
  for (int i = 0; i < mesh.num_vertices(); ++i) f.values[i] = u(mesh.vertices[i]);
  return f;
}

namespace {

// Area and outward unit normal of local face f of tet vertices v.
std::pair<double, Vec3> face_area_normal(const std::array<Vec3, 4>& v, int f) {
  const Vec3& a = v[kTetFaces[f][0]];
  const Vec3& b = v[kTetFaces[f][1]];
  const Vec3& c = v[kTetFaces[f][2]];
  Vec3 nrm = cross(b - a, c - a);
  double twice_area = norm(nrm);
  nrm = nrm / twice_area;
  if (dot(nrm, v[f] - a) > 0.0) nrm = nrm * -1.0;
  return {0.5 * twice_area, nrm};
}

template <typename Evaluator>
std::vector<double> aux_rhs_impl(const ExtendedMesh& ext,
                                 const TriRule& face_rule, Evaluator&& eval) {
  const TetMesh& outer = ext.outer;
  std::vector<double> rhs(outer.num_vertices(), 0.0);
  for (int t = 0; t < outer.num_tets(); ++t) {
    auto v = outer.tet_vertices(t);
    auto g = barycentric_gradients(v);
    const auto& T = outer.tets[t];
    for (int f = 0; f < 4; ++f) {
      auto [area, nrm] = face_area_normal(v, f);
      std::array<double, 4> flux;
      for (int i = 0; i < 4; ++i) flux[i] = dot(g[i], nrm);
      for (std::size_t q = 0; q < face_rule.points.size(); ++q) {
        const auto& bc = face_rule.points[q];
        Vec3 p = v[kTetFaces[f][0]] * bc[0] + v[kTetFaces[f][1]] * bc[1] +
                 v[kTetFaces[f][2]] * bc[2];
        double val = eval(t, f, bc, p);
        double w = face_rule.weights[q] * area * val;
        for (int i = 0; i < 4; ++i) rhs[T[i]] += w * flux[i];
      }
    }
  }
  return rhs;
}

}  // namespace

std::vector<double> aux_rhs_functional(const ExtendedMesh& ext,
                                       const ScalarField& u_ext,
                                       const TriRule& face_rule) {
  return aux_rhs_impl(ext, face_rule,
                      [&u_ext](int, int, const std::array<double, 3>&,
                               const Vec3& p) { return u_ext(p); });
}

std::vector<double> aux_rhs_functional(const ExtendedMesh& ext,
                                       const NodalField& u_ext,
                                       const TriRule& face_rule) {
  if (u_ext.mesh != &ext.outer ||
      static_cast<int>(u_ext.values.size()) != ext.outer.num_vertices())
    throw std::invalid_argument("aux_rhs_functional: field not on outer mesh");
  const TetMesh& outer = ext.outer;
  return aux_rhs_impl(
      ext, face_rule,
      [&](int t, int f, const std::array<double, 3>& bc, const Vec3&) {
        const auto& T = outer.tets[t];
        double val = 0.0;
        for (int i = 0; i < 3; ++i)
          val += bc[i] * u_ext.values[T[kTetFaces[f][i]]];
        return val;
      });
}

AuxResult solve_aux(const ExtendedMesh& ext, const SparseMatrix& outer_stiffness,
                    const std::vector<double>& rhs, double rtol) {
  const TetMesh& outer = ext.outer;
  std::vector<int> interior = outer.interior_nodes();
  std::vector<double> rhs_int(interior.size());
  for (std::size_t k = 0; k < interior.size(); ++k)
    rhs_int[k] = rhs[interior[k]];
  SparseMatrix A_int = restrict_to(outer_stiffness, interior);
  auto [x, stats] = cg_solve(A_int, rhs_int, rtol);
  if (!stats.converged)
    throw std::runtime_error("solve_aux: CG did not converge");
  AuxResult result;
  result.stats = stats;
  result.field.mesh = &outer;
  result.field.values.assign(outer.num_vertices(), 0.0);
  for (std::size_t k = 0; k < interior.size(); ++k)
    result.field.values[interior[k]] = x[k];
  return result;
}

AuxResult solve_aux(const ExtendedMesh& ext, const ScalarField& u_ext,
                    double rtol, const TriRule& face_rule) {
  SparseMatrix A = assemble_stiffness(ext.outer);
  std::vector<double> rhs = aux_rhs_functional(ext, u_ext, face_rule);
  return solve_aux(ext, A, rhs, rtol);
}

double linf_norm(const NodalField& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

Vec3 element_gradient(const TetMesh& mesh, const NodalField& f, int t) {
  auto v = mesh.tet_vertices(t);
  auto g = barycentric_gradients(v);
  const auto& T = mesh.tets[t];
  Vec3 grad{};
  for (int i = 0; i < 4; ++i) grad += g[i] * f.values[T[i]];
  return grad;
}

double w1inf_seminorm(const TetMesh& mesh, const NodalField& f) {
  double m = 0.0;
  for (int t = 0; t < mesh.num_tets(); ++t)
    m = std::max(m, norm(element_gradient(mesh, f, t)));
  return m;
}

double w1inf_norm(const TetMesh& mesh, const NodalField& f) {
  return std::max(linf_norm(f), w1inf_seminorm(mesh, f));
}

double field_linf(const ScalarField& u, const TetMesh& mesh) {
  double m = 0.0;
  for (const Vec3& p : mesh.vertices) m = std::max(m, std::abs(u(p)));
  const TetRule& rule = tet_rule_deg4();
  for (int t = 0; t < mesh.num_tets(); ++t) {
    auto v = mesh.tet_vertices(t);
    for (const auto& bc : rule.points) {
      Vec3 p = v[0] * bc[0] + v[1] * bc[1] + v[2] * bc[2] + v[3] * bc[3];
      m = std::max(m, std::abs(u(p)));
    }
  }
  m = std::max(m, boundary_linf(u, mesh));
  return m;
}

double boundary_linf(const ScalarField& u, const TetMesh& mesh, int grid) {
  double m = 0.0;
  for (const auto& [t, f] : mesh.boundary_faces) {
    auto v = mesh.tet_vertices(t);
    const Vec3& a = v[kTetFaces[f][0]];
    const Vec3& b = v[kTetFaces[f][1]];
    const Vec3& c = v[kTetFaces[f][2]];
    for (int i = 0; i <= grid; ++i) {
      for (int j = 0; j <= grid - i; ++j) {
        double l1 = static_cast<double>(i) / grid;
        double l2 = static_cast<double>(j) / grid;
        Vec3 p = a * (1.0 - l1 - l2) + b * l1 + c * l2;
        m = std::max(m, std::abs(u(p)));
      }
    }
  }
  return m;
}

double boundary_linf(const NodalField& f) {
  const TetMesh& mesh = *f.mesh;
  double m = 0.0;
  for (int i = 0; i < mesh.num_vertices(); ++i)
    if (mesh.node_on_boundary[i]) m = std::max(m, std::abs(f.values[i]));
  return m;
}

NodalField restrict_to_omega(const TetMesh& omega, const ExtendedMesh& ext,
                             const NodalField& outer_field) {
  NodalField f;
  f.mesh = &omega;
  f.values.resize(omega.num_vertices());
  for (int i = 0; i < omega.num_vertices(); ++i)
    f.values[i] = outer_field.values[ext.node_map[i]];
  return f;
}

NodalField zero_extension(const ExtendedMesh& ext, const NodalField& omega_field) {
  NodalField f;
  f.mesh = &ext.outer;
  f.values.assign(ext.outer.num_vertices(), 0.0);
  for (std::size_t i = 0; i < ext.node_map.size(); ++i)
    f.values[ext.node_map[i]] = omega_field.values[i];
  return f;
}

}  // namespace ritzlab
