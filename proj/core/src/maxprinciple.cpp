#include "ritzlab/maxprinciple.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ritzlab {

SignAuditReport offdiagonal_sign_audit(const SparseMatrix& A,
                                       const std::vector<int>& interior,
                                       double tol) {
  SignAuditReport report;
  report.worst_value = -std::numeric_limits<double>::infinity();
  for (int i : interior) {
    ++report.rows_scanned;
    for (int p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p) {
      int j = A.col[p];
      if (j == i) continue;
      double v = A.val[p];
      if (v > report.worst_value) {
        report.worst_value = v;
        report.worst_i = i;
        report.worst_j = j;
      }
      if (v > tol) ++report.violation_count;
    }
  }
  if (report.worst_value == -std::numeric_limits<double>::infinity())
    report.worst_value = 0.0;
  report.pass = report.violation_count == 0;
  return report;
}

ElementSignAudit element_gradient_sign_audit(const TetMesh& mesh, double tol) {
  ElementSignAudit audit;
  audit.worst_value = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < mesh.num_tets(); ++t) {
    auto g = barycentric_gradients(mesh.tet_vertices(t));
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        double v = dot(g[i], g[j]);
        if (v > audit.worst_value) {
          audit.worst_value = v;
          audit.worst_elem = t;
        }
        if (v > tol) audit.pass = false;
      }
    }
  }
  if (audit.worst_value == -std::numeric_limits<double>::infinity())
    audit.worst_value = 0.0;
  return audit;
}

HarmonicResult discrete_harmonic(const TetMesh& mesh,
                                 const SparseMatrix& stiffness,
                                 const std::vector<double>& g, double rtol) {
  for (int i = 0; i < mesh.num_vertices(); ++i)
    if (mesh.node_on_boundary[i] && !std::isfinite(g[i]))
      throw std::invalid_argument("discrete_harmonic: non-finite boundary data");

  std::vector<int> interior = mesh.interior_nodes();
  std::vector<double> rhs(interior.size(), 0.0);
  for (std::size_t k = 0; k < interior.size(); ++k) {
    int i = interior[k];
    for (int p = stiffness.row_ptr[i]; p < stiffness.row_ptr[i + 1]; ++p) {
      int j = stiffness.col[p];
      if (mesh.node_on_boundary[j]) rhs[k] -= stiffness.val[p] * g[j];
    }
  }
  SparseMatrix A_int = restrict_to(stiffness, interior);
  auto [x, stats] = cg_solve(A_int, rhs, rtol);
  if (!stats.converged)
    throw std::runtime_error("discrete_harmonic: CG did not converge");

  HarmonicResult result;
  result.stats = stats;
  result.field.mesh = &mesh;
  result.field.values.assign(mesh.num_vertices(), 0.0);
  for (int i = 0; i < mesh.num_vertices(); ++i)
    if (mesh.node_on_boundary[i]) result.field.values[i] = g[i];
  for (std::size_t k = 0; k < interior.size(); ++k)
    result.field.values[interior[k]] = x[k];
  return result;
}

MaxPrincipleCheck check_max_principle(const NodalField& f, double tol) {
  const TetMesh& mesh = *f.mesh;
  MaxPrincipleCheck check;
  check.global_max = -std::numeric_limits<double>::infinity();
  check.global_min = std::numeric_limits<double>::infinity();
  check.boundary_max = -std::numeric_limits<double>::infinity();
  check.boundary_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    double v = f.values[i];
    check.global_max = std::max(check.global_max, v);
    check.global_min = std::min(check.global_min, v);
    if (mesh.node_on_boundary[i]) {
      check.boundary_max = std::max(check.boundary_max, v);
      check.boundary_min = std::min(check.boundary_min, v);
    }
  }
  check.margin = check.boundary_max - check.global_max;
  check.pass = check.global_max <= check.boundary_max + tol &&
               check.global_min >= check.boundary_min - tol;
  return check;
}

InequalityRecord verify_eq_3_4(const TetMesh& mesh, const ScalarField& u,
                               const NodalField& ritz,
                               const NodalField& aux_on_omega, double tol) {
  InequalityRecord record;
  NodalField diff;
  diff.mesh = &mesh;
  diff.values.resize(mesh.num_vertices());
  for (int i = 0; i < mesh.num_vertices(); ++i)
    diff.values[i] = ritz.values[i] - aux_on_omega.values[i];
  record.lhs = linf_norm(diff);
  record.u_boundary = boundary_linf(u, mesh);
  record.aux_boundary = boundary_linf(aux_on_omega);
  record.rhs = record.u_boundary + record.aux_boundary;
  record.pass = record.lhs <= record.rhs + tol;
  return record;
}

}  // namespace ritzlab
