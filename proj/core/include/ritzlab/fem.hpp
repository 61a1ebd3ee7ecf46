#pragma once

#include <array>
#include <functional>
#include <vector>

#include "ritzlab/mesh.hpp"
#include "ritzlab/sparse.hpp"

namespace ritzlab {

// A continuous function given by a formula; the gradient is optional but
// required by operations that form (grad u, grad phi) by quadrature.
struct ScalarField {
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> gradient;  // may be empty

  bool has_gradient() const { return static_cast<bool>(gradient); }
  double operator()(const Vec3& p) const { return value(p); }
};

// One value per mesh vertex; a member of V_h.
struct NodalField {
  const TetMesh* mesh = nullptr;
  std::vector<double> values;
};

// Barycentric quadrature rules; weights are reference weights summing to 1
// and are scaled by the element measure on use.
struct TetRule {
  std::vector<std::array<double, 4>> points;
  std::vector<double> weights;
};
struct TriRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

const TetRule& tet_rule_deg4();
const TriRule& tri_rule_deg4();
const TriRule& tri_rule_deg6();

// Constant gradients of the four P1 barycentric basis functions.
std::array<Vec3, 4> barycentric_gradients(const std::array<Vec3, 4>& v);

// A[i][j] = sum_T |T| grad(lambda_i) . grad(lambda_j); rows sum to zero.
SparseMatrix assemble_stiffness(const TetMesh& mesh);

// Load vector l_i = (grad u, grad phi_i) over all nodes, by degree-4
// volume quadrature. Requires an analytic gradient.
std::vector<double> gradient_load(const TetMesh& mesh, const ScalarField& u,
                                  const TetRule& rule = tet_rule_deg4());

struct RitzResult {
  NodalField field;
  SolveStats stats;
};

// Ritz projection: boundary nodes carry u exactly, interior values solve
// the eliminated SPD system.
RitzResult ritz_project(const TetMesh& mesh, const SparseMatrix& stiffness,
                        const ScalarField& u, double rtol = 1e-12);
RitzResult ritz_project(const TetMesh& mesh, const ScalarField& u,
                        double rtol = 1e-12);

// Nodal interpolation I_h u.
NodalField interpolate(const TetMesh& mesh, const ScalarField& u);

// Elementwise face-flux functional of the extended datum:
// rhs_i = sum_T <u_ext, grad(phi_i) . n>_dT over all outer-mesh nodes.
// The volume term of the defining equation vanishes for P1 and is omitted.
std::vector<double> aux_rhs_functional(const ExtendedMesh& ext,
                                       const ScalarField& u_ext,
                                       const TriRule& face_rule = tri_rule_deg4());
// Same functional with a discrete extended datum (P1 traces integrate
// exactly, so this equals the stiffness matvec).
std::vector<double> aux_rhs_functional(const ExtendedMesh& ext,
                                       const NodalField& u_ext,
                                       const TriRule& face_rule = tri_rule_deg4());

struct AuxResult {
  NodalField field;  // on the outer mesh, zero at its boundary nodes
  SolveStats stats;
};

AuxResult solve_aux(const ExtendedMesh& ext, const SparseMatrix& outer_stiffness,
                    const std::vector<double>& rhs, double rtol = 1e-12);
AuxResult solve_aux(const ExtendedMesh& ext, const ScalarField& u_ext,
                    double rtol = 1e-12,
                    const TriRule& face_rule = tri_rule_deg4());

// Norms. Piecewise-linear max norms are exact (nodal max / per-element
// constant gradients); continuous-function norms are dense-sampling lower
// bounds.
double linf_norm(const NodalField& f);
double w1inf_seminorm(const TetMesh& mesh, const NodalField& f);
double w1inf_norm(const TetMesh& mesh, const NodalField& f);
double field_linf(const ScalarField& u, const TetMesh& mesh);
double boundary_linf(const ScalarField& u, const TetMesh& mesh, int grid = 10);
double boundary_linf(const NodalField& f);

Vec3 element_gradient(const TetMesh& mesh, const NodalField& f, int t);

// Pull an outer-mesh field back to the omega mesh through the node map.
NodalField restrict_to_omega(const TetMesh& omega, const ExtendedMesh& ext,
                             const NodalField& outer_field);

// Nodal extension by zero into the outer space: mapped nodes keep their
// values, every other outer node is zero.
NodalField zero_extension(const ExtendedMesh& ext, const NodalField& omega_field);

double tet_volume(const std::array<Vec3, 4>& v);

}  // namespace ritzlab
