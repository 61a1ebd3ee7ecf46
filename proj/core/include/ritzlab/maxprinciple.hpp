#pragma once

#include <vector>

#include "ritzlab/fem.hpp"
#include "ritzlab/mesh.hpp"
#include "ritzlab/sparse.hpp"

namespace ritzlab {

struct SignAuditReport {
  int rows_scanned = 0;
  int violation_count = 0;
  int worst_i = -1, worst_j = -1;
  double worst_value = 0.0;  // largest interior-row off-diagonal entry
  bool pass = true;
};

// Scans interior rows of the stiffness matrix for positive off-diagonal
// entries; the algebraic premise of the discrete weak maximum principle.
SignAuditReport offdiagonal_sign_audit(const SparseMatrix& A,
                                       const std::vector<int>& interior,
                                       double tol = 1e-13);

struct ElementSignAudit {
  bool pass = true;
  int worst_elem = -1;
  double worst_value = 0.0;  // largest pairwise grad(lambda_i).grad(lambda_j)
};

// Elementwise sufficient condition: pairwise basis-gradient products
// nonpositive in every tet of a non-obtuse mesh.
ElementSignAudit element_gradient_sign_audit(const TetMesh& mesh,
                                             double tol = 1e-13);

struct HarmonicResult {
  NodalField field;
  SolveStats stats;
};

// Discrete harmonic extension of boundary data g (full-length vector;
// only boundary entries are read).
HarmonicResult discrete_harmonic(const TetMesh& mesh,
                                 const SparseMatrix& stiffness,
                                 const std::vector<double>& g,
                                 double rtol = 1e-12);

struct MaxPrincipleCheck {
  bool pass = false;
  double margin = 0.0;  // boundary max minus global max
  double global_max = 0.0, global_min = 0.0;
  double boundary_max = 0.0, boundary_min = 0.0;
};

// Two-sided check that extrema are attained on the boundary.
MaxPrincipleCheck check_max_principle(const NodalField& f, double tol = 1e-10);

struct InequalityRecord {
  double lhs = 0.0;           // max norm of (Ritz - aux) over omega
  double u_boundary = 0.0;    // sampled sup of u on d(Omega)
  double aux_boundary = 0.0;  // nodal sup of aux field on d(Omega)
  double rhs = 0.0;           // u_boundary + aux_boundary
  bool pass = false;
};

// Direct numerical check of the boundary-controlled difference bound:
// ritz and aux_on_omega are the two discrete fields on the omega mesh.
InequalityRecord verify_eq_3_4(const TetMesh& mesh, const ScalarField& u,
                               const NodalField& ritz,
                               const NodalField& aux_on_omega,
                               double tol = 1e-8);

}  // namespace ritzlab
