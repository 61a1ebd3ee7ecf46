#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ritzlab/geometry.hpp"

namespace ritzlab {

// Union of axis-aligned integer unit cells; the polyhedral domains the mesh
// generator understands.
struct DomainSpec {
  std::vector<std::array<int, 3>> cells;  // sorted, unique

  // Known presets: "cube" ([0,1]^3), "fichera" ([0,2]^3 minus [1,2]^3),
  // "lprism" (L-shaped cross-section times a unit interval).
  static DomainSpec preset(const std::string& name);

  // Throws std::invalid_argument if the cell set is empty, not
  // face-connected, or has a non-Lipschitz edge/vertex configuration.
  void validate() const;

  std::array<int, 3> box_min() const;
  std::array<int, 3> box_max() const;  // exclusive upper cell corner

  bool is_box() const;  // cells fill the whole bounding box
};

struct TetMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;  // positively oriented
  std::vector<std::pair<int, int>> boundary_faces;  // (tet, local face)
  std::vector<bool> node_on_boundary;
  double grid_spacing = 0.0;  // s of the generating lattice (0 if unknown)

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_tets() const { return static_cast<int>(tets.size()); }

  std::array<Vec3, 4> tet_vertices(int t) const {
    const auto& T = tets[t];
    return {vertices[T[0]], vertices[T[1]], vertices[T[2]], vertices[T[3]]};
  }

  std::vector<int> interior_nodes() const;
  std::vector<int> boundary_nodes() const;

  // Rebuilds boundary faces and node classification from the connectivity
  // and checks positive orientation. Call after filling vertices/tets
  // by hand or from a file.
  void finalize();
};

// Local faces: face f is opposite local vertex f.
inline constexpr std::array<std::array<int, 3>, 4> kTetFaces = {
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

// Local edges in fixed order; edge e joins local vertices
// kTetEdges[e][0..1], and the two faces meeting at it are the faces
// opposite the other two local vertices.
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

struct DihedralViolation {
  int elem;
  int edge;      // index into kTetEdges
  double angle;  // radians; NaN for a degenerate element
};

struct DihedralReport {
  std::vector<double> max_angle_per_elem;
  double global_max = 0.0;
  std::vector<DihedralViolation> violations;

  bool pass() const { return violations.empty(); }
};

struct ExtendedMesh {
  TetMesh outer;                  // mesh of the convex box
  DomainSpec outer_spec;
  std::vector<int> node_map;      // omega vertex id -> outer vertex id
  std::vector<int> elem_map;      // omega tet id -> outer tet id
  std::vector<int> omega_boundary_nodes;  // outer ids of the mapped d(Omega) nodes
  std::vector<bool> outer_node_in_omega;  // outer vertex lies in the mapped submesh
  int margin = 1;
};

struct MeshMetrics {
  double h_max = 0.0;
  double h_min = 0.0;
  double quasi_uniformity_ratio = 0.0;
};

// Kuhn subdivision: every unit cell is cut into n^3 subcubes of spacing
// s = 1/n and each subcube into the six path tetrahedra along its main
// diagonal (consistent diagonal direction, so the mesh conforms).
TetMesh generate(const DomainSpec& spec, int n);

// Six interior dihedral angles per element from outward face normals;
// violations are angles above pi/2 + tol.
DihedralReport audit_non_obtuse(const TetMesh& mesh, double tol = 1e-9);

// Kuhn mesh of the bounding box inflated by `margin` cells per side, at the
// spacing of `mesh`; the omega submesh embeds with bit-identical
// coordinates.
ExtendedMesh extend_to_box(const TetMesh& mesh, const DomainSpec& spec,
                           int margin = 1);

MeshMetrics metrics(const TetMesh& mesh);

// Six dihedral angles of a single tetrahedron, in kTetEdges order.
std::array<double, 6> dihedral_angles(const std::array<Vec3, 4>& v);

}  // namespace ritzlab
