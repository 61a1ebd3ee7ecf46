#include "ritzlab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace ritzlab {

namespace {

using Cell = std::array<int, 3>;

const std::array<std::array<int, 3>, 6> kPerms = {
    {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

int perm_sign(const std::array<int, 3>& p) {
  int inv = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (p[i] > p[j]) ++inv;
  return (inv % 2 == 0) ? 1 : -1;
}

}  // namespace

DomainSpec DomainSpec::preset(const std::string& name) {
  DomainSpec spec;
  if (name == "cube") {
    spec.cells = {{0, 0, 0}};
  } else if (name == "fichera") {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          if (!(i == 1 && j == 1 && k == 1)) spec.cells.push_back({i, j, k});
  } else if (name == "lprism") {
    spec.cells = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  } else {
    throw std::invalid_argument("unknown domain preset: " + name);
  }
  std::sort(spec.cells.begin(), spec.cells.end());
  return spec;
}

std::array<int, 3> DomainSpec::box_min() const {
  std::array<int, 3> m = {std::numeric_limits<int>::max(),
                          std::numeric_limits<int>::max(),
                          std::numeric_limits<int>::max()};
  for (const auto& c : cells)
    for (int d = 0; d < 3; ++d) m[d] = std::min(m[d], c[d]);
  return m;
}

std::array<int, 3> DomainSpec::box_max() const {
  std::array<int, 3> m = {std::numeric_limits<int>::min(),
                          std::numeric_limits<int>::min(),
                          std::numeric_limits<int>::min()};
  for (const auto& c : cells)
    for (int d = 0; d < 3; ++d) m[d] = std::max(m[d], c[d] + 1);
  return m;
}

bool DomainSpec::is_box() const {
  auto lo = box_min();
  auto hi = box_max();
  std::size_t vol = 1;
  for (int d = 0; d < 3; ++d) vol *= static_cast<std::size_t>(hi[d] - lo[d]);
  return vol == cells.size();
}

void DomainSpec::validate() const {
  if (cells.empty()) throw std::invalid_argument("domain has no cells");
  std::set<Cell> occ(cells.begin(), cells.end());
  if (occ.size() != cells.size())
    throw std::invalid_argument("domain has duplicate cells");

  // face connectivity
  std::set<Cell> seen;
  std::queue<Cell> queue;
  queue.push(*occ.begin());
  seen.insert(*occ.begin());
  while (!queue.empty()) {
    Cell c = queue.front();
    queue.pop();
    for (int d = 0; d < 3; ++d) {
      for (int s : {-1, 1}) {
        Cell nb = c;
        nb[d] += s;
        if (occ.count(nb) && !seen.count(nb)) {
          seen.insert(nb);
          queue.push(nb);
        }
      }
    }
  }
  if (seen.size() != occ.size())
    throw std::invalid_argument("domain cells are not face-connected");

  // Lipschitz check at lattice vertices: in every 2x2x2 block of cells
  // around a vertex, the occupied cells must be face-connected within the
  // block and so must the unoccupied ones. This rejects cells meeting only
  // along an edge or a corner and interior checkerboard patterns.
  std::set<Cell> corners;
  for (const auto& c : cells)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          corners.insert({c[0] + i, c[1] + j, c[2] + k});
  auto block_connected = [](const std::array<bool, 8>& mask) {
    int first = -1, count = 0;
    for (int i = 0; i < 8; ++i)
      if (mask[i]) {
        if (first < 0) first = i;
        ++count;
      }
    if (count == 0) return true;
    std::array<bool, 8> vis{};
    std::queue<int> q;
    q.push(first);
    vis[first] = true;
    int reached = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int bit : {1, 2, 4}) {
        int w = v ^ bit;
        if (mask[w] && !vis[w]) {
          vis[w] = true;
          ++reached;
          q.push(w);
        }
      }
    }
    return reached == count;
  };
  for (const auto& v : corners) {
    std::array<bool, 8> occ_mask{}, free_mask{};
    for (int b = 0; b < 8; ++b) {
      Cell c = {v[0] - 1 + (b & 1), v[1] - 1 + ((b >> 1) & 1),
                v[2] - 1 + ((b >> 2) & 1)};
      occ_mask[b] = occ.count(c) > 0;
      free_mask[b] = !occ_mask[b];
    }
    if (!block_connected(occ_mask) || !block_connected(free_mask))
      throw std::invalid_argument(
          "domain is not Lipschitz: invalid cell pattern at lattice vertex");
  }
}

std::vector<int> TetMesh::interior_nodes() const {
  std::vector<int> out;
  for (int i = 0; i < num_vertices(); ++i)
    if (!node_on_boundary[i]) out.push_back(i);
  return out;
}

std::vector<int> TetMesh::boundary_nodes() const {
  std::vector<int> out;
  for (int i = 0; i < num_vertices(); ++i)
    if (node_on_boundary[i]) out.push_back(i);
  return out;
}

namespace {

struct FaceKey {
  std::array<int, 3> v;
  bool operator==(const FaceKey& o) const { return v == o.v; }
};

struct FaceKeyHash {
  std::size_t operator()(const FaceKey& f) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : f.v) {
      h ^= static_cast<std::size_t>(x);
      h *= 1099511628211ull;
    }
    return h;
  }
};

FaceKey face_key(const std::array<int, 4>& tet, int local_face) {
  std::array<int, 3> f;
  for (int i = 0; i < 3; ++i) f[i] = tet[kTetFaces[local_face][i]];
  std::sort(f.begin(), f.end());
  return {f};
}

}  // namespace

void TetMesh::finalize() {
  for (int t = 0; t < num_tets(); ++t) {
    auto v = tet_vertices(t);
    if (signed_volume(v[0], v[1], v[2], v[3]) <= 0.0)
      throw std::invalid_argument("tet " + std::to_string(t) +
                                  " is not positively oriented");
  }
  std::unordered_map<FaceKey, int, FaceKeyHash> count;
  count.reserve(tets.size() * 4);
  for (const auto& tet : tets)
    for (int f = 0; f < 4; ++f) ++count[face_key(tet, f)];
  for (const auto& [key, c] : count) {
    (void)key;
    if (c > 2) throw std::invalid_argument("mesh is not conforming");
  }
  boundary_faces.clear();
  node_on_boundary.assign(vertices.size(), false);
  for (int t = 0; t < num_tets(); ++t) {
    for (int f = 0; f < 4; ++f) {
      if (count[face_key(tets[t], f)] == 1) {
        boundary_faces.emplace_back(t, f);
        for (int i = 0; i < 3; ++i)
          node_on_boundary[tets[t][kTetFaces[f][i]]] = true;
      }
    }
  }
}

namespace {

using LatticeKey = std::array<long long, 3>;

struct LatticeMesh {
  TetMesh mesh;
  std::map<LatticeKey, int> vertex_of;
};

LatticeMesh generate_lattice(const DomainSpec& spec, int n) {
  if (n < 1) throw std::invalid_argument("subdivision count must be >= 1");
  spec.validate();
  const double s = 1.0 / n;

  LatticeMesh out;
  auto& mesh = out.mesh;
  auto& vertex_of = out.vertex_of;
  mesh.grid_spacing = s;

  for (const auto& c : spec.cells) {
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b)
        for (int d = 0; d <= n; ++d)
          vertex_of[{static_cast<long long>(c[0]) * n + a,
                     static_cast<long long>(c[1]) * n + b,
                     static_cast<long long>(c[2]) * n + d}] = 0;
  }
  int idx = 0;
  for (auto& [key, id] : vertex_of) {
    id = idx++;
    mesh.vertices.push_back(
        {static_cast<double>(key[0]) * s, static_cast<double>(key[1]) * s,
         static_cast<double>(key[2]) * s});
  }

  std::vector<Cell> cells = spec.cells;
  std::sort(cells.begin(), cells.end());
  mesh.tets.reserve(cells.size() * static_cast<std::size_t>(n) * n * n * 6);
  for (const auto& c : cells) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int d = 0; d < n; ++d) {
          const LatticeKey base = {static_cast<long long>(c[0]) * n + a,
                                   static_cast<long long>(c[1]) * n + b,
                                   static_cast<long long>(c[2]) * n + d};
          for (const auto& perm : kPerms) {
            std::array<LatticeKey, 4> keys;
            keys[0] = base;
            for (int step = 0; step < 3; ++step) {
              keys[step + 1] = keys[step];
              keys[step + 1][perm[step]] += 1;
            }
            std::array<int, 4> tet;
            for (int i = 0; i < 4; ++i) tet[i] = vertex_of.at(keys[i]);
            if (perm_sign(perm) < 0) std::swap(tet[2], tet[3]);
            mesh.tets.push_back(tet);
          }
        }
      }
    }
  }
  mesh.finalize();
  return out;
}

}  // namespace

TetMesh generate(const DomainSpec& spec, int n) {
  return generate_lattice(spec, n).mesh;
}

std::array<double, 6> dihedral_angles(const std::array<Vec3, 4>& v) {
  // unit outward normals per face
  std::array<Vec3, 4> normals;
  for (int f = 0; f < 4; ++f) {
    const Vec3& a = v[kTetFaces[f][0]];
    const Vec3& b = v[kTetFaces[f][1]];
    const Vec3& c = v[kTetFaces[f][2]];
    Vec3 nrm = cross(b - a, c - a);
    double len = norm(nrm);
    if (len == 0.0) {
      normals[f] = {0, 0, 0};
      continue;
    }
    nrm = nrm / len;
    if (dot(nrm, v[f] - a) > 0.0) nrm = nrm * -1.0;
    normals[f] = nrm;
  }
  std::array<double, 6> angles;
  for (int e = 0; e < 6; ++e) {
    // faces meeting at edge e are those opposite its two non-endpoints
    std::array<bool, 4> on_edge{};
    on_edge[kTetEdges[e][0]] = on_edge[kTetEdges[e][1]] = true;
    int f1 = -1, f2 = -1;
    for (int i = 0; i < 4; ++i)
      if (!on_edge[i]) (f1 < 0 ? f1 : f2) = i;
    double c = -dot(normals[f1], normals[f2]);
    angles[e] = std::acos(std::clamp(c, -1.0, 1.0));
  }
  return angles;
}

DihedralReport audit_non_obtuse(const TetMesh& mesh, double tol) {
  DihedralReport report;
  report.max_angle_per_elem.resize(mesh.num_tets());
  const double s = mesh.grid_spacing > 0.0 ? mesh.grid_spacing : 1.0;
  const double vol_eps = 1e-14 * s * s * s;
  const double limit = std::asin(1.0) + tol;  // pi/2 + tol
  for (int t = 0; t < mesh.num_tets(); ++t) {
    auto v = mesh.tet_vertices(t);
    if (signed_volume(v[0], v[1], v[2], v[3]) <= vol_eps) {
      double nan = std::numeric_limits<double>::quiet_NaN();
      report.max_angle_per_elem[t] = nan;
      report.violations.push_back({t, -1, nan});
      continue;
    }
    auto angles = dihedral_angles(v);
    double worst = 0.0;
    for (int e = 0; e < 6; ++e) {
      worst = std::max(worst, angles[e]);
      if (angles[e] > limit) report.violations.push_back({t, e, angles[e]});
    }
    report.max_angle_per_elem[t] = worst;
    report.global_max = std::max(report.global_max, worst);
  }
  return report;
}

ExtendedMesh extend_to_box(const TetMesh& mesh, const DomainSpec& spec,
                           int margin) {
  if (margin < 1) throw std::invalid_argument("margin must be >= 1");
  const double s = mesh.grid_spacing;
  if (s <= 0.0)
    throw std::invalid_argument("mesh has no lattice spacing; regenerate it");
  const int n = static_cast<int>(std::llround(1.0 / s));
  if (std::abs(1.0 / static_cast<double>(n) - s) > 1e-12)
    throw std::invalid_argument("mesh spacing is not 1/n");

  auto lo = spec.box_min();
  auto hi = spec.box_max();
  DomainSpec outer_spec;
  for (int i = lo[0] - margin; i < hi[0] + margin; ++i)
    for (int j = lo[1] - margin; j < hi[1] + margin; ++j)
      for (int k = lo[2] - margin; k < hi[2] + margin; ++k)
        outer_spec.cells.push_back({i, j, k});
  std::sort(outer_spec.cells.begin(), outer_spec.cells.end());

  LatticeMesh outer = generate_lattice(outer_spec, n);

  ExtendedMesh ext;
  ext.outer = std::move(outer.mesh);
  ext.outer_spec = outer_spec;
  ext.margin = margin;

  ext.node_map.resize(mesh.num_vertices());
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    const Vec3& p = mesh.vertices[i];
    LatticeKey key = {std::llround(p.x / s), std::llround(p.y / s),
                      std::llround(p.z / s)};
    auto it = outer.vertex_of.find(key);
    if (it == outer.vertex_of.end())
      throw std::runtime_error("omega vertex missing from extension lattice");
    ext.node_map[i] = it->second;
  }

  std::map<std::array<int, 4>, int> outer_tet_of;
  for (int t = 0; t < ext.outer.num_tets(); ++t) {
    std::array<int, 4> key = ext.outer.tets[t];
    std::sort(key.begin(), key.end());
    outer_tet_of[key] = t;
  }
  ext.elem_map.resize(mesh.num_tets());
  for (int t = 0; t < mesh.num_tets(); ++t) {
    std::array<int, 4> key;
    for (int i = 0; i < 4; ++i) key[i] = ext.node_map[mesh.tets[t][i]];
    std::sort(key.begin(), key.end());
    auto it = outer_tet_of.find(key);
    if (it == outer_tet_of.end())
      throw std::runtime_error("omega tet missing from extension mesh");
    ext.elem_map[t] = it->second;
  }

  ext.outer_node_in_omega.assign(ext.outer.num_vertices(), false);
  for (int id : ext.node_map) ext.outer_node_in_omega[id] = true;
  for (int i = 0; i < mesh.num_vertices(); ++i)
    if (mesh.node_on_boundary[i])
      ext.omega_boundary_nodes.push_back(ext.node_map[i]);
  std::sort(ext.omega_boundary_nodes.begin(), ext.omega_boundary_nodes.end());
  return ext;
}

MeshMetrics metrics(const TetMesh& mesh) {
  MeshMetrics m;
  m.h_min = std::numeric_limits<double>::infinity();
  for (int t = 0; t < mesh.num_tets(); ++t) {
    auto v = mesh.tet_vertices(t);
    double diam = 0.0;
    for (const auto& e : kTetEdges)
      diam = std::max(diam, norm(v[e[0]] - v[e[1]]));
    m.h_max = std::max(m.h_max, diam);
    m.h_min = std::min(m.h_min, diam);
  }
  m.quasi_uniformity_ratio = m.h_max / m.h_min;
  return m;
}

}  // namespace ritzlab
