#include "ritzlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace ritzlab {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_mesh_text(std::ostream& os, const TetMesh& mesh) {
  os << mesh.num_vertices() << " " << mesh.num_tets() << "\n";
  for (const Vec3& p : mesh.vertices)
    os << fmt17(p.x) << " " << fmt17(p.y) << " " << fmt17(p.z) << "\n";
  for (const auto& t : mesh.tets)
    os << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
}

TetMesh read_mesh_text(std::istream& is) {
  TetMesh mesh;
  int nv = 0, nt = 0;
  if (!(is >> nv >> nt) || nv <= 0 || nt <= 0)
    throw std::invalid_argument("mesh file: bad header");
  mesh.vertices.resize(nv);
  for (int i = 0; i < nv; ++i) {
    if (!(is >> mesh.vertices[i].x >> mesh.vertices[i].y >> mesh.vertices[i].z))
      throw std::invalid_argument("mesh file: bad vertex line");
  }
  mesh.tets.resize(nt);
  for (int t = 0; t < nt; ++t) {
    for (int i = 0; i < 4; ++i) {
      if (!(is >> mesh.tets[t][i]))
        throw std::invalid_argument("mesh file: bad tet line");
      if (mesh.tets[t][i] < 0 || mesh.tets[t][i] >= nv)
        throw std::invalid_argument("mesh file: vertex index out of range");
    }
  }
  mesh.finalize();
  // estimate the lattice spacing from the longest edge of a Kuhn tet
  mesh.grid_spacing = metrics(mesh).h_max / std::sqrt(3.0);
  return mesh;
}

void write_vtk(std::ostream& os, const TetMesh& mesh,
               const NodalField* point_data, const std::string& data_name) {
  os << "# vtk DataFile Version 3.0\n";
  os << "ritzlab tetrahedral mesh\n";
  os << "ASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Vec3& p : mesh.vertices)
    os << fmt17(p.x) << " " << fmt17(p.y) << " " << fmt17(p.z) << "\n";
  os << "CELLS " << mesh.num_tets() << " " << mesh.num_tets() * 5 << "\n";
  for (const auto& t : mesh.tets)
    os << "4 " << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
  os << "CELL_TYPES " << mesh.num_tets() << "\n";
  for (int t = 0; t < mesh.num_tets(); ++t) os << "10\n";
  if (point_data) {
    os << "POINT_DATA " << mesh.num_vertices() << "\n";
    os << "SCALARS " << data_name << " double 1\n";
    os << "LOOKUP_TABLE default\n";
    for (double v : point_data->values) os << fmt17(v) << "\n";
  }
}

void write_field_text(std::ostream& os, const NodalField& f) {
  os << f.values.size() << "\n";
  for (double v : f.values) os << fmt17(v) << "\n";
}

}  // namespace ritzlab
