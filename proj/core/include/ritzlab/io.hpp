#pragma once

#include <iosfwd>
#include <string>

#include "ritzlab/fem.hpp"
#include "ritzlab/mesh.hpp"

namespace ritzlab {

// Text mesh format: line 1 "V E", then V "x y z" lines and E "i0 i1 i2 i3"
// lines (0-based indices).
void write_mesh_text(std::ostream& os, const TetMesh& mesh);
TetMesh read_mesh_text(std::istream& is);

// Legacy VTK (ASCII, UNSTRUCTURED_GRID, cell type 10), optionally with one
// point-data array.
void write_vtk(std::ostream& os, const TetMesh& mesh,
               const NodalField* point_data = nullptr,
               const std::string& data_name = "field");

// Field dump: "V" then one value per line, index-aligned with the mesh file.
void write_field_text(std::ostream& os, const NodalField& f);

}  // namespace ritzlab
