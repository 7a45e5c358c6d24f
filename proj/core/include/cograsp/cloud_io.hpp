#pragma once

#include <filesystem>

#include "cograsp/point_cloud.hpp"
#include "cograsp/triangle_mesh.hpp"

namespace cograsp {

// ASCII PLY with float x/y/z vertex properties and an optional int "mask"
// property. Reals are written with 17 significant digits.
PointCloud read_ply(const std::filesystem::path& path);
void write_ply(const std::filesystem::path& path, const PointCloud& cloud);

// CSV lines "x,y,z" or "x,y,z,mask"; no header.
PointCloud read_csv_cloud(const std::filesystem::path& path);
void write_csv_cloud(const std::filesystem::path& path, const PointCloud& cloud);

// ASCII OBJ, v/f records only; polygon faces are fan-triangulated and
// "v/vt/vn" index forms are accepted (only the vertex index is used).
TriangleMesh read_obj(const std::filesystem::path& path);
void write_obj(const std::filesystem::path& path, const TriangleMesh& mesh);

}  // namespace cograsp
