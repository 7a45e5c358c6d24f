#include "cograsp/cloud_io.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cograsp/error.hpp"
#include "cograsp/text_format.hpp"

namespace cograsp {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

void check_write(const std::ofstream& out, const std::filesystem::path& path) {
  if (!out) throw IoError("write failed: " + path.string());
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, size_t line,
                             const std::string& why) {
  throw ValidationError(path.string() + ":" + std::to_string(line) + ": " + why);
}

double parse_real(const std::string& tok, const std::filesystem::path& path, size_t line) {
  size_t used = 0;
  double v = 0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    parse_fail(path, line, "expected a number, got '" + tok + "'");
  }
  if (used != tok.size()) parse_fail(path, line, "trailing garbage in number '" + tok + "'");
  return v;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

PointCloud read_ply(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  size_t lineno = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next_line() || line != "ply") parse_fail(path, lineno, "missing 'ply' magic");

  size_t vertex_count = 0;
  bool in_vertex_element = false;
  bool has_mask = false;
  std::vector<std::string> vertex_props;
  bool header_done = false;
  while (next_line()) {
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "comment") continue;
    if (toks[0] == "format") {
      if (toks.size() < 2 || toks[1] != "ascii")
        parse_fail(path, lineno, "only ascii PLY is supported");
    } else if (toks[0] == "element") {
      if (toks.size() < 3) parse_fail(path, lineno, "malformed element");
      in_vertex_element = toks[1] == "vertex";
      if (in_vertex_element) vertex_count = std::stoull(toks[2]);
      else if (std::stoull(toks[2]) != 0)
        parse_fail(path, lineno, "unsupported non-empty element '" + toks[1] + "'");
    } else if (toks[0] == "property") {
      if (in_vertex_element) {
        if (toks.size() < 3) parse_fail(path, lineno, "malformed property");
        vertex_props.push_back(toks.back());
        if (toks.back() == "mask") has_mask = true;
      }
    } else if (toks[0] == "end_header") {
      header_done = true;
      break;
    } else {
      parse_fail(path, lineno, "unexpected header line '" + toks[0] + "'");
    }
  }
  if (!header_done) parse_fail(path, lineno, "missing end_header");

  // x, y, z must be the first three vertex properties; mask may follow.
  if (vertex_props.size() < 3 || vertex_props[0] != "x" || vertex_props[1] != "y" ||
      vertex_props[2] != "z")
    parse_fail(path, lineno, "vertex element must start with x, y, z properties");

  PointCloud cloud;
  cloud.points.reserve(vertex_count);
  if (has_mask) cloud.mask.reserve(vertex_count);
  for (size_t i = 0; i < vertex_count; ++i) {
    if (!next_line()) parse_fail(path, lineno, "unexpected end of file in vertex data");
    const auto toks = split_ws(line);
    if (toks.size() != vertex_props.size())
      parse_fail(path, lineno, "expected " + std::to_string(vertex_props.size()) +
                                   " values, got " + std::to_string(toks.size()));
    Vec3 p{parse_real(toks[0], path, lineno), parse_real(toks[1], path, lineno),
           parse_real(toks[2], path, lineno)};
    cloud.points.push_back(p);
    if (has_mask) {
      for (size_t t = 3; t < toks.size(); ++t)
        if (vertex_props[t] == "mask")
          cloud.mask.push_back(static_cast<int8_t>(parse_real(toks[t], path, lineno)));
    }
  }
  require_valid(cloud, "PLY cloud");
  return cloud;
}

void write_ply(const std::filesystem::path& path, const PointCloud& cloud) {
  require_valid(cloud, "PLY cloud");
  std::ofstream out = open_output(path);
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << cloud.size() << "\n";
  out << "property float x\nproperty float y\nproperty float z\n";
  if (cloud.has_mask()) out << "property int mask\n";
  out << "end_header\n";
  for (size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.points[i];
    out << format_real(p.x) << ' ' << format_real(p.y) << ' ' << format_real(p.z);
    if (cloud.has_mask()) out << ' ' << static_cast<int>(cloud.mask[i]);
    out << '\n';
  }
  check_write(out, path);
}

PointCloud read_csv_cloud(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  PointCloud cloud;
  std::string line;
  size_t lineno = 0;
  bool expect_mask = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> toks;
    std::istringstream iss(line);
    std::string tok;
    while (std::getline(iss, tok, ',')) toks.push_back(tok);
    if (toks.size() != 3 && toks.size() != 4)
      parse_fail(path, lineno, "expected 3 or 4 comma-separated values");
    const bool row_mask = toks.size() == 4;
    if (cloud.empty()) expect_mask = row_mask;
    else if (row_mask != expect_mask)
      parse_fail(path, lineno, "inconsistent column count");
    cloud.points.push_back(Vec3{parse_real(toks[0], path, lineno),
                                parse_real(toks[1], path, lineno),
                                parse_real(toks[2], path, lineno)});
    if (row_mask)
      cloud.mask.push_back(static_cast<int8_t>(parse_real(toks[3], path, lineno)));
  }
  require_valid(cloud, "CSV cloud");
  return cloud;
}

void write_csv_cloud(const std::filesystem::path& path, const PointCloud& cloud) {
  require_valid(cloud, "CSV cloud");
  std::ofstream out = open_output(path);
  for (size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.points[i];
    out << format_real(p.x) << ',' << format_real(p.y) << ',' << format_real(p.z);
    if (cloud.has_mask()) out << ',' << static_cast<int>(cloud.mask[i]);
    out << '\n';
  }
  check_write(out, path);
}

TriangleMesh read_obj(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  TriangleMesh mesh;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    if (toks[0] == "v") {
      if (toks.size() < 4) parse_fail(path, lineno, "vertex needs 3 coordinates");
      mesh.vertices.push_back(Vec3{parse_real(toks[1], path, lineno),
                                   parse_real(toks[2], path, lineno),
                                   parse_real(toks[3], path, lineno)});
    } else if (toks[0] == "f") {
      if (toks.size() < 4) parse_fail(path, lineno, "face needs at least 3 vertices");
      std::vector<int> idx;
      for (size_t t = 1; t < toks.size(); ++t) {
        std::string head = toks[t].substr(0, toks[t].find('/'));
        long v = 0;
        try {
          v = std::stol(head);
        } catch (const std::exception&) {
          parse_fail(path, lineno, "bad face index '" + toks[t] + "'");
        }
        if (v < 0) v = static_cast<long>(mesh.vertices.size()) + 1 + v;  // relative index
        if (v < 1 || v > static_cast<long>(mesh.vertices.size()))
          parse_fail(path, lineno, "face index out of range");
        idx.push_back(static_cast<int>(v - 1));
      }
      for (size_t t = 2; t < idx.size(); ++t)
        mesh.faces.push_back({idx[0], idx[t - 1], idx[t]});
    }
    // Other record types (vn, vt, o, g, s, usemtl, ...) are ignored.
  }
  require_valid(mesh, "OBJ mesh");
  return mesh;
}

void write_obj(const std::filesystem::path& path, const TriangleMesh& mesh) {
  require_valid(mesh, "OBJ mesh");
  std::ofstream out = open_output(path);
  for (const Vec3& v : mesh.vertices)
    out << "v " << format_real(v.x) << ' ' << format_real(v.y) << ' ' << format_real(v.z)
        << '\n';
  for (const auto& f : mesh.faces)
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  check_write(out, path);
}

}  // namespace cograsp
