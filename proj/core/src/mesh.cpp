#include "pose9d/mesh.hpp"

#include <Eigen/Geometry>

#include <fstream>
#include <sstream>

#include "pose9d/geometry.hpp"

namespace pose9d {

double TriangleMesh::face_area(size_t face_index) const {
  const auto& f = faces[face_index];
  const Eigen::Vector3d& a = vertices[static_cast<size_t>(f[0])];
  const Eigen::Vector3d& b = vertices[static_cast<size_t>(f[1])];
  const Eigen::Vector3d& c = vertices[static_cast<size_t>(f[2])];
  return 0.5 * (b - a).cross(c - a).norm();
}

double TriangleMesh::total_area() const {
  double area = 0.0;
  for (size_t i = 0; i < faces.size(); ++i) area += face_area(i);
  return area;
}

void TriangleMesh::filter_degenerate_faces() {
  std::vector<std::array<int, 3>> kept;
  kept.reserve(faces.size());
  for (size_t i = 0; i < faces.size(); ++i)
    if (face_area(i) > 1e-12) kept.push_back(faces[i]);
  faces = std::move(kept);
}

void TriangleMesh::validate() const {
  const int v = static_cast<int>(vertices.size());
  for (const auto& f : faces)
    for (int idx : f)
      if (idx < 0 || idx >= v) throw InvalidMeshError("face index out of range");
}

namespace {

// "f 3", "f 3/1", "f 3/1/2", "f 3//2" all reference vertex 3.
int parse_face_index(const std::string& token, size_t vertex_count, long line_no) {
  const size_t slash = token.find('/');
  const std::string head = slash == std::string::npos ? token : token.substr(0, slash);
  int idx = 0;
  try {
    idx = std::stoi(head);
  } catch (const std::exception&) {
    throw ParseError("bad face index '" + token + "'", line_no);
  }
  if (idx < 1 || static_cast<size_t>(idx) > vertex_count)
    throw InvalidMeshError("face index " + std::to_string(idx) + " out of range at line " +
                           std::to_string(line_no));
  return idx - 1;
}

}  // namespace

TriangleMesh load_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open OBJ file: " + path);

  TriangleMesh mesh;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ss >> x >> y >> z)) throw ParseError("malformed vertex line", line_no);
      mesh.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<std::string> tokens;
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (tokens.size() != 3)
        throw InvalidMeshError("only triangular faces are supported (line " +
                               std::to_string(line_no) + ")");
      std::array<int, 3> face;
      for (int i = 0; i < 3; ++i)
        face[static_cast<size_t>(i)] = parse_face_index(tokens[static_cast<size_t>(i)],
                                                        mesh.vertices.size(), line_no);
      mesh.faces.push_back(face);
    }
    // comments, normals, texture coords, groups: ignored
  }
  mesh.filter_degenerate_faces();
  if (mesh.faces.empty()) throw InvalidMeshError("mesh has no non-degenerate face: " + path);
  return mesh;
}

void save_obj(const TriangleMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open OBJ file for writing: " + path);
  out.precision(17);
  for (const auto& v : mesh.vertices) out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
  for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
  if (!out) throw IoError("failed writing OBJ file: " + path);
}

void write_vertex_table(const SampledVertexSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open vertex table for writing: " + path);
  out.precision(17);
  for (Eigen::Index i = 0; i < set.points.rows(); ++i)
    out << set.points(i, 0) << " " << set.points(i, 1) << " " << set.points(i, 2) << "\n";
  if (!out) throw IoError("failed writing vertex table: " + path);
}

SampledVertexSet read_vertex_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vertex table: " + path);
  std::vector<Eigen::Vector3d> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    double x, y, z;
    if (!(ss >> x >> y >> z)) throw ParseError("malformed vertex row", line_no);
    rows.emplace_back(x, y, z);
  }
  SampledVertexSet set;
  set.source = path;
  set.points.resize(static_cast<Eigen::Index>(rows.size()), 3);
  for (size_t i = 0; i < rows.size(); ++i) set.points.row(static_cast<Eigen::Index>(i)) = rows[i];
  return set;
}

TriangleMesh make_box_mesh(const Eigen::Vector3d& size) {
  const Eigen::Matrix<double, 8, 3> corners = cuboid_corners(size);
  TriangleMesh mesh;
  for (int i = 0; i < 8; ++i) mesh.vertices.emplace_back(corners.row(i).transpose());
  // Two triangles per face; corner indices follow the cuboid_corners bit rule.
  const int quads[6][4] = {
      {0, 2, 6, 4},  // x = -sx/2
      {1, 5, 7, 3},  // x = +sx/2
      {0, 4, 5, 1},  // y = -sy/2
      {2, 3, 7, 6},  // y = +sy/2
      {0, 1, 3, 2},  // z = -sz/2
      {4, 6, 7, 5},  // z = +sz/2
  };
  for (const auto& q : quads) {
    mesh.faces.push_back({q[0], q[1], q[2]});
    mesh.faces.push_back({q[0], q[2], q[3]});
  }
  return mesh;
}

}  // namespace pose9d
