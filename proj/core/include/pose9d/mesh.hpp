#pragma once

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

#include "pose9d/errors.hpp"

namespace pose9d {

struct TriangleMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;

  double face_area(size_t face_index) const;
  double total_area() const;

  // Drops faces with area <= 1e-12 m^2; called by the loaders.
  void filter_degenerate_faces();
  void validate() const;
};

// Poisson-disk (or otherwise) sampled surface points plus where they came from.
struct SampledVertexSet {
  Eigen::Matrix<double, Eigen::Dynamic, 3> points;
  std::string source;
};

// ASCII OBJ, vertices and triangular faces only ("v x y z", "f i j k" with
// optional /vt/vn suffixes, 1-based indices). Anything else is rejected.
TriangleMesh load_obj(const std::string& path);
void save_obj(const TriangleMesh& mesh, const std::string& path);

// Whitespace-separated "x y z" rows, one sampled point per line.
void write_vertex_table(const SampledVertexSet& set, const std::string& path);
SampledVertexSet read_vertex_table(const std::string& path);

// Axis-aligned box mesh centered at the origin (12 triangles), used by the
// synthetic-scene generator.
TriangleMesh make_box_mesh(const Eigen::Vector3d& size);

}  // namespace pose9d
