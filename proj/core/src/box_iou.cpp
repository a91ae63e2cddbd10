#include "pose9d/box_iou.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "pose9d/geometry.hpp"

namespace pose9d {

Eigen::Matrix<double, 8, 3> OrientedBox3D::corners() const {
  const Eigen::Matrix<double, 8, 3> local = cuboid_corners(pose.size);
  Eigen::Matrix<double, 8, 3> world;
  for (int i = 0; i < 8; ++i)
    world.row(i) = (pose.rotation * local.row(i).transpose() + pose.translation).transpose();
  return world;
}

namespace {

constexpr double kPlaneEps = 1e-12;  // plane-side epsilon for degenerate contact

using Polygon = std::vector<Eigen::Vector3d>;

struct Plane {
  Eigen::Vector3d normal;  // outward
  double offset;           // points kept satisfy normal . x <= offset

  double signed_distance(const Eigen::Vector3d& p) const { return normal.dot(p) - offset; }
};

// The six quad faces of a box, wound so face normals point outward. Corner
// indices follow the cuboid_corners bit rule.
std::vector<Polygon> box_faces(const OrientedBox3D& box) {
  const Eigen::Matrix<double, 8, 3> c = box.corners();
  static const int quads[6][4] = {
      {0, 4, 6, 2},  // -x
      {1, 3, 7, 5},  // +x
      {0, 1, 5, 4},  // -y
      {2, 6, 7, 3},  // +y
      {0, 2, 3, 1},  // -z
      {4, 5, 7, 6},  // +z
  };
  std::vector<Polygon> faces(6);
  for (int f = 0; f < 6; ++f) {
    faces[static_cast<size_t>(f)].reserve(4);
    for (int k = 0; k < 4; ++k)
      faces[static_cast<size_t>(f)].push_back(c.row(quads[f][k]).transpose());
  }
  return faces;
}

std::array<Plane, 6> box_planes(const OrientedBox3D& box) {
  std::array<Plane, 6> planes;
  const Eigen::Vector3d half = 0.5 * box.pose.size;
  for (int axis = 0; axis < 3; ++axis) {
    const Eigen::Vector3d n = box.pose.rotation.col(axis);
    planes[static_cast<size_t>(2 * axis)] = {n, n.dot(box.pose.translation) + half(axis)};
    planes[static_cast<size_t>(2 * axis + 1)] = {-n, -n.dot(box.pose.translation) + half(axis)};
  }
  return planes;
}

// Sutherland-Hodgman clip of a convex polygon against one half-space. The at
// most two crossing points are appended to cut_points for the cap polygon.
Polygon clip_polygon(const Polygon& poly, const Plane& plane, std::vector<Eigen::Vector3d>* cut_points) {
  Polygon out;
  out.reserve(poly.size() + 2);
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d& cur = poly[i];
    const Eigen::Vector3d& nxt = poly[(i + 1) % n];
    const double dc = plane.signed_distance(cur);
    const double dn = plane.signed_distance(nxt);
    const bool cur_in = dc <= kPlaneEps;
    const bool nxt_in = dn <= kPlaneEps;
    if (cur_in) out.push_back(cur);
    if (cur_in != nxt_in) {
      // crossing: interpolate on the exact plane
      const double t = std::clamp(dc / (dc - dn), 0.0, 1.0);
      const Eigen::Vector3d x = cur + t * (nxt - cur);
      out.push_back(x);
      cut_points->push_back(x);
    }
  }
  if (out.size() < 3) out.clear();
  return out;
}

// Builds the cap polygon on the clip plane from the collected crossing
// points: deduplicate, then order by angle around the centroid in the plane's
// tangent basis, wound so the polygon normal equals the plane normal.
Polygon build_cap(const std::vector<Eigen::Vector3d>& cut_points, const Plane& plane) {
  std::vector<Eigen::Vector3d> unique;
  for (const auto& p : cut_points) {
    bool dup = false;
    for (const auto& q : unique)
      if ((p - q).squaredNorm() < 1e-18) {
        dup = true;
        break;
      }
    if (!dup) unique.push_back(p);
  }
  if (unique.size() < 3) return {};

  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : unique) centroid += p;
  centroid /= static_cast<double>(unique.size());

  // tangent basis with e1 x e2 = normal
  Eigen::Vector3d e1 = plane.normal.unitOrthogonal();
  Eigen::Vector3d e2 = plane.normal.cross(e1);
  std::vector<std::pair<double, size_t>> order(unique.size());
  for (size_t i = 0; i < unique.size(); ++i) {
    const Eigen::Vector3d d = unique[i] - centroid;
    order[i] = {std::atan2(e2.dot(d), e1.dot(d)), i};
  }
  std::sort(order.begin(), order.end());

  Polygon cap(unique.size());
  for (size_t i = 0; i < unique.size(); ++i) cap[i] = unique[order[i].second];
  return cap;
}

// Divergence-theorem volume of a closed polyhedron with outward-wound faces.
double polyhedron_volume(const std::vector<Polygon>& faces) {
  double six_v = 0.0;
  for (const Polygon& face : faces) {
    for (size_t i = 1; i + 1 < face.size(); ++i)
      six_v += face[0].dot(face[i].cross(face[i + 1]));
  }
  return std::max(six_v / 6.0, 0.0);
}

double intersection_volume(const OrientedBox3D& a, const OrientedBox3D& b) {
  std::vector<Polygon> faces = box_faces(a);
  for (const Plane& plane : box_planes(b)) {
    std::vector<Polygon> clipped;
    clipped.reserve(faces.size() + 1);
    std::vector<Eigen::Vector3d> cut_points;
    for (const Polygon& face : faces) {
      Polygon kept = clip_polygon(face, plane, &cut_points);
      if (!kept.empty()) clipped.push_back(std::move(kept));
    }
    // The cap closes the polytope where the plane sliced it. The clip keeps
    // the half-space normal . x <= offset, so the cap's outward normal is the
    // plane normal itself.
    Polygon cap = build_cap(cut_points, plane);
    if (!cap.empty()) clipped.push_back(std::move(cap));
    faces = std::move(clipped);
    if (faces.size() < 4) return 0.0;  // no enclosed volume left
  }
  return polyhedron_volume(faces);
}

}  // namespace

double box_iou_3d(const OrientedBox3D& a, const OrientedBox3D& b) {
  a.pose.validate();
  b.pose.validate();
  const double inter = intersection_volume(a, b);
  const double uni = a.volume() + b.volume() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double symmetric_box_iou(const OrientedBox3D& a, const OrientedBox3D& b,
                         const SymmetryClass& symmetry, int steps) {
  symmetry.validate();
  if (symmetry.kind == SymmetryClass::Kind::kNone) return box_iou_3d(a, b);
  if (steps < 1) throw InvalidArgument("steps must be >= 1");

  const int count = symmetry.kind == SymmetryClass::Kind::kDiscreteAxis ? symmetry.order : steps;
  double best = 0.0;
  for (int k = 0; k < count; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / count;
    OrientedBox3D rotated = b;
    rotated.pose.rotation = b.pose.rotation * axis_angle_rotation(symmetry.axis, angle);
    best = std::max(best, box_iou_3d(a, rotated));
  }
  return best;
}

}  // namespace pose9d
