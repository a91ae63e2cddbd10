#include "pose9d/geometry.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "pose9d/rng.hpp"

namespace pose9d {

Eigen::Matrix<double, 8, 3> cuboid_corners(const Eigen::Vector3d& size) {
  if (!(size.array() > 0.0).all()) throw InvalidArgument("cuboid size components must be positive");
  Eigen::Matrix<double, 8, 3> corners;
  const Eigen::Vector3d half = 0.5 * size;
  for (int i = 0; i < 8; ++i) {
    corners(i, 0) = (i & 1) ? half.x() : -half.x();
    corners(i, 1) = (i & 2) ? half.y() : -half.y();
    corners(i, 2) = (i & 4) ? half.z() : -half.z();
  }
  return corners;
}

Eigen::Vector2d project_point(const CameraIntrinsics& K, const Eigen::Matrix3d& rotation,
                              const Eigen::Vector3d& translation, const Eigen::Vector3d& point) {
  const Eigen::Vector3d p = rotation * point + translation;
  if (p.z() <= 1e-9) throw BehindCameraError("point has non-positive camera depth");
  return {K.fx * p.x() / p.z() + K.cx, K.fy * p.y() / p.z() + K.cy};
}

PointCloud backproject(const DepthImage& depth, const CameraIntrinsics& K, const BinaryMask& mask) {
  if (depth.width != mask.width || depth.height != mask.height)
    throw InvalidArgument("depth and mask dimensions differ");
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(1024);
  for (int v = 0; v < depth.height; ++v) {
    for (int u = 0; u < depth.width; ++u) {
      if (!mask.at(v, u)) continue;
      const std::uint16_t d = depth.at(v, u);
      if (d == 0) continue;
      const double z = static_cast<double>(d) / 1000.0;
      pts.emplace_back((u - K.cx) * z / K.fx, (v - K.cy) * z / K.fy, z);
    }
  }
  if (pts.empty()) throw EmptyCloudError("no masked pixel carries valid depth");
  PointCloud cloud;
  cloud.points.resize(static_cast<Eigen::Index>(pts.size()), 3);
  for (size_t i = 0; i < pts.size(); ++i) cloud.points.row(static_cast<Eigen::Index>(i)) = pts[i];
  return cloud;
}

PointCloud sample_points(const PointCloud& cloud, int n, std::uint64_t seed) {
  const Eigen::Index total = cloud.size();
  if (total < 1) throw EmptyCloudError("cannot sample from an empty cloud");
  if (n < 1) throw InvalidArgument("sample count must be >= 1");

  Rng rng(seed);
  PointCloud out;
  out.points.resize(n, 3);
  if (total >= n) {
    // Partial Fisher-Yates: first n entries of a random permutation.
    std::vector<Eigen::Index> idx(static_cast<size_t>(total));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    for (int i = 0; i < n; ++i) {
      const auto j = i + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(total - i)));
      std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
      out.points.row(i) = cloud.points.row(idx[static_cast<size_t>(i)]);
    }
  } else {
    for (int i = 0; i < n; ++i)
      out.points.row(i) = cloud.points.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(total))));
  }
  return out;
}

Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(2) <= 1e-12 * std::max(sv(0), 1e-300)) throw InvalidArgument("matrix is singular");
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Vector3d flip(1.0, 1.0, -1.0);
    r = svd.matrixU() * flip.asDiagonal() * svd.matrixV().transpose();
  }
  return r;
}

Eigen::Matrix3d axis_angle_rotation(const Eigen::Vector3d& axis, double angle_rad) {
  const double n = axis.norm();
  if (n < 1e-12) throw InvalidArgument("rotation axis has zero norm");
  const Eigen::Vector3d a = axis / n;
  Eigen::Matrix3d k;
  k << 0, -a.z(), a.y(), a.z(), 0, -a.x(), -a.y(), a.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(angle_rad) * k +
         (1.0 - std::cos(angle_rad)) * (k * k);
}

double rotation_angle_deg(const Eigen::Matrix3d& ra, const Eigen::Matrix3d& rb) {
  const Eigen::Matrix3d rel = ra.transpose() * rb;
  // atan2 of the rotation's sine (the vee of the skew part) and cosine
  // resolves tiny angles far below what acos((trace-1)/2) can represent.
  const Eigen::Vector3d vee(rel(2, 1) - rel(1, 2), rel(0, 2) - rel(2, 0), rel(1, 0) - rel(0, 1));
  const double sine = 0.5 * vee.norm();
  const double cosine = std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::atan2(sine, cosine) * 180.0 / std::numbers::pi;
}

}  // namespace pose9d
