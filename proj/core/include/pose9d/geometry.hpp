#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "pose9d/types.hpp"

namespace pose9d {

// Number of points fed to the depth branch of the pipeline.
inline constexpr int kDefaultSampleCount = 1028;

// The 8 corners of an origin-centered axis-aligned cuboid with the given
// per-axis extent. Corner i has sign pattern given by the binary expansion of
// i: bit 0 -> x, bit 1 -> y, bit 2 -> z, bit value 0 -> negative half-extent.
// This ordering is a contract shared with the keypoint solver.
Eigen::Matrix<double, 8, 3> cuboid_corners(const Eigen::Vector3d& size);

// Perspective projection of object point X under pose (R, t):
// (u, v) = (fx*x/z + cx, fy*y/z + cy) with (x,y,z) = R*X + t.
// Throws BehindCameraError when z <= 1e-9 m.
Eigen::Vector2d project_point(const CameraIntrinsics& K, const Eigen::Matrix3d& rotation,
                              const Eigen::Vector3d& translation, const Eigen::Vector3d& point);

// Back-projects every masked pixel with valid depth into the camera frame.
// Depth is converted mm -> m; pixel (u, v) = (column, row) at integer centers.
// Points are emitted in row-major pixel scan order.
PointCloud backproject(const DepthImage& depth, const CameraIntrinsics& K, const BinaryMask& mask);

// Exactly n points from the cloud, deterministic in the seed. With >= n input
// points this is a uniform subset without replacement; with fewer it samples
// uniformly with replacement so callers always get fixed-size output.
PointCloud sample_points(const PointCloud& cloud, int n, std::uint64_t seed);

// Nearest rotation to M in the Frobenius norm (polar decomposition with
// determinant sign correction). Throws InvalidArgument for singular M.
Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d& m);

// Rodrigues rotation about a unit axis.
Eigen::Matrix3d axis_angle_rotation(const Eigen::Vector3d& axis, double angle_rad);

// Geodesic distance between rotations, in degrees: the angle of Ra^T * Rb.
double rotation_angle_deg(const Eigen::Matrix3d& ra, const Eigen::Matrix3d& rb);

}  // namespace pose9d
