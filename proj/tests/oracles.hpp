// Independent reference implementations used to check the library. These
// deliberately avoid the code paths they verify: the Monte-Carlo estimator
// tests point membership instead of clipping, the PnP oracle refines with
// numeric-Jacobian Levenberg-Marquardt over quaternions instead of analytic
// Gauss-Newton over so(3), and the bilinear reference gathers the four
// neighbors explicitly.

#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "pose9d/box_iou.hpp"
#include "pose9d/fusion.hpp"
#include "pose9d/mesh.hpp"
#include "pose9d/pnp.hpp"

namespace pose9d::testing {

struct McVolumeEstimate {
  double volume = 0.0;       // estimated intersection volume, m^3
  double std_error = 0.0;    // one standard error of the estimate, m^3
  double bbox_volume = 0.0;  // sampling-domain volume, m^3
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
};

// Monte-Carlo intersection volume: uniform samples in the axis-aligned
// bounding box of the pair, counting membership in both boxes.
McVolumeEstimate mc_intersection_volume(const OrientedBox3D& a, const OrientedBox3D& b,
                                        std::uint64_t samples, std::uint64_t seed);

struct NlsOracleResult {
  Eigen::Matrix3d rotation;
  Eigen::Vector3d translation;
  double cost = 0.0;  // sum of squared pixel residuals
};

// Multi-start nonlinear least squares on the 8-corner reprojection problem:
// random rotation starts, translation initialized by the linear subproblem,
// Levenberg-Marquardt over (quaternion, translation) with finite-difference
// Jacobians. Returns the best local optimum found.
NlsOracleResult multistart_nls_pnp(const CuboidKeypoints2D& keypoints, const RelativeDims& dims,
                                   const CameraIntrinsics& K, int starts, std::uint64_t seed);

// Clamp-to-edge bilinear interpolation, written as an explicit 4-neighbor
// weighted sum.
double bilinear_reference(const FeatureMap& fmap, double u, double v, int channel);

double point_triangle_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                               const Eigen::Vector3d& b, const Eigen::Vector3d& c);

double point_mesh_distance(const Eigen::Vector3d& p, const TriangleMesh& mesh);

// Unsigned distance from a point to the surface of an oriented box.
double point_box_surface_distance(const Eigen::Vector3d& p, const OrientedBox3D& box);

}  // namespace pose9d::testing
