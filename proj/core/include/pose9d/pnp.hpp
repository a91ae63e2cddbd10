#pragma once

#include <Eigen/Core>
#include <vector>

#include "pose9d/types.hpp"

namespace pose9d {

// 2D projections of the 8 cuboid corners, ordered by the cuboid_corners rule.
struct CuboidKeypoints2D {
  Eigen::Matrix<double, 8, 2> points;

  void validate() const {
    if (!points.allFinite()) throw InvalidArgument("keypoints must be finite");
  }
};

// Per-axis cuboid dimensions normalized so the largest component is 1. The
// monocular head predicts these instead of absolute depth, so pose recovery
// happens in the unit-cuboid scale.
struct RelativeDims {
  Eigen::Vector3d dims = Eigen::Vector3d::Ones();

  static RelativeDims normalized(const Eigen::Vector3d& raw);

  void validate() const {
    if (!(dims.array() > 0.0).all() || !(dims.array() <= 1.0).all())
      throw InvalidArgument("relative dims must lie in (0, 1]");
    if (std::abs(dims.maxCoeff() - 1.0) > 1e-9)
      throw InvalidArgument("max relative dim must equal 1");
  }
};

struct PnPSettings {
  double tol = 1e-10;  // relative cost decrease below which iteration stops
  int max_iters = 50;
  int max_halvings = 30;
};

struct PnPSolution {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  // Translation in the unit-cuboid scale (meters per unit of object scale).
  // Absolute metric translation needs depth: scaling model and translation
  // together leaves the image fixed.
  Eigen::Vector3d translation_dir = Eigen::Vector3d::Zero();
  double rmse = 0.0;  // reprojection RMSE over the 8 corners, px
  int iterations = 0;
  std::vector<double> cost_history;  // sum-of-squares cost after each accepted step
};

// Recovers rotation and unit-scale translation from the 8 projected cuboid
// corners: DLT on the normalized correspondences, projection of the linear
// rotation onto SO(3), then Gauss-Newton with step halving on the
// reprojection cost.
PnPSolution pnp_recover(const CuboidKeypoints2D& keypoints, const RelativeDims& dims,
                        const CameraIntrinsics& K, const PnPSettings& settings = {});

// Root-mean-square of the 8 per-corner pixel residuals under the solution.
double reprojection_rmse(const PnPSolution& solution, const CuboidKeypoints2D& keypoints,
                         const RelativeDims& dims, const CameraIntrinsics& K);

}  // namespace pose9d
