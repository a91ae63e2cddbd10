#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <cstdint>
#include <vector>

#include "pose9d/errors.hpp"

namespace pose9d {

// Pinhole camera, no distortion. Pixel centers sit at integer coordinates:
// pixel (u, v) = (column, row).
struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  void validate() const {
    if (!(fx > 0.0) || !(fy > 0.0)) throw InvalidArgument("focal lengths must be positive");
    if (!(cx >= 0.0 && cx < width)) throw InvalidArgument("cx outside [0, width)");
    if (!(cy >= 0.0 && cy < height)) throw InvalidArgument("cy outside [0, height)");
  }
};

// The {r, t, s} triplet: rotation, translation (m), per-axis cuboid size (m).
struct Pose9DoF {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Eigen::Vector3d size = Eigen::Vector3d::Ones();

  static constexpr double kRotationTol = 1e-6;

  void validate() const {
    const Eigen::Matrix3d gram = rotation.transpose() * rotation;
    if (((gram - Eigen::Matrix3d::Identity()).array().abs() > kRotationTol).any())
      throw InvalidArgument("rotation is not orthonormal within 1e-6");
    if (std::abs(rotation.determinant() - 1.0) > kRotationTol)
      throw InvalidArgument("rotation determinant differs from 1 beyond 1e-6");
    if (!(size.array() > 0.0).all()) throw InvalidArgument("size components must be positive");
  }
};

// Depth stored as 16-bit millimeters, 0 = invalid. Converted to meters at use.
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> values;  // row-major

  std::uint16_t at(int row, int col) const { return values[static_cast<size_t>(row) * width + col]; }
  std::uint16_t& at(int row, int col) { return values[static_cast<size_t>(row) * width + col]; }

  static DepthImage zeros(int width, int height) {
    DepthImage d;
    d.width = width;
    d.height = height;
    d.values.assign(static_cast<size_t>(width) * height, 0);
    return d;
  }
};

struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> values;  // row-major, nonzero = object

  bool at(int row, int col) const { return values[static_cast<size_t>(row) * width + col] != 0; }
  void set(int row, int col, bool v) { values[static_cast<size_t>(row) * width + col] = v ? 1 : 0; }

  static BinaryMask filled(int width, int height, bool v) {
    BinaryMask m;
    m.width = width;
    m.height = height;
    m.values.assign(static_cast<size_t>(width) * height, v ? 1 : 0);
    return m;
  }
};

// N x 3 points, meters, camera frame.
struct PointCloud {
  Eigen::Matrix<double, Eigen::Dynamic, 3> points;

  Eigen::Index size() const { return points.rows(); }
};

}  // namespace pose9d
