#pragma once

#include <Eigen/Core>

#include "pose9d/errors.hpp"
#include "pose9d/mesh.hpp"

namespace pose9d {

// Object-frame rotational symmetry of a category.
struct SymmetryClass {
  enum class Kind { kNone, kContinuousAxis, kDiscreteAxis };

  Kind kind = Kind::kNone;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitY();
  int order = 2;  // fold count, discrete only

  static SymmetryClass none() { return {}; }
  static SymmetryClass continuous(const Eigen::Vector3d& axis);
  static SymmetryClass discrete(const Eigen::Vector3d& axis, int order);

  void validate() const {
    if (kind == Kind::kNone) return;
    if (std::abs(axis.norm() - 1.0) > 1e-9) throw InvalidArgument("symmetry axis must be unit");
    if (kind == Kind::kDiscreteAxis && order < 2)
      throw InvalidArgument("discrete symmetry order must be >= 2");
  }
};

struct LossConfig {
  double lambda_mpl = 2000.0;  // weight balancing the two loss terms
  int symmetry_steps = 64;     // discretization of a continuous symmetry axis

  void validate() const {
    if (!(lambda_mpl >= 0.0)) throw InvalidArgument("lambda_mpl must be >= 0");
    if (symmetry_steps < 1) throw InvalidArgument("symmetry_steps must be >= 1");
  }
};

// Mean squared distance between rotated ground-truth vertices and predicted
// vertices: (1/V) * sum_i |R * gt_i - pred_i|^2. Units m^2.
double mpl_loss(const SampledVertexSet& gt, const Eigen::Matrix<double, Eigen::Dynamic, 3>& pred,
                const Eigen::Matrix3d& gt_rotation);

// Analytic derivative w.r.t. the predicted vertices:
// dL/dpred_i = (2/V) * (pred_i - R * gt_i).
Eigen::Matrix<double, Eigen::Dynamic, 3> mpl_gradient(
    const SampledVertexSet& gt, const Eigen::Matrix<double, Eigen::Dynamic, 3>& pred,
    const Eigen::Matrix3d& gt_rotation);

// Minimum of mpl_loss over the discretized symmetry group: R is replaced by
// R*S with S ranging over symmetry_steps rotations about the axis (continuous)
// or the order-fold cyclic group (discrete). kind none is mpl_loss itself.
double symmetric_mpl_loss(const SampledVertexSet& gt,
                          const Eigen::Matrix<double, Eigen::Dynamic, 3>& pred,
                          const Eigen::Matrix3d& gt_rotation, const SymmetryClass& symmetry,
                          const LossConfig& cfg);

// base + lambda_mpl * mpl. Both inputs must be finite and non-negative.
double total_loss(double base_loss, double mpl, const LossConfig& cfg);

}  // namespace pose9d
