#include "pose9d/mpl.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "pose9d/geometry.hpp"

namespace pose9d {

SymmetryClass SymmetryClass::continuous(const Eigen::Vector3d& axis) {
  SymmetryClass s;
  s.kind = Kind::kContinuousAxis;
  s.axis = axis;
  s.validate();
  return s;
}

SymmetryClass SymmetryClass::discrete(const Eigen::Vector3d& axis, int order) {
  SymmetryClass s;
  s.kind = Kind::kDiscreteAxis;
  s.axis = axis;
  s.order = order;
  s.validate();
  return s;
}

namespace {

void check_vertex_sets(const SampledVertexSet& gt,
                       const Eigen::Matrix<double, Eigen::Dynamic, 3>& pred) {
  if (gt.points.rows() != pred.rows())
    throw InvalidArgument("ground-truth and predicted vertex counts differ");
  if (gt.points.rows() < 1) throw InvalidArgument("vertex sets must be non-empty");
}

}  // namespace

double mpl_loss(const SampledVertexSet& gt, const Eigen::Matrix<double, Eigen::Dynamic, 3>& pred,
                const Eigen::Matrix3d& gt_rotation) {
  check_vertex_sets(gt, pred);
  const Eigen::Index v = gt.points.rows();
  // sequential index-order reduction keeps results bit-reproducible
  double sum = 0.0;
  for (Eigen::Index i = 0; i < v; ++i)
    sum += (gt_rotation * gt.points.row(i).transpose() - pred.row(i).transpose()).squaredNorm();
  return sum / static_cast<double>(v);
}

Eigen::Matrix<double, Eigen::Dynamic, 3> mpl_gradient(
    const SampledVertexSet& gt, const Eigen::Matrix<double, Eigen::Dynamic, 3>& pred,
    const Eigen::Matrix3d& gt_rotation) {
  check_vertex_sets(gt, pred);
  const Eigen::Index v = gt.points.rows();
  Eigen::Matrix<double, Eigen::Dynamic, 3> grad(v, 3);
  const double scale = 2.0 / static_cast<double>(v);
  for (Eigen::Index i = 0; i < v; ++i)
    grad.row(i) =
        scale * (pred.row(i).transpose() - gt_rotation * gt.points.row(i).transpose()).transpose();
  return grad;
}

double symmetric_mpl_loss(const SampledVertexSet& gt,
                          const Eigen::Matrix<double, Eigen::Dynamic, 3>& pred,
                          const Eigen::Matrix3d& gt_rotation, const SymmetryClass& symmetry,
                          const LossConfig& cfg) {
  symmetry.validate();
  cfg.validate();
  if (symmetry.kind == SymmetryClass::Kind::kNone) return mpl_loss(gt, pred, gt_rotation);

  const int steps =
      symmetry.kind == SymmetryClass::Kind::kContinuousAxis ? cfg.symmetry_steps : symmetry.order;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < steps; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / steps;
    const Eigen::Matrix3d s = axis_angle_rotation(symmetry.axis, angle);
    best = std::min(best, mpl_loss(gt, pred, gt_rotation * s));
  }
  return best;
}

double total_loss(double base_loss, double mpl, const LossConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(base_loss) || !std::isfinite(mpl))
    throw InvalidArgument("loss terms must be finite");
  if (base_loss < 0.0 || mpl < 0.0) throw InvalidArgument("loss terms must be non-negative");
  return base_loss + cfg.lambda_mpl * mpl;
}

}  // namespace pose9d
