#include "pose9d/metrics.hpp"

#include <algorithm>
#include <Eigen/Geometry>
#include <cmath>
#include <numbers>

#include "pose9d/geometry.hpp"

namespace pose9d {

PoseError pose_error(const Pose9DoF& pred, const Pose9DoF& gt, const SymmetryClass& symmetry) {
  pred.validate();
  gt.validate();
  symmetry.validate();

  PoseError err;
  err.translation_cm = 100.0 * (pred.translation - gt.translation).norm();
  switch (symmetry.kind) {
    case SymmetryClass::Kind::kNone:
      err.rotation_deg = rotation_angle_deg(pred.rotation, gt.rotation);
      break;
    case SymmetryClass::Kind::kContinuousAxis: {
      const Eigen::Vector3d a = pred.rotation * symmetry.axis;
      const Eigen::Vector3d b = gt.rotation * symmetry.axis;
      // atan2 form stays accurate for nearly parallel axes
      err.rotation_deg = std::atan2(a.cross(b).norm(), a.dot(b)) * 180.0 / std::numbers::pi;
      break;
    }
    case SymmetryClass::Kind::kDiscreteAxis: {
      double best = 180.0;
      for (int k = 0; k < symmetry.order; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / symmetry.order;
        best = std::min(best, rotation_angle_deg(
                                  pred.rotation,
                                  gt.rotation * axis_angle_rotation(symmetry.axis, angle)));
      }
      err.rotation_deg = best;
      break;
    }
  }
  return err;
}

std::vector<double> threshold_accuracy(const std::vector<PoseError>& errors,
                                       const std::vector<std::pair<double, double>>& thresholds) {
  if (errors.empty()) throw InvalidArgument("cannot compute accuracy over an empty error list");
  std::vector<double> acc;
  acc.reserve(thresholds.size());
  for (const auto& [deg, cm] : thresholds) {
    std::size_t count = 0;
    for (const PoseError& e : errors)
      if (e.rotation_deg <= deg && e.translation_cm <= cm) ++count;
    acc.push_back(100.0 * static_cast<double>(count) / static_cast<double>(errors.size()));
  }
  return acc;
}

std::vector<double> iou_accuracy(const std::vector<double>& ious,
                                 const std::vector<double>& thresholds) {
  if (ious.empty()) throw InvalidArgument("cannot compute accuracy over an empty IoU list");
  for (double v : ious)
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("IoU values must lie in [0, 1]");
  std::vector<double> acc;
  acc.reserve(thresholds.size());
  for (double thr : thresholds) {
    std::size_t count = 0;
    for (double v : ious)
      if (v >= thr) ++count;
    acc.push_back(100.0 * static_cast<double>(count) / static_cast<double>(ious.size()));
  }
  return acc;
}

void MetricReport::check_monotonic() const {
  auto check_row = [this](const Row& row, const std::string& label) {
    for (size_t i = 0; i + 1 < iou_thresholds.size(); ++i) {
      if (iou_thresholds[i] <= iou_thresholds[i + 1] && row.iou_acc[i] < row.iou_acc[i + 1] - 1e-9)
        throw ValidationError("IoU accuracy not monotone for " + label);
    }
    for (size_t i = 0; i < pose_thresholds.size(); ++i) {
      for (size_t j = 0; j < pose_thresholds.size(); ++j) {
        // only componentwise-dominating threshold pairs are comparable
        if (pose_thresholds[i].first <= pose_thresholds[j].first &&
            pose_thresholds[i].second <= pose_thresholds[j].second &&
            row.pose_acc[i] > row.pose_acc[j] + 1e-9)
          throw ValidationError("pose accuracy not monotone for " + label);
      }
    }
  };
  for (const auto& [category, row] : per_category) check_row(row, category);
  if (!per_category.empty()) check_row(mean, "mean");
}

}  // namespace pose9d
