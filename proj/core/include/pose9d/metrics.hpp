#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pose9d/box_iou.hpp"
#include "pose9d/mpl.hpp"
#include "pose9d/types.hpp"

namespace pose9d {

struct PoseError {
  double rotation_deg = 0.0;    // in [0, 180]
  double translation_cm = 0.0;  // >= 0
};

// Symmetry-aware rotation/translation error between two poses. Rotation is
// the geodesic angle for asymmetric objects, the angle between the mapped
// symmetry axes for a continuous axis, and the minimum geodesic angle over
// the cyclic group for a discrete axis.
PoseError pose_error(const Pose9DoF& pred, const Pose9DoF& gt, const SymmetryClass& symmetry);

// Percentage of errors satisfying BOTH rotation_deg <= deg and
// translation_cm <= cm, per (deg, cm) threshold.
std::vector<double> threshold_accuracy(const std::vector<PoseError>& errors,
                                       const std::vector<std::pair<double, double>>& thresholds);

// Percentage of IoU values >= threshold, per threshold.
std::vector<double> iou_accuracy(const std::vector<double>& ious,
                                 const std::vector<double>& thresholds);

inline const std::vector<double> kDefaultIouThresholds{0.25, 0.50, 0.75};
inline const std::vector<std::pair<double, double>> kDefaultPoseThresholds{
    {5.0, 2.0}, {5.0, 5.0}, {10.0, 5.0}, {10.0, 10.0}};

// Per-category and mean accuracies at every configured threshold, mirroring
// the usual benchmark table layout.
struct MetricReport {
  struct Row {
    std::vector<double> iou_acc;   // parallel to iou_thresholds
    std::vector<double> pose_acc;  // parallel to pose_thresholds
  };

  std::vector<double> iou_thresholds = kDefaultIouThresholds;
  std::vector<std::pair<double, double>> pose_thresholds = kDefaultPoseThresholds;
  std::map<std::string, Row> per_category;
  Row mean;
  std::size_t frame_count = 0;
  std::optional<double> fps;  // metric-pipeline throughput, when timed
  int rounding = 1;           // decimals used by the text renderer

  // Accuracy must be monotone in the threshold: relaxing a threshold can only
  // admit more frames. Throws ValidationError when violated.
  void check_monotonic() const;
};

}  // namespace pose9d
