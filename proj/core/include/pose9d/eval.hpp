#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "pose9d/metrics.hpp"
#include "pose9d/types.hpp"

namespace pose9d {

// One pose record, prediction or ground truth. The on-disk form is one JSON
// object per line; see the FORMATS document for the schema.
struct FrameRecord {
  std::string frame_id;
  std::string category;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Eigen::Vector3d size = Eigen::Vector3d::Ones();

  Pose9DoF pose() const { return {rotation, translation, size}; }
};

struct EvalConfig {
  std::vector<std::string> categories{"bottle", "bowl", "camera", "can", "laptop", "mug"};
  // Default symmetry follows the usual convention for these categories:
  // bottle/bowl/can rotate freely about the vertical axis, mug counts as
  // asymmetric (the handle breaks the symmetry when visible).
  std::map<std::string, SymmetryClass> symmetry;
  std::vector<double> iou_thresholds = kDefaultIouThresholds;
  std::vector<std::pair<double, double>> pose_thresholds = kDefaultPoseThresholds;
  int symmetry_steps = 64;  // rotations tried by the symmetry-aware IoU
  int rounding = 1;         // decimals in the text report
  std::uint64_t seed = 0;

  EvalConfig();
  void validate() const;

  SymmetryClass symmetry_for(const std::string& category) const;
};

EvalConfig load_eval_config(const std::string& path);

// JSON-lines I/O. load_records validates each record: rotations more than
// 1e-3 away from orthonormal are rejected, accepted ones are re-orthonormalized.
std::vector<FrameRecord> load_records(const std::string& path);
void save_records(const std::vector<FrameRecord>& records, const std::string& path);

// Matches predictions to ground truth by (frame_id, category), computes the
// symmetry-aware IoU and pose error per pair, and aggregates per category plus
// a mean row. `workers` only affects wall-clock time, never the result.
MetricReport evaluate(const std::vector<FrameRecord>& predictions,
                      const std::vector<FrameRecord>& ground_truth, const EvalConfig& cfg,
                      int workers = 0);

enum class ReportFormat { kTextTable, kCsv, kJson };

ReportFormat report_format_from_string(const std::string& name);

// text-table rounds to report.rounding decimals; csv and json carry the
// unrounded values.
std::string render_report(const MetricReport& report, ReportFormat format);

}  // namespace pose9d
