#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "pose9d/eval.hpp"
#include "pose9d/mesh.hpp"
#include "pose9d/types.hpp"

namespace pose9d {

// Exact perturbation magnitudes applied to the synthetic predictions:
// rotation in degrees, translation in centimeters, size in percent.
struct NoiseSpec {
  double rotation_deg = 0.0;
  double translation_cm = 0.0;
  double scale_percent = 0.0;

  void validate() const {
    if (rotation_deg < 0.0 || translation_cm < 0.0 || scale_percent < 0.0)
      throw InvalidArgument("noise levels must be >= 0");
  }
};

struct RenderedView {
  Eigen::MatrixXd depth_m;  // exact per-pixel depth, 0 where no hit
  DepthImage depth;         // millimeter-quantized storage form
  BinaryMask mask;
};

// Depth render of an oriented box under the pinhole camera: per pixel the
// nearest ray/box intersection. Quantization to 16-bit millimeters happens
// only in the DepthImage field; depth_m keeps the exact values.
RenderedView render_box_depth(const Pose9DoF& pose, const CameraIntrinsics& K);

struct SyntheticScene {
  CameraIntrinsics intrinsics;
  std::vector<FrameRecord> ground_truth;
  std::vector<FrameRecord> predictions;
  std::map<std::string, TriangleMesh> meshes;      // by frame_id, object frame
  std::map<std::string, RenderedView> renders;     // by frame_id
};

// Deterministic scene set: `frames_per_category` random poses per configured
// category, depth renders of the ground-truth cuboids, and prediction records
// perturbed by exactly the requested noise magnitudes. The rotation
// perturbation axis is chosen perpendicular to the mapped symmetry axis for
// continuously symmetric categories, so the symmetry-aware rotation error
// still equals the requested magnitude.
SyntheticScene generate_synthetic_scene(const EvalConfig& cfg, std::uint64_t seed,
                                        const NoiseSpec& noise, int frames_per_category = 10,
                                        bool with_renders = true);

// Writes gt.jsonl, pred.jsonl, intrinsics.json, depth/, mask/ and meshes/
// under out_dir (see FORMATS).
void write_synthetic_scene(const SyntheticScene& scene, const std::string& out_dir);

}  // namespace pose9d
