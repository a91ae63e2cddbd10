#include "pose9d/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "pose9d/geometry.hpp"
#include "pose9d/image_io.hpp"
#include "pose9d/rng.hpp"

namespace pose9d {

RenderedView render_box_depth(const Pose9DoF& pose, const CameraIntrinsics& K) {
  pose.validate();
  K.validate();

  RenderedView view;
  view.depth_m = Eigen::MatrixXd::Zero(K.height, K.width);
  view.depth = DepthImage::zeros(K.width, K.height);
  view.mask = BinaryMask::filled(K.width, K.height, false);

  const Eigen::Matrix3d r_inv = pose.rotation.transpose();
  const Eigen::Vector3d origin_local = -(r_inv * pose.translation);
  const Eigen::Vector3d half = 0.5 * pose.size;

  for (int v = 0; v < K.height; ++v) {
    for (int u = 0; u < K.width; ++u) {
      // camera ray through the pixel center, parameterized by depth z
      const Eigen::Vector3d dir((u - K.cx) / K.fx, (v - K.cy) / K.fy, 1.0);
      const Eigen::Vector3d d_local = r_inv * dir;
      // slab test in the box frame
      double t_near = 0.0, t_far = std::numeric_limits<double>::infinity();
      bool miss = false;
      for (int axis = 0; axis < 3; ++axis) {
        const double o = origin_local(axis), d = d_local(axis);
        if (std::abs(d) < 1e-15) {
          if (std::abs(o) > half(axis)) {
            miss = true;
            break;
          }
          continue;
        }
        double t0 = (-half(axis) - o) / d;
        double t1 = (half(axis) - o) / d;
        if (t0 > t1) std::swap(t0, t1);
        t_near = std::max(t_near, t0);
        t_far = std::min(t_far, t1);
        if (t_near > t_far) {
          miss = true;
          break;
        }
      }
      if (miss || t_far <= 1e-9) continue;
      const double t_hit = t_near > 1e-9 ? t_near : t_far;
      const double z = t_hit;  // dir has unit z component
      const long mm = std::lround(z * 1000.0);
      if (mm < 1 || mm > 65535) continue;
      view.depth_m(v, u) = z;
      view.depth.at(v, u) = static_cast<std::uint16_t>(mm);
      view.mask.set(v, u, true);
    }
  }
  return view;
}

namespace {

// Unit vector perpendicular to `axis`, drawn deterministically.
Eigen::Vector3d perpendicular_unit(Rng& rng, const Eigen::Vector3d& axis) {
  while (true) {
    const Eigen::Vector3d candidate = axis.cross(rng.unit_vector());
    const double n = candidate.norm();
    if (n > 1e-6) return candidate / n;
  }
}

}  // namespace

SyntheticScene generate_synthetic_scene(const EvalConfig& cfg, std::uint64_t seed,
                                        const NoiseSpec& noise, int frames_per_category,
                                        bool with_renders) {
  cfg.validate();
  noise.validate();
  if (frames_per_category < 1) throw InvalidArgument("frames_per_category must be >= 1");

  SyntheticScene scene;
  scene.intrinsics = {577.5, 577.5, 319.5, 239.5, 640, 480};

  Rng rng(seed);
  const double deg2rad = std::numbers::pi / 180.0;

  for (const std::string& category : cfg.categories) {
    const SymmetryClass sym = cfg.symmetry_for(category);
    for (int f = 0; f < frames_per_category; ++f) {
      FrameRecord gt;
      gt.frame_id = category + "_" + std::to_string(f);
      gt.category = category;
      gt.rotation = rng.rotation();
      gt.translation =
          Eigen::Vector3d(rng.uniform(-0.25, 0.25), rng.uniform(-0.2, 0.2), rng.uniform(1.2, 2.5));
      gt.size = Eigen::Vector3d(rng.uniform(0.08, 0.4), rng.uniform(0.08, 0.4),
                                rng.uniform(0.08, 0.4));

      FrameRecord pred = gt;
      if (noise.rotation_deg > 0.0) {
        // keep the symmetry-aware rotation error equal to the requested
        // magnitude: for a continuous axis, tilt the mapped axis itself
        Eigen::Vector3d axis_world =
            sym.kind == SymmetryClass::Kind::kContinuousAxis
                ? perpendicular_unit(rng, (gt.rotation * sym.axis).normalized())
                : rng.unit_vector();
        pred.rotation = axis_angle_rotation(axis_world, noise.rotation_deg * deg2rad) * gt.rotation;
      }
      if (noise.translation_cm > 0.0)
        pred.translation += (noise.translation_cm / 100.0) * rng.unit_vector();
      if (noise.scale_percent > 0.0) pred.size *= 1.0 + noise.scale_percent / 100.0;

      scene.ground_truth.push_back(gt);
      scene.predictions.push_back(pred);
      scene.meshes[gt.frame_id] = make_box_mesh(gt.size);
      if (with_renders) scene.renders[gt.frame_id] = render_box_depth(gt.pose(), scene.intrinsics);
    }
  }
  return scene;
}

void write_synthetic_scene(const SyntheticScene& scene, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(fs::path(out_dir) / "depth", ec);
  fs::create_directories(fs::path(out_dir) / "mask", ec);
  fs::create_directories(fs::path(out_dir) / "meshes", ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);

  save_records(scene.ground_truth, (fs::path(out_dir) / "gt.jsonl").string());
  save_records(scene.predictions, (fs::path(out_dir) / "pred.jsonl").string());

  nlohmann::json k;
  k["fx"] = scene.intrinsics.fx;
  k["fy"] = scene.intrinsics.fy;
  k["cx"] = scene.intrinsics.cx;
  k["cy"] = scene.intrinsics.cy;
  k["width"] = scene.intrinsics.width;
  k["height"] = scene.intrinsics.height;
  std::ofstream kf((fs::path(out_dir) / "intrinsics.json").string());
  if (!kf) throw IoError("cannot write intrinsics.json");
  kf << k.dump(2) << "\n";

  for (const auto& [frame_id, view] : scene.renders) {
    save_depth_png(view.depth, (fs::path(out_dir) / "depth" / (frame_id + ".png")).string());
    save_mask_png(view.mask, (fs::path(out_dir) / "mask" / (frame_id + ".png")).string());
  }
  for (const auto& [frame_id, mesh] : scene.meshes)
    save_obj(mesh, (fs::path(out_dir) / "meshes" / (frame_id + ".obj")).string());
}

}  // namespace pose9d
