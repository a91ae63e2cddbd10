#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "pose9d/box_iou.hpp"
#include "pose9d/eval.hpp"
#include "pose9d/fusion.hpp"
#include "pose9d/geometry.hpp"
#include "pose9d/pnp.hpp"
#include "pose9d/poisson.hpp"
#include "pose9d/rng.hpp"
#include "pose9d/synthetic.hpp"

using namespace pose9d;

namespace {

OrientedBox3D random_box(Rng& rng) {
  OrientedBox3D box;
  box.pose.rotation = rng.rotation();
  box.pose.translation = rng.uniform(0.0, 0.4) * rng.unit_vector();
  box.pose.size = Eigen::Vector3d(rng.uniform(0.05, 0.5), rng.uniform(0.05, 0.5),
                                  rng.uniform(0.05, 0.5));
  return box;
}

void BM_BoxIou(benchmark::State& state) {
  Rng rng(1);
  std::vector<std::pair<OrientedBox3D, OrientedBox3D>> pairs;
  for (int i = 0; i < 256; ++i) pairs.emplace_back(random_box(rng), random_box(rng));
  size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[i++ & 255];
    benchmark::DoNotOptimize(box_iou_3d(a, b));
  }
}
BENCHMARK(BM_BoxIou);

void BM_SymmetricBoxIou64(benchmark::State& state) {
  Rng rng(2);
  const OrientedBox3D a = random_box(rng);
  const OrientedBox3D b = random_box(rng);
  const SymmetryClass sym = SymmetryClass::continuous(Eigen::Vector3d::UnitY());
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_box_iou(a, b, sym, 64));
}
BENCHMARK(BM_SymmetricBoxIou64);

void BM_PnPRecover(benchmark::State& state) {
  Rng rng(3);
  const CameraIntrinsics cam{600, 600, 320, 240, 640, 480};
  const RelativeDims dims = RelativeDims::normalized(Eigen::Vector3d(0.9, 0.6, 1.2));
  const Eigen::Matrix3d r = rng.rotation();
  const Eigen::Vector3d t(0.1, -0.2, 4.0);
  CuboidKeypoints2D kps;
  const auto model = cuboid_corners(dims.dims);
  for (int i = 0; i < 8; ++i) {
    Eigen::Vector2d uv = project_point(cam, r, t, model.row(i).transpose());
    kps.points.row(i) = uv + 0.5 * Eigen::Vector2d(rng.gaussian(), rng.gaussian());
  }
  for (auto _ : state) benchmark::DoNotOptimize(pnp_recover(kps, dims, cam));
}
BENCHMARK(BM_PnPRecover);

void BM_BilinearSample1028(benchmark::State& state) {
  Rng rng(4);
  FeatureMap fmap = FeatureMap::zeros(60, 80, 32);
  for (double& v : fmap.values) v = rng.uniform(-1, 1);
  PixelCoords coords;
  coords.coords.resize(kDefaultSampleCount, 2);
  for (int i = 0; i < kDefaultSampleCount; ++i)
    coords.coords.row(i) << rng.uniform(0, 79), rng.uniform(0, 59);
  for (auto _ : state) benchmark::DoNotOptimize(sample_image_features(fmap, coords));
}
BENCHMARK(BM_BilinearSample1028);

void BM_PoissonDisk1024(benchmark::State& state) {
  const TriangleMesh mesh = make_box_mesh(Eigen::Vector3d(0.3, 0.2, 0.4));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(poisson_disk_sample(mesh, 1024, seed++));
}
BENCHMARK(BM_PoissonDisk1024);

void BM_Backproject(benchmark::State& state) {
  Pose9DoF pose;
  pose.translation = Eigen::Vector3d(0, 0, 1.6);
  pose.size = Eigen::Vector3d(0.4, 0.3, 0.2);
  const CameraIntrinsics k{577.5, 577.5, 319.5, 239.5, 640, 480};
  const RenderedView view = render_box_depth(pose, k);
  for (auto _ : state) benchmark::DoNotOptimize(backproject(view.depth, k, view.mask));
}
BENCHMARK(BM_Backproject);

void BM_EvaluatePipeline(benchmark::State& state) {
  const EvalConfig cfg;
  const auto scene = generate_synthetic_scene(cfg, 5, NoiseSpec{3.0, 1.0, 2.0},
                                              static_cast<int>(state.range(0)), false);
  for (auto _ : state)
    benchmark::DoNotOptimize(evaluate(scene.predictions, scene.ground_truth, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(scene.predictions.size()));
}
BENCHMARK(BM_EvaluatePipeline)->Arg(10)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
