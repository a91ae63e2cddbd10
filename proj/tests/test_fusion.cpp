#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "pose9d/fusion.hpp"
#include "pose9d/rng.hpp"
#include "pose9d/tensor_file.hpp"
#include "test_helpers.hpp"

using namespace pose9d;

namespace {

FeatureMap random_fmap(int h, int w, int c, std::uint64_t seed) {
  FeatureMap f = FeatureMap::zeros(h, w, c);
  Rng rng(seed);
  for (double& v : f.values) v = rng.uniform(-2.0, 2.0);
  return f;
}

PointFeatureSet random_features(Eigen::Index n, Eigen::Index c, std::uint64_t seed) {
  Rng rng(seed);
  PointFeatureSet s;
  s.values.resize(n, c);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < c; ++j) s.values(i, j) = rng.uniform(-1.5, 1.5);
  return s;
}

FusionConfig random_mlp_config(Eigen::Index c1, Eigen::Index c2, std::uint64_t seed) {
  Rng rng(seed);
  FusionConfig cfg;
  cfg.strategy = FusionStrategy::kMlpSkip;
  auto fill = [&rng](Eigen::MatrixXd& m, Eigen::Index r, Eigen::Index c) {
    m.resize(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.uniform(-0.7, 0.7);
  };
  fill(cfg.w1, c1 + c2, c2);
  fill(cfg.w2, c2, c2);
  cfg.b1.resize(c2);
  cfg.b2.resize(c2);
  for (Eigen::Index i = 0; i < c2; ++i) {
    cfg.b1(i) = rng.uniform(-0.5, 0.5);
    cfg.b2(i) = rng.uniform(-0.5, 0.5);
  }
  return cfg;
}

FusionConfig random_attn_config(Eigen::Index c1, Eigen::Index c2, Eigen::Index d,
                                std::uint64_t seed) {
  Rng rng(seed);
  FusionConfig cfg;
  cfg.strategy = FusionStrategy::kAttnSkip;
  auto fill = [&rng](Eigen::MatrixXd& m, Eigen::Index r, Eigen::Index c) {
    m.resize(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.uniform(-0.8, 0.8);
  };
  fill(cfg.wq, c2, d);
  fill(cfg.wk, c1, d);
  fill(cfg.wv, c1, c2);
  return cfg;
}

const CameraIntrinsics kCam{500.0, 500.0, 320.0, 240.0, 640, 480};

}  // namespace

TEST_CASE("project_cloud_to_pixels: optical axis, linear grid scaling, recomputation") {
  PointCloud cloud;
  cloud.points.resize(1, 3);
  cloud.points.row(0) << 0, 0, 1;
  const PixelCoords px = project_cloud_to_pixels(cloud, kCam, 1.0);
  CHECK(px.coords(0, 0) == doctest::Approx(320.0).epsilon(1e-15));
  CHECK(px.coords(0, 1) == doctest::Approx(240.0).epsilon(1e-15));

  Rng rng(201);
  PointCloud many;
  many.points.resize(64, 3);
  for (int i = 0; i < 64; ++i)
    many.points.row(i) << rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.5, 4);

  const PixelCoords full = project_cloud_to_pixels(many, kCam, 1.0);
  const PixelCoords eighth = project_cloud_to_pixels(many, kCam, 1.0 / 8.0);
  CHECK((eighth.coords - full.coords / 8.0).cwiseAbs().maxCoeff() < 1e-12);

  for (int i = 0; i < 64; ++i) {
    const double z = many.points(i, 2);
    const double u = kCam.fx * many.points(i, 0) / z + kCam.cx;
    const double v = kCam.fy * many.points(i, 1) / z + kCam.cy;
    CHECK(full.coords(i, 0) == doctest::Approx(u).epsilon(1e-12));
    CHECK(full.coords(i, 1) == doctest::Approx(v).epsilon(1e-12));
  }

  PointCloud behind;
  behind.points.resize(1, 3);
  behind.points.row(0) << 0, 0, -1;
  CHECK_THROWS_AS(project_cloud_to_pixels(behind, kCam, 1.0), BehindCameraError);
  CHECK_THROWS_AS(project_cloud_to_pixels(many, kCam, 0.0), InvalidArgument);
}

TEST_CASE("sample_image_features is exact on grid nodes") {
  const FeatureMap f = random_fmap(8, 6, 3, 202);
  PixelCoords coords;
  coords.coords.resize(1, 2);
  coords.coords.row(0) << 3.0, 5.0;  // (u, v) = (col 3, row 5)
  const PointFeatureSet out = sample_image_features(f, coords);
  for (int c = 0; c < 3; ++c) CHECK(out.values(0, c) == f.at(5, 3, c));
}

TEST_CASE("sample_image_features reproduces per-channel linear functions") {
  FeatureMap f = FeatureMap::zeros(7, 9, 2);
  for (int y = 0; y < 7; ++y)
    for (int x = 0; x < 9; ++x) {
      f.at(y, x, 0) = 0.25 * x - 1.5 * y + 0.75;
      f.at(y, x, 1) = -2.0 * x + 0.5 * y;
    }
  Rng rng(203);
  PixelCoords coords;
  coords.coords.resize(50, 2);
  for (int i = 0; i < 50; ++i) coords.coords.row(i) << rng.uniform(0, 8), rng.uniform(0, 6);
  const PointFeatureSet out = sample_image_features(f, coords);
  for (int i = 0; i < 50; ++i) {
    const double u = coords.coords(i, 0), v = coords.coords(i, 1);
    CHECK(std::abs(out.values(i, 0) - (0.25 * u - 1.5 * v + 0.75)) < 1e-12);
    CHECK(std::abs(out.values(i, 1) - (-2.0 * u + 0.5 * v)) < 1e-12);
  }
}

TEST_CASE("sample_image_features matches the 4-neighbor brute force") {
  const FeatureMap f = random_fmap(12, 17, 4, 204);
  Rng rng(205);
  PixelCoords coords;
  const int n = 10000;
  coords.coords.resize(n, 2);
  for (int i = 0; i < n; ++i)
    coords.coords.row(i) << rng.uniform(-3, 20), rng.uniform(-3, 15);  // includes out-of-grid
  const PointFeatureSet out = sample_image_features(f, coords);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 4; ++c)
      CHECK(std::abs(out.values(i, c) -
                     testing::bilinear_reference(f, coords.coords(i, 0), coords.coords(i, 1), c)) <
            1e-12);
}

TEST_CASE("sample_image_features clamps to the edge and stays within bounds") {
  const FeatureMap f = random_fmap(5, 5, 2, 206);
  PixelCoords coords;
  coords.coords.resize(4, 2);
  coords.coords << -100.0, -100.0, 100.0, 100.0, -5.0, 2.0, 2.0, 50.0;
  const PointFeatureSet out = sample_image_features(f, coords);
  CHECK(out.values(0, 0) == f.at(0, 0, 0));
  CHECK(out.values(1, 0) == f.at(4, 4, 0));

  const double lo = *std::min_element(f.values.begin(), f.values.end());
  const double hi = *std::max_element(f.values.begin(), f.values.end());
  const FeatureMap g = random_fmap(9, 9, 1, 207);
  Rng rng(208);
  PixelCoords many;
  many.coords.resize(500, 2);
  for (int i = 0; i < 500; ++i) many.coords.row(i) << rng.uniform(-2, 10), rng.uniform(-2, 10);
  const PointFeatureSet sampled = sample_image_features(g, many);
  const double glo = *std::min_element(g.values.begin(), g.values.end());
  const double ghi = *std::max_element(g.values.begin(), g.values.end());
  for (int i = 0; i < 500; ++i) {
    CHECK(sampled.values(i, 0) >= glo - 1e-12);
    CHECK(sampled.values(i, 0) <= ghi + 1e-12);
  }
  (void)lo;
  (void)hi;
}

TEST_CASE("fuse concat is exact slice equality") {
  const PointFeatureSet mono = random_features(13, 5, 209);
  const PointFeatureSet depth = random_features(13, 7, 210);
  FusionConfig cfg;
  cfg.strategy = FusionStrategy::kConcat;
  const PointFeatureSet out = fuse(mono, depth, cfg);
  REQUIRE(out.values.rows() == 13);
  REQUIRE(out.values.cols() == 12);
  CHECK(out.values.leftCols(5) == mono.values);
  CHECK(out.values.rightCols(7) == depth.values);
}

TEST_CASE("fuse mlp_skip with zero weights is the identity on depth") {
  const PointFeatureSet mono = random_features(9, 4, 211);
  const PointFeatureSet depth = random_features(9, 6, 212);
  FusionConfig cfg;
  cfg.strategy = FusionStrategy::kMlpSkip;
  cfg.w1 = Eigen::MatrixXd::Zero(10, 6);
  cfg.b1 = Eigen::VectorXd::Zero(6);
  cfg.w2 = Eigen::MatrixXd::Zero(6, 6);
  cfg.b2 = Eigen::VectorXd::Zero(6);
  const PointFeatureSet out = fuse(mono, depth, cfg);
  CHECK(out.values == depth.values);
}

TEST_CASE("fuse mlp_skip matches a per-point scalar recomputation") {
  const Eigen::Index c1 = 3, c2 = 4, n = 11;
  const PointFeatureSet mono = random_features(n, c1, 213);
  const PointFeatureSet depth = random_features(n, c2, 214);
  const FusionConfig cfg = random_mlp_config(c1, c2, 215);
  const PointFeatureSet out = fuse(mono, depth, cfg);

  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd cat(c1 + c2);
    cat << mono.values.row(i).transpose(), depth.values.row(i).transpose();
    Eigen::VectorXd hidden = cfg.w1.transpose() * cat + cfg.b1;
    for (Eigen::Index k = 0; k < c2; ++k) hidden(k) = std::max(0.0, hidden(k));
    const Eigen::VectorXd expect =
        depth.values.row(i).transpose() + cfg.w2.transpose() * hidden + cfg.b2;
    CHECK((out.values.row(i).transpose() - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("fuse attn_skip matches the hand-expanded 2-point instance") {
  // N=2, C1=2, C2=1, D=1 with hand-picked weights
  PointFeatureSet mono, depth;
  mono.values.resize(2, 2);
  mono.values << 1.0, -0.5, 0.25, 2.0;
  depth.values.resize(2, 1);
  depth.values << 0.5, -1.25;

  FusionConfig cfg;
  cfg.strategy = FusionStrategy::kAttnSkip;
  cfg.wq.resize(1, 1);
  cfg.wq << 2.0;
  cfg.wk.resize(2, 1);
  cfg.wk << 0.5, -1.0;
  cfg.wv.resize(2, 1);
  cfg.wv << 1.5, 0.25;

  // q_i = 2 * depth_i ; k_j = mono_j . (0.5, -1) ; v_j = mono_j . (1.5, 0.25)
  const double q0 = 2.0 * 0.5, q1 = 2.0 * -1.25;
  const double k0 = 1.0 * 0.5 + (-0.5) * (-1.0);
  const double k1 = 0.25 * 0.5 + 2.0 * (-1.0);
  const double v0 = 1.0 * 1.5 + (-0.5) * 0.25;
  const double v1 = 0.25 * 1.5 + 2.0 * 0.25;

  auto attn_out = [&](double q, double d) {
    const double s0 = std::exp(q * k0), s1 = std::exp(q * k1);  // D = 1, sqrt(D) = 1
    return d + (s0 * v0 + s1 * v1) / (s0 + s1);
  };
  const PointFeatureSet out = fuse(mono, depth, cfg);
  CHECK(std::abs(out.values(0, 0) - attn_out(q0, 0.5)) < 1e-12);
  CHECK(std::abs(out.values(1, 0) - attn_out(q1, -1.25)) < 1e-12);
}

TEST_CASE("attention rows sum to one") {
  const PointFeatureSet mono = random_features(17, 5, 216);
  const PointFeatureSet depth = random_features(17, 3, 217);
  const FusionConfig cfg = random_attn_config(5, 3, 4, 218);
  const Eigen::MatrixXd attn = attention_matrix(mono, depth, cfg);
  for (Eigen::Index i = 0; i < attn.rows(); ++i)
    CHECK(std::abs(attn.row(i).sum() - 1.0) < 1e-9);
}

TEST_CASE("fusion operators are permutation equivariant") {
  const Eigen::Index n = 23, c1 = 4, c2 = 5;
  const PointFeatureSet mono = random_features(n, c1, 219);
  const PointFeatureSet depth = random_features(n, c2, 220);

  FusionConfig concat_cfg;
  concat_cfg.strategy = FusionStrategy::kConcat;
  const FusionConfig mlp_cfg = random_mlp_config(c1, c2, 221);
  const FusionConfig attn_cfg = random_attn_config(c1, c2, 3, 222);

  Rng rng(223);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = static_cast<int>(n) - 1; i > 0; --i)
      std::swap(perm[static_cast<size_t>(i)],
                perm[static_cast<size_t>(rng.below(static_cast<std::uint64_t>(i + 1)))]);

    PointFeatureSet mono_p, depth_p;
    mono_p.values.resize(n, c1);
    depth_p.values.resize(n, c2);
    for (Eigen::Index i = 0; i < n; ++i) {
      mono_p.values.row(i) = mono.values.row(perm[static_cast<size_t>(i)]);
      depth_p.values.row(i) = depth.values.row(perm[static_cast<size_t>(i)]);
    }

    const std::array<const FusionConfig*, 3> configs{&concat_cfg, &mlp_cfg, &attn_cfg};
    for (const FusionConfig* cfg : configs) {
      const PointFeatureSet base = fuse(mono, depth, *cfg);
      const PointFeatureSet permuted = fuse(mono_p, depth_p, *cfg);
      double worst = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
        worst = std::max(worst, (permuted.values.row(i) -
                                 base.values.row(perm[static_cast<size_t>(i)]))
                                    .cwiseAbs()
                                    .maxCoeff());
      if (cfg->strategy == FusionStrategy::kConcat)
        CHECK(worst == 0.0);
      else
        CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("fuse is deterministic") {
  const PointFeatureSet mono = random_features(31, 6, 224);
  const PointFeatureSet depth = random_features(31, 4, 225);
  const FusionConfig cfg = random_attn_config(6, 4, 5, 226);
  const PointFeatureSet a = fuse(mono, depth, cfg);
  const PointFeatureSet b = fuse(mono, depth, cfg);
  CHECK(a.values == b.values);
}

TEST_CASE("fuse validates shapes") {
  const PointFeatureSet mono = random_features(8, 3, 227);
  const PointFeatureSet depth = random_features(9, 3, 228);
  FusionConfig cfg;
  cfg.strategy = FusionStrategy::kConcat;
  CHECK_THROWS_AS(fuse(mono, depth, cfg), InvalidArgument);

  const PointFeatureSet depth_ok = random_features(8, 3, 229);
  FusionConfig bad = random_mlp_config(3, 3, 230);
  bad.w2.resize(2, 3);  // wrong shape
  CHECK_THROWS_AS(fuse(mono, depth_ok, bad), InvalidArgument);

  FusionConfig bad_attn = random_attn_config(3, 3, 2, 231);
  bad_attn.wk.resize(4, 2);
  CHECK_THROWS_AS(fuse(mono, depth_ok, bad_attn), InvalidArgument);
}

TEST_CASE("fusion weights round-trip through the tensor container") {
  const Eigen::Index c1 = 3, c2 = 4;
  const FusionConfig cfg = random_mlp_config(c1, c2, 232);

  testing::TempDir tmp;
  std::vector<NamedTensor> tensors;
  auto push_matrix = [&tensors](const std::string& name, const Eigen::MatrixXd& m) {
    NamedTensor t;
    t.name = name;
    t.shape = {static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols())};
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) t.data.push_back(static_cast<float>(m(i, j)));
    tensors.push_back(std::move(t));
  };
  auto push_vector = [&tensors](const std::string& name, const Eigen::VectorXd& v) {
    NamedTensor t;
    t.name = name;
    t.shape = {static_cast<std::uint32_t>(v.size())};
    for (Eigen::Index i = 0; i < v.size(); ++i) t.data.push_back(static_cast<float>(v(i)));
    tensors.push_back(std::move(t));
  };
  push_matrix("w1", cfg.w1);
  push_vector("b1", cfg.b1);
  push_matrix("w2", cfg.w2);
  push_vector("b2", cfg.b2);
  const std::string path = tmp.file("weights.bin");
  write_tensor_file(path, tensors);

  const FusionConfig loaded = load_fusion_config(path, FusionStrategy::kMlpSkip);
  // container stores 32-bit floats; compare at float precision
  CHECK((loaded.w1.cast<float>() - cfg.w1.cast<float>()).norm() == 0.0f);
  CHECK((loaded.b1.cast<float>() - cfg.b1.cast<float>()).norm() == 0.0f);
  CHECK((loaded.w2.cast<float>() - cfg.w2.cast<float>()).norm() == 0.0f);
  CHECK((loaded.b2.cast<float>() - cfg.b2.cast<float>()).norm() == 0.0f);

  const PointFeatureSet mono = random_features(6, c1, 233);
  const PointFeatureSet depth = random_features(6, c2, 234);
  FusionConfig rounded = cfg;
  rounded.w1 = cfg.w1.cast<float>().cast<double>();
  rounded.b1 = cfg.b1.cast<float>().cast<double>();
  rounded.w2 = cfg.w2.cast<float>().cast<double>();
  rounded.b2 = cfg.b2.cast<float>().cast<double>();
  CHECK(fuse(mono, depth, loaded).values == fuse(mono, depth, rounded).values);
}
