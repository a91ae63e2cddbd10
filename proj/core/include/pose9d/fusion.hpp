#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "pose9d/types.hpp"

namespace pose9d {

// H x W x C feature grid, row-major (the monocular branch output).
struct FeatureMap {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<double> values;

  double at(int row, int col, int c) const {
    return values[(static_cast<size_t>(row) * width + col) * channels + c];
  }
  double& at(int row, int col, int c) {
    return values[(static_cast<size_t>(row) * width + col) * channels + c];
  }

  static FeatureMap zeros(int height, int width, int channels);
  void validate() const;
};

// N x C per-point features (either branch, or the fusion output).
struct PointFeatureSet {
  Eigen::MatrixXd values;  // N rows, C cols

  Eigen::Index count() const { return values.rows(); }
  Eigen::Index channels() const { return values.cols(); }
};

// (u, v) locations in feature-grid pixels, one row per point.
struct PixelCoords {
  Eigen::Matrix<double, Eigen::Dynamic, 2> coords;
};

enum class FusionStrategy { kConcat, kMlpSkip, kAttnSkip };

FusionStrategy fusion_strategy_from_string(const std::string& name);
std::string to_string(FusionStrategy strategy);

// Weights are plain inputs here; nothing in this module trains them.
struct FusionConfig {
  FusionStrategy strategy = FusionStrategy::kConcat;

  // mlp_skip: out = depth + relu(cat(mono,depth) * w1 + b1) * w2 + b2
  Eigen::MatrixXd w1;  // (C1+C2) x C2
  Eigen::VectorXd b1;  // C2
  Eigen::MatrixXd w2;  // C2 x C2
  Eigen::VectorXd b2;  // C2

  // attn_skip: out = depth + softmax_rows((depth*wq)(mono*wk)^T / sqrt(D)) * (mono*wv)
  Eigen::MatrixXd wq;  // C2 x D
  Eigen::MatrixXd wk;  // C1 x D
  Eigen::MatrixXd wv;  // C1 x C2
};

// Loads the named weight tensors for a strategy from a tensor container file
// (names: w1, b1, w2, b2 / wq, wk, wv).
FusionConfig load_fusion_config(const std::string& path, FusionStrategy strategy);

// Projects camera-frame points to feature-grid pixels: full-resolution pinhole
// projection scaled by grid_scale (feature px per image px, e.g. 1/8 for a
// stride-8 map).
PixelCoords project_cloud_to_pixels(const PointCloud& cloud, const CameraIntrinsics& K,
                                    double grid_scale);

// Bilinear interpolation of the feature map at each coordinate, clamp-to-edge
// outside [0, W-1] x [0, H-1]. Row i of the output corresponds to point i.
PointFeatureSet sample_image_features(const FeatureMap& fmap, const PixelCoords& coords);

// The fusion operator. concat widens to C1+C2; the other two strategies keep
// the depth width C2 and add a residual path.
PointFeatureSet fuse(const PointFeatureSet& mono, const PointFeatureSet& depth,
                     const FusionConfig& cfg);

// Debug accessor: the row-stochastic attention matrix used by attn_skip.
Eigen::MatrixXd attention_matrix(const PointFeatureSet& mono, const PointFeatureSet& depth,
                                 const FusionConfig& cfg);

}  // namespace pose9d
