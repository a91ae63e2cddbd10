#include "pose9d/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "pose9d/geometry.hpp"
#include "pose9d/tensor_file.hpp"

namespace pose9d {

FeatureMap FeatureMap::zeros(int height, int width, int channels) {
  FeatureMap f;
  f.height = height;
  f.width = width;
  f.channels = channels;
  f.values.assign(static_cast<size_t>(height) * width * channels, 0.0);
  return f;
}

void FeatureMap::validate() const {
  if (height < 1 || width < 1 || channels < 1)
    throw InvalidArgument("feature map dimensions must be >= 1");
  if (values.size() != static_cast<size_t>(height) * width * channels)
    throw InvalidArgument("feature map buffer size mismatch");
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidArgument("feature map values must be finite");
}

FusionStrategy fusion_strategy_from_string(const std::string& name) {
  if (name == "concat") return FusionStrategy::kConcat;
  if (name == "mlp_skip") return FusionStrategy::kMlpSkip;
  if (name == "attn_skip") return FusionStrategy::kAttnSkip;
  throw InvalidArgument("unknown fusion strategy: " + name);
}

std::string to_string(FusionStrategy strategy) {
  switch (strategy) {
    case FusionStrategy::kConcat: return "concat";
    case FusionStrategy::kMlpSkip: return "mlp_skip";
    case FusionStrategy::kAttnSkip: return "attn_skip";
  }
  throw InvalidArgument("invalid fusion strategy value");
}

PixelCoords project_cloud_to_pixels(const PointCloud& cloud, const CameraIntrinsics& K,
                                    double grid_scale) {
  if (!(grid_scale > 0.0)) throw InvalidArgument("grid_scale must be positive");
  PixelCoords out;
  out.coords.resize(cloud.size(), 2);
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const Eigen::Vector2d uv = project_point(K, Eigen::Matrix3d::Identity(),
                                             Eigen::Vector3d::Zero(), cloud.points.row(i));
    out.coords.row(i) = grid_scale * uv;
  }
  return out;
}

PointFeatureSet sample_image_features(const FeatureMap& fmap, const PixelCoords& coords) {
  fmap.validate();
  if (!coords.coords.allFinite()) throw InvalidArgument("pixel coordinates must be finite");

  PointFeatureSet out;
  out.values.resize(coords.coords.rows(), fmap.channels);
  for (Eigen::Index i = 0; i < coords.coords.rows(); ++i) {
    const double u = std::clamp(coords.coords(i, 0), 0.0, static_cast<double>(fmap.width - 1));
    const double v = std::clamp(coords.coords(i, 1), 0.0, static_cast<double>(fmap.height - 1));
    const int x0 = static_cast<int>(std::floor(u));
    const int y0 = static_cast<int>(std::floor(v));
    const int x1 = std::min(x0 + 1, fmap.width - 1);
    const int y1 = std::min(y0 + 1, fmap.height - 1);
    const double fu = u - x0;
    const double fv = v - y0;
    for (int c = 0; c < fmap.channels; ++c) {
      out.values(i, c) = (1.0 - fv) * ((1.0 - fu) * fmap.at(y0, x0, c) + fu * fmap.at(y0, x1, c)) +
                         fv * ((1.0 - fu) * fmap.at(y1, x0, c) + fu * fmap.at(y1, x1, c));
    }
  }
  return out;
}

namespace {

void check_counts(const PointFeatureSet& mono, const PointFeatureSet& depth) {
  if (mono.count() != depth.count())
    throw InvalidArgument("mono and depth feature sets must share the point count");
  if (mono.count() < 1) throw InvalidArgument("feature sets must be non-empty");
  if (!mono.values.allFinite() || !depth.values.allFinite())
    throw InvalidArgument("feature values must be finite");
}

void check_mlp_shapes(const FusionConfig& cfg, Eigen::Index c1, Eigen::Index c2) {
  if (cfg.w1.rows() != c1 + c2 || cfg.w1.cols() != c2)
    throw InvalidArgument("w1 must be (C1+C2) x C2");
  if (cfg.b1.size() != c2) throw InvalidArgument("b1 must have C2 entries");
  if (cfg.w2.rows() != c2 || cfg.w2.cols() != c2) throw InvalidArgument("w2 must be C2 x C2");
  if (cfg.b2.size() != c2) throw InvalidArgument("b2 must have C2 entries");
}

void check_attn_shapes(const FusionConfig& cfg, Eigen::Index c1, Eigen::Index c2) {
  const Eigen::Index d = cfg.wq.cols();
  if (d < 1) throw InvalidArgument("attention width D must be >= 1");
  if (cfg.wq.rows() != c2) throw InvalidArgument("wq must be C2 x D");
  if (cfg.wk.rows() != c1 || cfg.wk.cols() != d) throw InvalidArgument("wk must be C1 x D");
  if (cfg.wv.rows() != c1 || cfg.wv.cols() != c2) throw InvalidArgument("wv must be C1 x C2");
}

// Row-wise softmax with the usual max-shift for stability.
Eigen::MatrixXd softmax_rows(Eigen::MatrixXd scores) {
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const double m = scores.row(i).maxCoeff();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < scores.cols(); ++j) {
      scores(i, j) = std::exp(scores(i, j) - m);
      sum += scores(i, j);
    }
    scores.row(i) /= sum;
  }
  return scores;
}

}  // namespace

Eigen::MatrixXd attention_matrix(const PointFeatureSet& mono, const PointFeatureSet& depth,
                                 const FusionConfig& cfg) {
  check_counts(mono, depth);
  check_attn_shapes(cfg, mono.channels(), depth.channels());
  const Eigen::MatrixXd q = depth.values * cfg.wq;
  const Eigen::MatrixXd k = mono.values * cfg.wk;
  return softmax_rows(q * k.transpose() / std::sqrt(static_cast<double>(cfg.wq.cols())));
}

PointFeatureSet fuse(const PointFeatureSet& mono, const PointFeatureSet& depth,
                     const FusionConfig& cfg) {
  check_counts(mono, depth);
  const Eigen::Index n = mono.count();
  const Eigen::Index c1 = mono.channels();
  const Eigen::Index c2 = depth.channels();

  PointFeatureSet out;
  switch (cfg.strategy) {
    case FusionStrategy::kConcat: {
      out.values.resize(n, c1 + c2);
      out.values.leftCols(c1) = mono.values;
      out.values.rightCols(c2) = depth.values;
      break;
    }
    case FusionStrategy::kMlpSkip: {
      check_mlp_shapes(cfg, c1, c2);
      Eigen::MatrixXd cat(n, c1 + c2);
      cat.leftCols(c1) = mono.values;
      cat.rightCols(c2) = depth.values;
      Eigen::MatrixXd hidden =
          ((cat * cfg.w1).rowwise() + cfg.b1.transpose()).cwiseMax(0.0);
      out.values = depth.values + ((hidden * cfg.w2).rowwise() + cfg.b2.transpose());
      break;
    }
    case FusionStrategy::kAttnSkip: {
      const Eigen::MatrixXd attn = attention_matrix(mono, depth, cfg);
      out.values = depth.values + attn * (mono.values * cfg.wv);
      break;
    }
  }
  return out;
}

FusionConfig load_fusion_config(const std::string& path, FusionStrategy strategy) {
  const auto tensors = read_tensor_file(path);
  auto matrix = [&](const std::string& name) {
    const NamedTensor& t = find_tensor(tensors, name);
    if (t.shape.size() != 2) throw InvalidArgument("tensor " + name + " must be 2-D");
    Eigen::MatrixXd m(t.shape[0], t.shape[1]);
    for (std::uint32_t r = 0; r < t.shape[0]; ++r)
      for (std::uint32_t c = 0; c < t.shape[1]; ++c)
        m(r, c) = static_cast<double>(t.data[static_cast<size_t>(r) * t.shape[1] + c]);
    return m;
  };
  auto vector = [&](const std::string& name) {
    const NamedTensor& t = find_tensor(tensors, name);
    if (t.shape.size() != 1) throw InvalidArgument("tensor " + name + " must be 1-D");
    Eigen::VectorXd v(t.shape[0]);
    for (std::uint32_t i = 0; i < t.shape[0]; ++i) v(i) = static_cast<double>(t.data[i]);
    return v;
  };

  FusionConfig cfg;
  cfg.strategy = strategy;
  switch (strategy) {
    case FusionStrategy::kConcat:
      break;
    case FusionStrategy::kMlpSkip:
      cfg.w1 = matrix("w1");
      cfg.b1 = vector("b1");
      cfg.w2 = matrix("w2");
      cfg.b2 = vector("b2");
      break;
    case FusionStrategy::kAttnSkip:
      cfg.wq = matrix("wq");
      cfg.wk = matrix("wk");
      cfg.wv = matrix("wv");
      break;
  }
  return cfg;
}

}  // namespace pose9d
