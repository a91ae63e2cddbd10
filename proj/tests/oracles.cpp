#include "oracles.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pose9d/geometry.hpp"
#include "pose9d/rng.hpp"

#include "mc_kernel.hpp"

namespace pose9d::testing {

namespace {

McBoxFrame to_frame(const OrientedBox3D& box) {
  McBoxFrame f;
  const Eigen::Matrix3d rt = box.pose.rotation.transpose();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) f.rot_t[3 * i + j] = static_cast<float>(rt(i, j));
  for (int i = 0; i < 3; ++i) {
    f.center[i] = static_cast<float>(box.pose.translation(i));
    f.half[i] = static_cast<float>(0.5 * box.pose.size(i));
  }
  return f;
}

}  // namespace

McVolumeEstimate mc_intersection_volume(const OrientedBox3D& a, const OrientedBox3D& b,
                                        std::uint64_t samples, std::uint64_t seed) {
  // sampling domain: padded AABB of both boxes
  Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector3d hi = -lo;
  for (const OrientedBox3D* box : {&a, &b}) {
    const auto corners = box->corners();
    for (int i = 0; i < 8; ++i) {
      lo = lo.cwiseMin(corners.row(i).transpose());
      hi = hi.cwiseMax(corners.row(i).transpose());
    }
  }
  lo.array() -= 1e-6;
  hi.array() += 1e-6;

  float flo[3], fext[3];
  double bbox_volume = 1.0;
  for (int i = 0; i < 3; ++i) {
    flo[i] = static_cast<float>(lo(i));
    fext[i] = static_cast<float>(hi(i) - lo(i));
    bbox_volume *= static_cast<double>(fext[i]);
  }

  const McBoxFrame fa = to_frame(a), fb = to_frame(b);
  const std::uint64_t inside = mc_count_inside_pair(fa, fb, flo, fext, samples, seed);

  McVolumeEstimate est;
  est.samples = samples;
  est.hits = inside;
  est.bbox_volume = bbox_volume;
  const double p = static_cast<double>(inside) / static_cast<double>(samples);
  est.volume = p * bbox_volume;
  est.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(samples)) * bbox_volume;
  return est;
}

namespace {

Eigen::Matrix<double, 16, 1> reprojection_residuals(const Eigen::Matrix3d& r,
                                                    const Eigen::Vector3d& t,
                                                    const Eigen::Matrix<double, 8, 3>& model,
                                                    const Eigen::Matrix<double, 8, 2>& kps,
                                                    const CameraIntrinsics& K, bool* valid) {
  Eigen::Matrix<double, 16, 1> res;
  *valid = true;
  for (int i = 0; i < 8; ++i) {
    const Eigen::Vector3d p = r * model.row(i).transpose() + t;
    if (p.z() <= 1e-9) {
      *valid = false;
      res.setConstant(1e9);
      return res;
    }
    res(2 * i) = K.fx * p.x() / p.z() + K.cx - kps(i, 0);
    res(2 * i + 1) = K.fy * p.y() / p.z() + K.cy - kps(i, 1);
  }
  return res;
}

// Translation minimizing the algebraic reprojection equations for a fixed
// rotation: each correspondence gives two equations linear in t.
Eigen::Vector3d linear_translation(const Eigen::Matrix3d& r,
                                   const Eigen::Matrix<double, 8, 3>& model,
                                   const Eigen::Matrix<double, 8, 2>& kps,
                                   const CameraIntrinsics& K) {
  Eigen::Matrix<double, 16, 3> a;
  Eigen::Matrix<double, 16, 1> b;
  for (int i = 0; i < 8; ++i) {
    const Eigen::Vector3d rx = r * model.row(i).transpose();
    const double xn = (kps(i, 0) - K.cx) / K.fx;
    const double yn = (kps(i, 1) - K.cy) / K.fy;
    a.row(2 * i) << 1.0, 0.0, -xn;
    b(2 * i) = xn * rx.z() - rx.x();
    a.row(2 * i + 1) << 0.0, 1.0, -yn;
    b(2 * i + 1) = yn * rx.z() - rx.y();
  }
  return a.colPivHouseholderQr().solve(b);
}

}  // namespace

NlsOracleResult multistart_nls_pnp(const CuboidKeypoints2D& keypoints, const RelativeDims& dims,
                                   const CameraIntrinsics& K, int starts, std::uint64_t seed) {
  const Eigen::Matrix<double, 8, 3> model = cuboid_corners(dims.dims);
  const Eigen::Matrix<double, 8, 2>& kps = keypoints.points;
  Rng rng(seed);

  NlsOracleResult best;
  best.cost = std::numeric_limits<double>::infinity();

  for (int s = 0; s < starts; ++s) {
    Eigen::Matrix3d r0 = rng.rotation();
    Eigen::Vector3d t0 = linear_translation(r0, model, kps, K);
    if (t0.z() <= 0.1) t0 = Eigen::Vector3d(0, 0, rng.uniform(1.0, 8.0));

    // LM over 7 parameters: unnormalized quaternion (w,x,y,z) + translation.
    Eigen::Matrix<double, 7, 1> params;
    {
      const Eigen::Quaterniond q(r0);
      params << q.w(), q.x(), q.y(), q.z(), t0.x(), t0.y(), t0.z();
    }
    auto unpack = [](const Eigen::Matrix<double, 7, 1>& p, Eigen::Matrix3d* r,
                     Eigen::Vector3d* t) {
      Eigen::Quaterniond q(p(0), p(1), p(2), p(3));
      if (q.norm() < 1e-12) return false;
      q.normalize();
      *r = q.toRotationMatrix();
      *t = p.tail<3>();
      return true;
    };

    Eigen::Matrix3d r;
    Eigen::Vector3d t;
    if (!unpack(params, &r, &t)) continue;
    bool valid = false;
    Eigen::Matrix<double, 16, 1> res = reprojection_residuals(r, t, model, kps, K, &valid);
    double cost = res.squaredNorm();
    double lambda = 1e-3;

    for (int iter = 0; iter < 200; ++iter) {
      // forward-difference Jacobian
      Eigen::Matrix<double, 16, 7> jac;
      const double step = 1e-7;
      for (int k = 0; k < 7; ++k) {
        Eigen::Matrix<double, 7, 1> pk = params;
        pk(k) += step;
        Eigen::Matrix3d rk;
        Eigen::Vector3d tk;
        if (!unpack(pk, &rk, &tk)) {
          jac.col(k).setZero();
          continue;
        }
        bool vk = false;
        jac.col(k) = (reprojection_residuals(rk, tk, model, kps, K, &vk) - res) / step;
      }

      const Eigen::Matrix<double, 7, 7> h = jac.transpose() * jac;
      const Eigen::Matrix<double, 7, 1> g = jac.transpose() * res;
      bool improved = false;
      for (int attempt = 0; attempt < 12; ++attempt) {
        Eigen::Matrix<double, 7, 7> damped = h;
        damped.diagonal().array() += lambda;
        const Eigen::Matrix<double, 7, 1> delta = damped.ldlt().solve(-g);
        Eigen::Matrix<double, 7, 1> trial = params + delta;
        Eigen::Matrix3d rt;
        Eigen::Vector3d tt;
        if (unpack(trial, &rt, &tt)) {
          bool vt = false;
          const Eigen::Matrix<double, 16, 1> rest =
              reprojection_residuals(rt, tt, model, kps, K, &vt);
          const double cost_t = rest.squaredNorm();
          if (vt && cost_t < cost) {
            params = trial;
            res = rest;
            cost = cost_t;
            lambda = std::max(lambda * 0.3, 1e-12);
            improved = true;
            break;
          }
        }
        lambda *= 10.0;
      }
      if (!improved) break;
      if (cost < 1e-24) break;
    }

    if (cost < best.cost && unpack(params, &r, &t) && t.z() > 0.0) {
      best.cost = cost;
      best.rotation = r;
      best.translation = t;
    }
  }
  return best;
}

double bilinear_reference(const FeatureMap& fmap, double u, double v, int channel) {
  u = std::clamp(u, 0.0, static_cast<double>(fmap.width - 1));
  v = std::clamp(v, 0.0, static_cast<double>(fmap.height - 1));
  const int x0 = static_cast<int>(std::floor(u));
  const int y0 = static_cast<int>(std::floor(v));
  const int x1 = std::min(x0 + 1, fmap.width - 1);
  const int y1 = std::min(y0 + 1, fmap.height - 1);
  const double fu = u - x0, fv = v - y0;
  const double w00 = (1.0 - fu) * (1.0 - fv);
  const double w10 = fu * (1.0 - fv);
  const double w01 = (1.0 - fu) * fv;
  const double w11 = fu * fv;
  return w00 * fmap.at(y0, x0, channel) + w10 * fmap.at(y0, x1, channel) +
         w01 * fmap.at(y1, x0, channel) + w11 * fmap.at(y1, x1, channel);
}

double point_triangle_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                               const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  // Ericson, Real-Time Collision Detection, closest point on triangle
  const Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return (p - a).norm();

  const Eigen::Vector3d bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return (p - b).norm();

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return (p - (a + v * ab)).norm();
  }

  const Eigen::Vector3d cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return (p - c).norm();

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return (p - (a + w * ac)).norm();
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return (p - (b + w * (c - b))).norm();
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return (p - (a + ab * v + ac * w)).norm();
}

double point_mesh_distance(const Eigen::Vector3d& p, const TriangleMesh& mesh) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : mesh.faces) {
    best = std::min(best, point_triangle_distance(p, mesh.vertices[static_cast<size_t>(f[0])],
                                                  mesh.vertices[static_cast<size_t>(f[1])],
                                                  mesh.vertices[static_cast<size_t>(f[2])]));
  }
  return best;
}

double point_box_surface_distance(const Eigen::Vector3d& p, const OrientedBox3D& box) {
  const Eigen::Vector3d q =
      (box.pose.rotation.transpose() * (p - box.pose.translation)).cwiseAbs();
  const Eigen::Vector3d h = 0.5 * box.pose.size;
  const Eigen::Vector3d excess = (q - h).cwiseMax(0.0);
  const double outside = excess.norm();
  if (outside > 0.0) return outside;
  return (h - q).minCoeff();
}

}  // namespace pose9d::testing
