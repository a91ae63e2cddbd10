#include "pose9d/pnp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "pose9d/geometry.hpp"

namespace pose9d {

namespace {

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& w) {
  const double theta = w.norm();
  if (theta < 1e-12) return Eigen::Matrix3d::Identity() + skew(w);
  return axis_angle_rotation(w / theta, theta);
}

// Sum of squared pixel residuals; infinity when any corner falls behind the
// camera so the line search rejects such steps.
double reprojection_cost(const Eigen::Matrix3d& r, const Eigen::Vector3d& t,
                         const Eigen::Matrix<double, 8, 3>& model,
                         const Eigen::Matrix<double, 8, 2>& kps, const CameraIntrinsics& K) {
  double cost = 0.0;
  for (int i = 0; i < 8; ++i) {
    const Eigen::Vector3d p = r * model.row(i).transpose() + t;
    if (p.z() <= 1e-9) return std::numeric_limits<double>::infinity();
    const double u = K.fx * p.x() / p.z() + K.cx;
    const double v = K.fy * p.y() / p.z() + K.cy;
    cost += (u - kps(i, 0)) * (u - kps(i, 0)) + (v - kps(i, 1)) * (v - kps(i, 1));
  }
  return cost;
}

// DLT over the 8 normalized-image correspondences. Returns [R|t] up to the
// projective sign, resolved through the signed cube root of det(A).
void dlt_init(const Eigen::Matrix<double, 8, 3>& model, const Eigen::Matrix<double, 8, 2>& kps,
              const CameraIntrinsics& K, Eigen::Matrix3d* r_out, Eigen::Vector3d* t_out) {
  Eigen::Matrix<double, 16, 12> a = Eigen::Matrix<double, 16, 12>::Zero();
  for (int i = 0; i < 8; ++i) {
    const double xn = (kps(i, 0) - K.cx) / K.fx;
    const double yn = (kps(i, 1) - K.cy) / K.fy;
    const Eigen::RowVector4d xh(model(i, 0), model(i, 1), model(i, 2), 1.0);
    a.block<1, 4>(2 * i, 0) = xh;
    a.block<1, 4>(2 * i, 8) = -xn * xh;
    a.block<1, 4>(2 * i + 1, 4) = xh;
    a.block<1, 4>(2 * i + 1, 8) = -yn * xh;
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 16, 12>> svd(a, Eigen::ComputeFullV);
  const Eigen::Matrix<double, 12, 1> p = svd.matrixV().col(11);

  Eigen::Matrix3d lin;
  lin << p(0), p(1), p(2), p(4), p(5), p(6), p(8), p(9), p(10);
  const Eigen::Vector3d b(p(3), p(7), p(11));

  const double det = lin.determinant();
  if (std::abs(det) < 1e-15) throw DegenerateConfigError("DLT produced a singular linear map");
  const double scale = std::cbrt(det);
  *r_out = orthonormalize(lin / scale);
  *t_out = b / scale;
}

}  // namespace

RelativeDims RelativeDims::normalized(const Eigen::Vector3d& raw) {
  if (!(raw.array() > 0.0).all()) throw InvalidArgument("dimensions must be positive");
  RelativeDims d;
  d.dims = raw / raw.maxCoeff();
  return d;
}

PnPSolution pnp_recover(const CuboidKeypoints2D& keypoints, const RelativeDims& dims,
                        const CameraIntrinsics& K, const PnPSettings& settings) {
  keypoints.validate();
  dims.validate();
  K.validate();

  // Collinear keypoints cannot constrain a pose: check the spread of the
  // centered 2D points.
  {
    Eigen::Matrix<double, 8, 2> centered =
        keypoints.points.rowwise() - keypoints.points.colwise().mean();
    Eigen::JacobiSVD<Eigen::Matrix<double, 8, 2>> svd(centered);
    if (svd.singularValues()(1) <= 1e-9 * std::max(svd.singularValues()(0), 1e-12))
      throw DegenerateConfigError("keypoints are collinear");
  }

  const Eigen::Matrix<double, 8, 3> model = cuboid_corners(dims.dims);
  const Eigen::Matrix<double, 8, 2>& kps = keypoints.points;

  Eigen::Matrix3d r;
  Eigen::Vector3d t;
  dlt_init(model, kps, K, &r, &t);

  if (((r * model.transpose()).colwise() + t).row(2).mean() <= 0.0)
    throw BehindCameraError("recovered pose places the object behind the camera");

  PnPSolution sol;
  double cost = reprojection_cost(r, t, model, kps, K);
  if (!std::isfinite(cost)) throw BehindCameraError("initial pose projects corners behind the camera");
  sol.cost_history.push_back(cost);

  for (int iter = 0; iter < settings.max_iters; ++iter) {
    Eigen::Matrix<double, 16, 6> jac;
    Eigen::Matrix<double, 16, 1> res;
    for (int i = 0; i < 8; ++i) {
      const Eigen::Vector3d p = r * model.row(i).transpose() + t;
      const double iz = 1.0 / p.z();
      res(2 * i) = K.fx * p.x() * iz + K.cx - kps(i, 0);
      res(2 * i + 1) = K.fy * p.y() * iz + K.cy - kps(i, 1);
      Eigen::Matrix<double, 2, 3> dproj;
      dproj << K.fx * iz, 0, -K.fx * p.x() * iz * iz, 0, K.fy * iz, -K.fy * p.y() * iz * iz;
      jac.block<2, 3>(2 * i, 0) = -dproj * skew(r * model.row(i).transpose());
      jac.block<2, 3>(2 * i, 3) = dproj;
    }
    const Eigen::Matrix<double, 6, 6> h = jac.transpose() * jac;
    const Eigen::Matrix<double, 6, 1> g = jac.transpose() * res;
    Eigen::Matrix<double, 6, 1> delta = h.ldlt().solve(-g);
    if (!delta.allFinite()) break;

    // Step-halving line search keeps the cost sequence non-increasing.
    double alpha = 1.0;
    bool accepted = false;
    Eigen::Matrix3d r_next;
    Eigen::Vector3d t_next;
    double cost_next = cost;
    for (int h_iter = 0; h_iter < settings.max_halvings; ++h_iter) {
      r_next = exp_so3(alpha * delta.head<3>()) * r;
      t_next = t + alpha * delta.tail<3>();
      cost_next = reprojection_cost(r_next, t_next, model, kps, K);
      if (cost_next < cost) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;

    r = r_next;
    t = t_next;
    sol.iterations = iter + 1;
    sol.cost_history.push_back(cost_next);
    const double decrease = (cost - cost_next) / std::max(cost, 1e-300);
    cost = cost_next;
    if (decrease < settings.tol) break;
  }

  sol.rotation = orthonormalize(r);
  sol.translation_dir = t;
  sol.rmse = std::sqrt(cost / 8.0);

  if (((sol.rotation * model.transpose()).colwise() + t).row(2).minCoeff() <= 1e-9)
    throw BehindCameraError("refined pose places corners behind the camera");
  return sol;
}

double reprojection_rmse(const PnPSolution& solution, const CuboidKeypoints2D& keypoints,
                         const RelativeDims& dims, const CameraIntrinsics& K) {
  const Eigen::Matrix<double, 8, 3> model = cuboid_corners(dims.dims);
  double cost = 0.0;
  for (int i = 0; i < 8; ++i) {
    const Eigen::Vector2d uv = project_point(K, solution.rotation, solution.translation_dir,
                                             model.row(i).transpose());
    cost += (uv - keypoints.points.row(i).transpose()).squaredNorm();
  }
  return std::sqrt(cost / 8.0);
}

}  // namespace pose9d
