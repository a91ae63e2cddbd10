#pragma once

#include <Eigen/Core>

#include "pose9d/mpl.hpp"
#include "pose9d/types.hpp"

namespace pose9d {

// A cuboid instantiated from a 9-DoF pose: extents pose.size, rotated by
// pose.rotation, centered at pose.translation.
struct OrientedBox3D {
  Pose9DoF pose;

  double volume() const { return pose.size.prod(); }
  Eigen::Matrix<double, 8, 3> corners() const;
};

// Exact intersection-over-union of two oriented boxes. The intersection
// volume comes from clipping box a's polytope against b's six face planes
// (convex polygon clipping per face, cap reconstruction on each plane) and
// integrating via the divergence theorem. Face-in-plane contact counts as
// zero volume (1e-12 m plane-side epsilon).
double box_iou_3d(const OrientedBox3D& a, const OrientedBox3D& b);

// Maximum of box_iou_3d over `steps` rotations of the relative orientation
// about b's (ground-truth) symmetry axis, composed into b's frame. For a
// discrete symmetry the order-fold cyclic group is used instead of `steps`;
// kind none is box_iou_3d itself.
double symmetric_box_iou(const OrientedBox3D& a, const OrientedBox3D& b,
                         const SymmetryClass& symmetry, int steps);

}  // namespace pose9d
