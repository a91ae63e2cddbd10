#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "pose9d/mesh.hpp"

namespace pose9d {

// Area-weighted uniform samples on the mesh surface (barycentric per face).
Eigen::Matrix<double, Eigen::Dynamic, 3> uniform_surface_samples(const TriangleMesh& mesh,
                                                                 int count, std::uint64_t seed);

// Target Poisson-disk radius for v samples on total area A:
// r_max = sqrt(A / (2*sqrt(3)*v)).
double poisson_rmax(double total_area, int v);

// Greedy sample elimination: repeatedly removes the candidate with the largest
// accumulated neighbor weight sum((1 - d/(2*r_max))^8, d < 2*r_max) until
// keep_count remain. Ties break toward the lower index. Survivors keep their
// candidate order. Pass elimination_order to record removals (for replay
// against a reference implementation).
Eigen::Matrix<double, Eigen::Dynamic, 3> eliminate_samples(
    const Eigen::Matrix<double, Eigen::Dynamic, 3>& candidates, int keep_count, double r_max,
    std::vector<int>* elimination_order = nullptr);

// Poisson-disk sampling by sample elimination: draws 4*v area-weighted
// candidates, then eliminates down to v. Deterministic in the seed.
SampledVertexSet poisson_disk_sample(const TriangleMesh& mesh, int v, std::uint64_t seed);

}  // namespace pose9d
