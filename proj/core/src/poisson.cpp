#include "pose9d/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "pose9d/rng.hpp"

namespace pose9d {

Eigen::Matrix<double, Eigen::Dynamic, 3> uniform_surface_samples(const TriangleMesh& mesh,
                                                                 int count, std::uint64_t seed) {
  mesh.validate();
  if (count < 1) throw InvalidArgument("sample count must be >= 1");
  std::vector<double> cumulative(mesh.faces.size());
  double total = 0.0;
  for (size_t i = 0; i < mesh.faces.size(); ++i) {
    total += mesh.face_area(i);
    cumulative[i] = total;
  }
  if (total <= 0.0) throw InvalidMeshError("mesh has no non-degenerate face");

  Rng rng(seed);
  Eigen::Matrix<double, Eigen::Dynamic, 3> out(count, 3);
  for (int i = 0; i < count; ++i) {
    const double target = rng.uniform() * total;
    const size_t face_idx = static_cast<size_t>(
        std::lower_bound(cumulative.begin(), cumulative.end(), target) - cumulative.begin());
    const auto& f = mesh.faces[std::min(face_idx, mesh.faces.size() - 1)];
    const Eigen::Vector3d& a = mesh.vertices[static_cast<size_t>(f[0])];
    const Eigen::Vector3d& b = mesh.vertices[static_cast<size_t>(f[1])];
    const Eigen::Vector3d& c = mesh.vertices[static_cast<size_t>(f[2])];
    // sqrt trick gives uniform density over the triangle
    const double r1 = std::sqrt(rng.uniform());
    const double r2 = rng.uniform();
    out.row(i) = ((1.0 - r1) * a + r1 * (1.0 - r2) * b + r1 * r2 * c).transpose();
  }
  return out;
}

double poisson_rmax(double total_area, int v) {
  if (!(total_area > 0.0) || v < 1) throw InvalidArgument("need positive area and v >= 1");
  return std::sqrt(total_area / (2.0 * std::sqrt(3.0) * v));
}

namespace {

// Indexed max-heap over (weight, candidate index); larger weight wins and the
// lower index wins ties so elimination order is deterministic.
class WeightHeap {
 public:
  explicit WeightHeap(const std::vector<double>& weights) : weights_(weights) {
    heap_.resize(weights.size());
    pos_.resize(weights.size());
    for (size_t i = 0; i < weights.size(); ++i) {
      heap_[i] = static_cast<int>(i);
      pos_[i] = static_cast<int>(i);
    }
    for (int i = static_cast<int>(weights.size()) / 2 - 1; i >= 0; --i) sift_down(i);
  }

  int top() const { return heap_[0]; }
  bool empty() const { return heap_.empty(); }

  void remove(int item) {
    const int slot = pos_[static_cast<size_t>(item)];
    const int last = heap_.back();
    heap_[static_cast<size_t>(slot)] = last;
    pos_[static_cast<size_t>(last)] = slot;
    heap_.pop_back();
    pos_[static_cast<size_t>(item)] = -1;
    if (slot < static_cast<int>(heap_.size())) {
      sift_down(slot);
      sift_up(slot);
    }
  }

  void update(int item) {
    const int slot = pos_[static_cast<size_t>(item)];
    sift_down(slot);
    sift_up(slot);
  }

 private:
  bool higher(int a, int b) const {
    if (weights_[static_cast<size_t>(a)] != weights_[static_cast<size_t>(b)])
      return weights_[static_cast<size_t>(a)] > weights_[static_cast<size_t>(b)];
    return a < b;
  }

  void sift_up(int slot) {
    while (slot > 0) {
      const int parent = (slot - 1) / 2;
      if (!higher(heap_[static_cast<size_t>(slot)], heap_[static_cast<size_t>(parent)])) break;
      swap_slots(slot, parent);
      slot = parent;
    }
  }

  void sift_down(int slot) {
    const int n = static_cast<int>(heap_.size());
    while (true) {
      int best = slot;
      const int l = 2 * slot + 1, r = 2 * slot + 2;
      if (l < n && higher(heap_[static_cast<size_t>(l)], heap_[static_cast<size_t>(best)])) best = l;
      if (r < n && higher(heap_[static_cast<size_t>(r)], heap_[static_cast<size_t>(best)])) best = r;
      if (best == slot) break;
      swap_slots(slot, best);
      slot = best;
    }
  }

  void swap_slots(int a, int b) {
    std::swap(heap_[static_cast<size_t>(a)], heap_[static_cast<size_t>(b)]);
    pos_[static_cast<size_t>(heap_[static_cast<size_t>(a)])] = a;
    pos_[static_cast<size_t>(heap_[static_cast<size_t>(b)])] = b;
  }

  const std::vector<double>& weights_;
  std::vector<int> heap_;
  std::vector<int> pos_;
};

}  // namespace

Eigen::Matrix<double, Eigen::Dynamic, 3> eliminate_samples(
    const Eigen::Matrix<double, Eigen::Dynamic, 3>& candidates, int keep_count, double r_max,
    std::vector<int>* elimination_order) {
  const int m = static_cast<int>(candidates.rows());
  if (keep_count < 1) throw InvalidArgument("keep_count must be >= 1");
  if (keep_count > m) throw InvalidArgument("keep_count exceeds candidate count");
  if (!(r_max > 0.0)) throw InvalidArgument("r_max must be positive");
  if (elimination_order) elimination_order->clear();
  if (keep_count == m) return candidates;

  const double radius = 2.0 * r_max;
  const double radius_sq = radius * radius;

  // Neighbor lists via a uniform grid with cell edge 2*r_max.
  const Eigen::Vector3d lo = candidates.colwise().minCoeff().transpose();
  auto cell_of = [&](const Eigen::Vector3d& p) {
    return std::tuple<long, long, long>{static_cast<long>(std::floor((p.x() - lo.x()) / radius)),
                                        static_cast<long>(std::floor((p.y() - lo.y()) / radius)),
                                        static_cast<long>(std::floor((p.z() - lo.z()) / radius))};
  };
  std::map<std::tuple<long, long, long>, std::vector<int>> grid;
  for (int i = 0; i < m; ++i) grid[cell_of(candidates.row(i).transpose())].push_back(i);

  auto pair_weight = [&](int i, int j) {
    const double d = std::sqrt(
        std::min((candidates.row(i) - candidates.row(j)).squaredNorm(), radius_sq));
    const double base = 1.0 - d / radius;
    // (1 - d/(2 r_max))^8
    const double p2 = base * base;
    const double p4 = p2 * p2;
    return p4 * p4;
  };

  std::vector<std::vector<int>> neighbors(static_cast<size_t>(m));
  std::vector<double> weights(static_cast<size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) {
    const auto [cx, cy, cz] = cell_of(candidates.row(i).transpose());
    for (long dz = -1; dz <= 1; ++dz)
      for (long dy = -1; dy <= 1; ++dy)
        for (long dx = -1; dx <= 1; ++dx) {
          const auto it = grid.find({cx + dx, cy + dy, cz + dz});
          if (it == grid.end()) continue;
          for (int j : it->second) {
            if (j == i) continue;
            if ((candidates.row(i) - candidates.row(j)).squaredNorm() < radius_sq) {
              neighbors[static_cast<size_t>(i)].push_back(j);
              weights[static_cast<size_t>(i)] += pair_weight(i, j);
            }
          }
        }
  }

  std::vector<char> alive(static_cast<size_t>(m), 1);
  WeightHeap heap(weights);
  int remaining = m;
  while (remaining > keep_count) {
    const int victim = heap.top();
    heap.remove(victim);
    alive[static_cast<size_t>(victim)] = 0;
    --remaining;
    if (elimination_order) elimination_order->push_back(victim);
    for (int j : neighbors[static_cast<size_t>(victim)]) {
      if (!alive[static_cast<size_t>(j)]) continue;
      weights[static_cast<size_t>(j)] -= pair_weight(j, victim);
      heap.update(j);
    }
  }

  Eigen::Matrix<double, Eigen::Dynamic, 3> out(keep_count, 3);
  int row = 0;
  for (int i = 0; i < m; ++i)
    if (alive[static_cast<size_t>(i)]) out.row(row++) = candidates.row(i);
  return out;
}

SampledVertexSet poisson_disk_sample(const TriangleMesh& mesh, int v, std::uint64_t seed) {
  if (v < 1) throw InvalidArgument("sample count must be >= 1");
  const double area = mesh.total_area();
  if (!(area > 0.0)) throw InvalidMeshError("mesh has no non-degenerate face");
  const auto candidates = uniform_surface_samples(mesh, 4 * v, seed);
  SampledVertexSet set;
  set.points = eliminate_samples(candidates, v, poisson_rmax(area, v));
  return set;
}

}  // namespace pose9d
