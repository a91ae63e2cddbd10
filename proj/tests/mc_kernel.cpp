#include "mc_kernel.hpp"

#include <algorithm>
#include <cmath>

namespace pose9d::testing {

namespace {

constexpr int kLanes = 4096;

// Per-lane xorshift128 in structure-of-arrays form so the step loop
// vectorizes; lanes are decorrelated by splitmix64 seeding.
struct LaneRng {
  alignas(64) std::uint32_t x[kLanes], y[kLanes], z[kLanes], w[kLanes];

  explicit LaneRng(std::uint64_t seed) {
    std::uint64_t s = seed;
    auto next = [&s]() {
      s += 0x9e3779b97f4a7c15ull;
      std::uint64_t v = (s ^ (s >> 30)) * 0xbf58476d1ce4e5b9ull;
      v = (v ^ (v >> 27)) * 0x94d049bb133111ebull;
      return v ^ (v >> 31);
    };
    for (int i = 0; i < kLanes; ++i) {
      x[i] = static_cast<std::uint32_t>(next());
      y[i] = static_cast<std::uint32_t>(next());
      z[i] = static_cast<std::uint32_t>(next());
      w[i] = static_cast<std::uint32_t>(next() | 1u);
    }
  }

  void fill(float* out, float lo, float ext) {
    constexpr float inv = 1.0f / 4294967296.0f;
    for (int i = 0; i < kLanes; ++i) {
      const std::uint32_t t = x[i] ^ (x[i] << 11);
      x[i] = y[i];
      y[i] = z[i];
      z[i] = w[i];
      w[i] = (w[i] ^ (w[i] >> 19)) ^ (t ^ (t >> 8));
      out[i] = lo + ext * (static_cast<float>(w[i]) * inv);
    }
  }
};

}  // namespace

std::uint64_t mc_count_inside_pair(const McBoxFrame& a, const McBoxFrame& b, const float lo[3],
                                   const float ext[3], std::uint64_t samples, std::uint64_t seed) {
  LaneRng rng(seed);
  alignas(64) static thread_local float px[kLanes], py[kLanes], pz[kLanes];
  alignas(64) static thread_local std::int32_t hit[kLanes];

  std::uint64_t inside = 0;
  for (std::uint64_t base = 0; base < samples; base += kLanes) {
    const int m = static_cast<int>(std::min<std::uint64_t>(samples - base, kLanes));
    rng.fill(px, lo[0], ext[0]);
    rng.fill(py, lo[1], ext[1]);
    rng.fill(pz, lo[2], ext[2]);
    for (int i = 0; i < kLanes; ++i) {
      const float dxa = px[i] - a.center[0], dya = py[i] - a.center[1], dza = pz[i] - a.center[2];
      const float ax = a.rot_t[0] * dxa + a.rot_t[1] * dya + a.rot_t[2] * dza;
      const float ay = a.rot_t[3] * dxa + a.rot_t[4] * dya + a.rot_t[5] * dza;
      const float az = a.rot_t[6] * dxa + a.rot_t[7] * dya + a.rot_t[8] * dza;
      const float dxb = px[i] - b.center[0], dyb = py[i] - b.center[1], dzb = pz[i] - b.center[2];
      const float bx = b.rot_t[0] * dxb + b.rot_t[1] * dyb + b.rot_t[2] * dzb;
      const float by = b.rot_t[3] * dxb + b.rot_t[4] * dyb + b.rot_t[5] * dzb;
      const float bz = b.rot_t[6] * dxb + b.rot_t[7] * dyb + b.rot_t[8] * dzb;
      const int ina = (std::fabs(ax) <= a.half[0]) & (std::fabs(ay) <= a.half[1]) &
                      (std::fabs(az) <= a.half[2]);
      const int inb = (std::fabs(bx) <= b.half[0]) & (std::fabs(by) <= b.half[1]) &
                      (std::fabs(bz) <= b.half[2]);
      hit[i] = ina & inb;
    }
    int count = 0;
    for (int i = 0; i < m; ++i) count += hit[i];
    inside += static_cast<std::uint64_t>(count);
  }
  return inside;
}

}  // namespace pose9d::testing
