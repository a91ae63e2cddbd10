// Hot loop of the Monte-Carlo volume oracle. Kept free of Eigen (and of any
// inline code shared with other translation units) so this one file can be
// compiled with aggressive target flags without ODR hazards.

#pragma once

#include <cstdint>

namespace pose9d::testing {

struct McBoxFrame {
  float rot_t[9];  // rows of R^T
  float center[3];
  float half[3];
};

// Counts uniform samples from [lo, lo+ext) falling inside both boxes.
std::uint64_t mc_count_inside_pair(const McBoxFrame& a, const McBoxFrame& b, const float lo[3],
                                   const float ext[3], std::uint64_t samples, std::uint64_t seed);

}  // namespace pose9d::testing
