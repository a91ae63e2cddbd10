#pragma once

#include <string>

#include "pose9d/types.hpp"

namespace pose9d {

// Depth files are 16-bit grayscale PNG holding millimeters (0 = invalid);
// masks are 8-bit grayscale PNG where any nonzero pixel is object.

DepthImage load_depth_png(const std::string& path);
void save_depth_png(const DepthImage& depth, const std::string& path);

BinaryMask load_mask_png(const std::string& path);
void save_mask_png(const BinaryMask& mask, const std::string& path);

}  // namespace pose9d
