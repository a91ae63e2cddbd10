#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pose9d {

// One entry of the flat binary tensor container used for weight fixtures.
// Layout per entry, all little-endian:
//   u32 name_length, name bytes, u32 ndim, u32 dims[ndim], f32 data[prod(dims)]
struct NamedTensor {
  std::string name;
  std::vector<std::uint32_t> shape;
  std::vector<float> data;  // row-major
};

std::vector<NamedTensor> read_tensor_file(const std::string& path);
void write_tensor_file(const std::string& path, const std::vector<NamedTensor>& tensors);

const NamedTensor& find_tensor(const std::vector<NamedTensor>& tensors, const std::string& name);

}  // namespace pose9d
