#include "pose9d/tensor_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "pose9d/errors.hpp"

namespace pose9d {

namespace {

static_assert(sizeof(float) == 4);

std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw IoError("truncated tensor file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                              static_cast<unsigned char>((v >> 8) & 0xff),
                              static_cast<unsigned char>((v >> 16) & 0xff),
                              static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

float read_f32(std::istream& in) {
  const std::uint32_t bits = read_u32(in);
  float f;
  std::memcpy(&f, &bits, 4);
  return f;
}

void write_f32(std::ostream& out, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  write_u32(out, bits);
}

}  // namespace

std::vector<NamedTensor> read_tensor_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open tensor file: " + path);
  std::vector<NamedTensor> tensors;
  while (in.peek() != std::char_traits<char>::eof()) {
    NamedTensor t;
    const std::uint32_t name_len = read_u32(in);
    if (name_len > 4096) throw IoError("implausible tensor name length in " + path);
    t.name.resize(name_len);
    if (!in.read(t.name.data(), name_len)) throw IoError("truncated tensor file: " + path);
    const std::uint32_t ndim = read_u32(in);
    if (ndim > 8) throw IoError("implausible tensor rank in " + path);
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < ndim; ++i) {
      t.shape.push_back(read_u32(in));
      count *= t.shape.back();
    }
    if (count > (1u << 28)) throw IoError("implausible tensor size in " + path);
    t.data.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) t.data[i] = read_f32(in);
    tensors.push_back(std::move(t));
  }
  return tensors;
}

void write_tensor_file(const std::string& path, const std::vector<NamedTensor>& tensors) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open tensor file for writing: " + path);
  for (const NamedTensor& t : tensors) {
    write_u32(out, static_cast<std::uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    write_u32(out, static_cast<std::uint32_t>(t.shape.size()));
    std::uint64_t count = 1;
    for (std::uint32_t d : t.shape) {
      write_u32(out, d);
      count *= d;
    }
    if (count != t.data.size()) throw InvalidArgument("tensor " + t.name + " shape/data mismatch");
    for (float f : t.data) write_f32(out, f);
  }
  if (!out) throw IoError("failed writing tensor file: " + path);
}

const NamedTensor& find_tensor(const std::vector<NamedTensor>& tensors, const std::string& name) {
  for (const NamedTensor& t : tensors)
    if (t.name == name) return t;
  throw InvalidArgument("tensor not found in container: " + name);
}

}  // namespace pose9d
