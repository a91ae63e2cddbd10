#include "pose9d/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include "pose9d/errors.hpp"

namespace pose9d {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriter() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

void read_gray_png(const std::string& path, int expected_bit_depth, int* width, int* height,
                   std::vector<std::uint16_t>* out16, std::vector<std::uint8_t>* out8) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open PNG file: " + path);

  png_byte header[8];
  if (std::fread(header, 1, 8, file.get()) != 8 || png_sig_cmp(header, 0, 8))
    throw IoError("not a PNG file: " + path);

  PngReader r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!r.png) throw IoError("png_create_read_struct failed");
  r.info = png_create_info_struct(r.png);
  if (!r.info) throw IoError("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(r.png))) throw IoError("libpng failed reading: " + path);

  png_init_io(r.png, file.get());
  png_set_sig_bytes(r.png, 8);
  png_read_info(r.png, r.info);

  const int bit_depth = png_get_bit_depth(r.png, r.info);
  const int color_type = png_get_color_type(r.png, r.info);
  if (color_type != PNG_COLOR_TYPE_GRAY)
    throw IoError("expected a grayscale PNG: " + path);
  if (bit_depth != expected_bit_depth)
    throw IoError("expected " + std::to_string(expected_bit_depth) + "-bit PNG, got " +
                  std::to_string(bit_depth) + "-bit: " + path);

  *width = static_cast<int>(png_get_image_width(r.png, r.info));
  *height = static_cast<int>(png_get_image_height(r.png, r.info));

  if (bit_depth == 16) png_set_swap(r.png);  // PNG is big-endian on disk
  png_read_update_info(r.png, r.info);

  const size_t rowbytes = png_get_rowbytes(r.png, r.info);
  std::vector<png_byte> buffer(rowbytes * static_cast<size_t>(*height));
  std::vector<png_bytep> rows(static_cast<size_t>(*height));
  for (int y = 0; y < *height; ++y) rows[static_cast<size_t>(y)] = buffer.data() + rowbytes * static_cast<size_t>(y);
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);

  const size_t count = static_cast<size_t>(*width) * static_cast<size_t>(*height);
  if (out16) {
    out16->resize(count);
    std::memcpy(out16->data(), buffer.data(), count * 2);
  }
  if (out8) {
    out8->resize(count);
    std::memcpy(out8->data(), buffer.data(), count);
  }
}

void write_gray_png(const std::string& path, int width, int height, int bit_depth,
                    const void* data) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot open PNG file for writing: " + path);

  PngWriter w;
  w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!w.png) throw IoError("png_create_write_struct failed");
  w.info = png_create_info_struct(w.png);
  if (!w.info) throw IoError("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(w.png))) throw IoError("libpng failed writing: " + path);

  png_init_io(w.png, file.get());
  png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);
  if (bit_depth == 16) png_set_swap(w.png);

  const size_t rowbytes = static_cast<size_t>(width) * (bit_depth == 16 ? 2 : 1);
  std::vector<png_bytep> rows(static_cast<size_t>(height));
  const auto* base = static_cast<const png_byte*>(data);
  for (int y = 0; y < height; ++y)
    rows[static_cast<size_t>(y)] = const_cast<png_bytep>(base + rowbytes * static_cast<size_t>(y));
  png_write_image(w.png, rows.data());
  png_write_end(w.png, nullptr);
}

}  // namespace

DepthImage load_depth_png(const std::string& path) {
  DepthImage depth;
  read_gray_png(path, 16, &depth.width, &depth.height, &depth.values, nullptr);
  return depth;
}

void save_depth_png(const DepthImage& depth, const std::string& path) {
  if (depth.width < 1 || depth.height < 1) throw InvalidArgument("empty depth image");
  write_gray_png(path, depth.width, depth.height, 16, depth.values.data());
}

BinaryMask load_mask_png(const std::string& path) {
  BinaryMask mask;
  std::vector<std::uint8_t> raw;
  read_gray_png(path, 8, &mask.width, &mask.height, nullptr, &raw);
  mask.values.resize(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) mask.values[i] = raw[i] != 0 ? 1 : 0;
  return mask;
}

void save_mask_png(const BinaryMask& mask, const std::string& path) {
  if (mask.width < 1 || mask.height < 1) throw InvalidArgument("empty mask");
  std::vector<std::uint8_t> raw(mask.values.size());
  for (size_t i = 0; i < mask.values.size(); ++i) raw[i] = mask.values[i] ? 255 : 0;
  write_gray_png(path, mask.width, mask.height, 8, raw.data());
}

}  // namespace pose9d
