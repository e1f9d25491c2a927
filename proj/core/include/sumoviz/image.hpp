#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace sumoviz {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend constexpr bool operator==(Rgb, Rgb) = default;
};

/// Packed 8-bit RGB raster, row 0 at the top.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(int w, int h, Rgb fill = {});

  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(x)) * 3;
  }
  Rgb at(int x, int y) const {
    const std::size_t o = offset(x, y);
    return {pixels[o], pixels[o + 1], pixels[o + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t o = offset(x, y);
    pixels[o] = c.r;
    pixels[o + 1] = c.g;
    pixels[o + 2] = c.b;
  }
};

using Texture = Image;

/// Lossless 8-bit RGB PNG. Output bytes depend only on the pixels.
void write_png(const std::string& path, const Image& image);
std::vector<std::uint8_t> encode_png(const Image& image);
Image read_png(const std::string& path);

}  // namespace sumoviz
