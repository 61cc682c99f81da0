#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace camvid {

// 8-bit RGB raster, row-major, interleaved channels.
struct Image {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> rgb;

  Image() = default;
  Image(int h, int w) : height(h), width(w), rgb(std::size_t(h) * w * 3, 0) {}

  std::uint8_t& at(int y, int x, int c) {
    return rgb[(std::size_t(y) * width + x) * 3 + c];
  }
  std::uint8_t at(int y, int x, int c) const {
    return rgb[(std::size_t(y) * width + x) * 3 + c];
  }

  bool operator==(const Image&) const = default;
};

using Frames = std::vector<Image>;

// Single-channel float image in [0, 1], used by the flow estimator.
struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<double> data;

  GrayImage() = default;
  GrayImage(int h, int w, double fill = 0.0)
      : height(h), width(w), data(std::size_t(h) * w, fill) {}

  double& at(int y, int x) { return data[std::size_t(y) * width + x]; }
  double at(int y, int x) const { return data[std::size_t(y) * width + x]; }
};

// (r + g + b) / 3 scaled to [0, 1].
GrayImage to_gray(const Image& img);

// frames.bin: "CVG1", u32 n, u32 H, u32 W, then n*H*W*3 bytes of RGB.
// All frames must share one shape.
void write_frames(const std::filesystem::path& path, const Frames& frames);
Frames read_frames(const std::filesystem::path& path);

// Mean squared error in 8-bit units and the matching PSNR (dB, peak 255).
double mean_squared_error(const Frames& a, const Frames& b);
double psnr(const Frames& a, const Frames& b);

}  // namespace camvid
