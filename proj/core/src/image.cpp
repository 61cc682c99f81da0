#include "camvid/image.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "camvid/binary_io.hpp"

namespace camvid {

GrayImage to_gray(const Image& img) {
  GrayImage g(img.height, img.width);
  for (std::size_t i = 0; i < g.data.size(); ++i) {
    const int sum = img.rgb[3 * i] + img.rgb[3 * i + 1] + img.rgb[3 * i + 2];
    g.data[i] = sum / (3.0 * 255.0);
  }
  return g;
}

void write_frames(const std::filesystem::path& path, const Frames& frames) {
  if (frames.empty()) throw std::invalid_argument("write_frames: no frames");
  const int h = frames.front().height;
  const int w = frames.front().width;
  ByteWriter out;
  out.magic("CVG1");
  out.u32(static_cast<std::uint32_t>(frames.size()));
  out.u32(static_cast<std::uint32_t>(h));
  out.u32(static_cast<std::uint32_t>(w));
  for (const Image& f : frames) {
    if (f.height != h || f.width != w) {
      throw std::invalid_argument("write_frames: frames differ in shape");
    }
    out.bytes(f.rgb);
  }
  write_file_atomic(path, out.buffer());
}

Frames read_frames(const std::filesystem::path& path) {
  ByteReader in(read_file_bytes(path), path.string());
  in.expect_magic("CVG1");
  const std::uint32_t n = in.u32();
  const std::uint32_t h = in.u32();
  const std::uint32_t w = in.u32();
  if (n == 0 || h == 0 || w == 0) {
    throw IoError(path.string() + ": empty frame header");
  }
  Frames frames;
  frames.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    Image img(static_cast<int>(h), static_cast<int>(w));
    auto px = in.bytes(img.rgb.size());
    std::copy(px.begin(), px.end(), img.rgb.begin());
    frames.push_back(std::move(img));
  }
  if (!in.at_end()) throw IoError(path.string() + ": trailing bytes");
  return frames;
}

double mean_squared_error(const Frames& a, const Frames& b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("mean_squared_error: frame count mismatch");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t f = 0; f < a.size(); ++f) {
    if (a[f].rgb.size() != b[f].rgb.size()) {
      throw std::invalid_argument("mean_squared_error: shape mismatch");
    }
    for (std::size_t i = 0; i < a[f].rgb.size(); ++i) {
      const double d = double(a[f].rgb[i]) - double(b[f].rgb[i]);
      sum += d * d;
    }
    count += a[f].rgb.size();
  }
  return sum / double(count);
}

double psnr(const Frames& a, const Frames& b) {
  const double mse = mean_squared_error(a, b);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace camvid
