#pragma once

#include <cstdint>

#include "camvid/image.hpp"

namespace camvid::testing {

// Two-tone checkerboard with `cell`-pixel squares, translated by (dx, dy)
// pixels with wrap-around: pixel (y, x) shows the pattern at (y - dy, x - dx).
inline Image checkerboard(int size, int cell, int dx, int dy) {
  Image img(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const int sx = ((x - dx) % size + size) % size;
      const int sy = ((y - dy) % size + size) % size;
      const std::uint8_t v = ((sx / cell + sy / cell) % 2) ? 204 : 51;
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = v;
    }
  }
  return img;
}

// Clip whose frame i is the checkerboard moved by i * (dx, dy).
inline Frames shifting_checkerboard(int frames, int size, int cell, int dx,
                                    int dy) {
  Frames out;
  for (int i = 0; i < frames; ++i) {
    out.push_back(checkerboard(size, cell, i * dx, i * dy));
  }
  return out;
}

}  // namespace camvid::testing
