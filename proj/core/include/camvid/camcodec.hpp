#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "camvid/geometry.hpp"

namespace camvid {

// Residual vector quantizer for camera signals. Each window of `window`
// consecutive signal values is one vector; vectors are z-normalised per
// component before quantisation, with the statistics kept in the codebook.
struct RvqCodebook {
  int levels = 0;
  int entries = 0;
  int dim = 0;  // == window
  int window = 0;
  std::vector<double> mean;     // dim
  std::vector<double> stddev;   // dim
  std::vector<double> vectors;  // levels x entries x dim, normalised space

  std::span<const double> level(int l) const {
    return std::span<const double>(vectors).subspan(
        std::size_t(l) * entries * dim, std::size_t(entries) * dim);
  }
  std::span<const double> entry(int l, int k) const {
    return level(l).subspan(std::size_t(k) * dim, dim);
  }
};

// positions x levels grid of indices in [0, entries), stored position-major:
// (t0,l0), (t0,l1), ..., (t1,l0), ...
struct CameraTokens {
  int positions = 0;
  int levels = 0;
  std::vector<int> tokens;

  int at(int t, int l) const { return tokens[std::size_t(t) * levels + l]; }
  bool operator==(const CameraTokens&) const = default;
};

struct RvqTrainOptions {
  int levels = 4;
  int entries = 64;
  int window = 6;
  int iterations = 20;
  std::uint64_t seed = 0;
};

// Level 1 is k-means over all normalised windows; level l is k-means over the
// residuals left by levels 1..l-1. From level 2 on, entry 0 is pinned to the
// zero vector so adding a level can never increase the residual.
// Throws std::invalid_argument if a signal length is not a multiple of the
// window or there are fewer windows than entries.
RvqCodebook train_rvq(std::span<const CameraSignal> signals,
                      const RvqTrainOptions& options);

// Greedy residual quantisation per window; ties go to the smallest index.
CameraTokens rvq_encode(const CameraSignal& signal, const RvqCodebook& book);

// Sum of the selected vectors over the first `levels_used` levels (all
// levels when negative), de-normalised. Throws on out-of-range tokens.
CameraSignal rvq_decode(const CameraTokens& tokens, const RvqCodebook& book,
                        int levels_used = -1);

// Normalised-space residual norm after `levels_used` levels, i.e. the error
// the greedy encoder minimises.
double rvq_normalized_error(const CameraSignal& signal,
                            const CameraTokens& tokens,
                            const RvqCodebook& book, int levels_used);

std::vector<double> normalize_window(const RvqCodebook& book,
                                     std::span<const double> window);

// "RVQ1", u32 L, u32 K, u32 D, u32 W, mean[D] + std[D] as f64, then L*K*D f64.
void write_codebook(const std::filesystem::path& path, const RvqCodebook& b);
RvqCodebook read_codebook(const std::filesystem::path& path);

// "CTK1", u32 T, u32 L, then T*L u16 position-major.
void write_camera_tokens(const std::filesystem::path& path,
                         const CameraTokens& tokens);
CameraTokens read_camera_tokens(const std::filesystem::path& path);

}  // namespace camvid
