#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "camvid/image.hpp"

namespace camvid {

inline constexpr int kPatchSize = 8;      // spatial patch edge, pixels
inline constexpr int kTemporalGroup = 4;  // frames per latent slice after F1

struct VideoGridShape {
  int t = 0;  // 1 + (n - 1) / 4
  int h = 0;  // H / 8
  int w = 0;  // W / 8

  int count() const { return t * h * w; }
  int slice() const { return h * w; }
};

// Latent grid shape for an n-frame H x W clip. Throws std::invalid_argument
// unless n >= 1, n = 1 (mod 4) and H, W are positive multiples of 8.
VideoGridShape video_grid_shape(int frames, int height, int width);

// Tokens in (t, row, col) row-major order.
struct VideoTokenGrid {
  VideoGridShape shape;
  std::vector<int> tokens;

  int at(int t, int r, int c) const {
    return tokens[(std::size_t(t) * shape.h + r) * shape.w + c];
  }
  bool operator==(const VideoTokenGrid& o) const {
    return shape.t == o.shape.t && shape.h == o.shape.h &&
           shape.w == o.shape.w && tokens == o.tokens;
  }
};

// Patch vectors with values in [0, 1]. The first slice holds 8x8x1 patches
// of frame 1; every later slice holds 8x8x4 patches of four consecutive
// frames. Within a patch values run (frame, row, col, channel).
struct Patches {
  VideoGridShape shape;
  int first_dim = 0;  // 8*8*3
  int group_dim = 0;  // 8*8*4*3
  std::vector<double> first;   // shape.slice() x first_dim
  std::vector<double> groups;  // (shape.t - 1) * shape.slice() x group_dim

  std::size_t count() const {
    return first.size() / first_dim +
           (group_dim ? groups.size() / group_dim : 0);
  }
};

Patches patchify(const Frames& frames);

// Two codebooks of `vocab` entries: one for first-frame patches, one for
// four-frame group patches. Vectors are stored centred on the training mean.
struct VqVideoCodebook {
  int vocab = 0;
  int first_dim = 0;
  int group_dim = 0;
  std::vector<double> first_mean;  // first_dim
  std::vector<double> group_mean;  // group_dim
  std::vector<double> first;       // vocab x first_dim, centred
  std::vector<double> group;       // vocab x group_dim, centred
};

struct VqTrainOptions {
  int vocab = 512;
  int iterations = 10;
  std::uint64_t seed = 0;
};

// Seeded k-means++ / Lloyd per codebook. Throws std::invalid_argument when
// either codebook has fewer training patches than `vocab`.
VqVideoCodebook train_vq(std::span<const Frames> clips,
                         const VqTrainOptions& options);

// Nearest entry per patch (exact squared L2, ties to the smaller index).
VideoTokenGrid tokenize(const Frames& frames, const VqVideoCodebook& book);
std::vector<int> tokenize_first_frame(const Image& image,
                                      const VqVideoCodebook& book);

// Pastes code vectors back, adds the mean, clamps to [0, 1] and quantises to
// 8 bits. Throws on out-of-range indices.
Frames detokenize(const VideoTokenGrid& grid, const VqVideoCodebook& book);

// Codebook initialised with uniform random values in [0, 1]; baseline for
// reconstruction-quality comparisons.
VqVideoCodebook random_video_codebook(int vocab, std::uint64_t seed);

// "VVQ1", u32 V, u32 P_first, u32 P_group, then f64: first_mean, group_mean,
// first vectors, group vectors.
void write_video_codebook(const std::filesystem::path& path,
                          const VqVideoCodebook& book);
VqVideoCodebook read_video_codebook(const std::filesystem::path& path);

// "VTK1", u32 Tt, u32 Th, u32 Tw, then u32 tokens row-major.
void write_video_tokens(const std::filesystem::path& path,
                        const VideoTokenGrid& grid);
VideoTokenGrid read_video_tokens(const std::filesystem::path& path);

}  // namespace camvid
