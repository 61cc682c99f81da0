#include <gtest/gtest.h>

#include <cmath>

#include "camvid/binary_io.hpp"
#include "camvid/rng.hpp"
#include "camvid/scene.hpp"
#include "camvid/vidcodec.hpp"
#include "temp_dir.hpp"

namespace camvid {
namespace {

Frames noise_clip(int n, int h, int w, std::uint64_t seed) {
  Rng rng(seed);
  Frames f(n, Image(h, w));
  for (Image& img : f) {
    for (auto& v : img.rgb) v = static_cast<std::uint8_t>(rng.below(256));
  }
  return f;
}

// Each 8x8 block is filled with one of four palette colours, constant over
// time, so a four-entry codebook can represent every patch exactly.
Frames palette_clip(std::uint64_t seed) {
  static const std::uint8_t palette[4][3] = {
      {10, 20, 30}, {200, 40, 90}, {60, 250, 0}, {128, 128, 128}};
  Rng rng(seed);
  Frames f(9, Image(16, 24));
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 3; ++c) {
      const auto& col = palette[rng.below(4)];
      for (Image& img : f) {
        for (int y = 0; y < 8; ++y) {
          for (int x = 0; x < 8; ++x) {
            for (int k = 0; k < 3; ++k) img.at(r * 8 + y, c * 8 + x, k) = col[k];
          }
        }
      }
    }
  }
  return f;
}

TEST(VideoGrid, ShapeArithmetic) {
  const VideoGridShape s = video_grid_shape(17, 32, 32);
  EXPECT_EQ(s.t, 5);
  EXPECT_EQ(s.h, 4);
  EXPECT_EQ(s.w, 4);
  EXPECT_EQ(s.count(), 80);
  EXPECT_EQ(video_grid_shape(1, 8, 16).t, 1);
  const VideoGridShape big = video_grid_shape(17, 128, 128);
  EXPECT_EQ(big.count(), 5 * 16 * 16);
  EXPECT_THROW(video_grid_shape(16, 32, 32), std::invalid_argument);
  EXPECT_THROW(video_grid_shape(0, 32, 32), std::invalid_argument);
  EXPECT_THROW(video_grid_shape(17, 30, 32), std::invalid_argument);
  EXPECT_THROW(video_grid_shape(17, 32, 0), std::invalid_argument);
}

TEST(Patchify, LayoutIsFrameRowColChannel) {
  const Frames f = noise_clip(9, 16, 24, 1);
  const Patches p = patchify(f);
  EXPECT_EQ(p.count(), 3u * 2 * 3);
  // First slice: frame 0, patch (1, 2).
  const double* first = p.first.data() + std::size_t(1 * 3 + 2) * p.first_dim;
  EXPECT_EQ(first[(3 * 8 + 5) * 3 + 1], f[0].at(8 + 3, 16 + 5, 1) / 255.0);
  // Second group slice covers frames 5..8; patch (0, 1), frame offset 2.
  const double* g =
      p.groups.data() + (std::size_t(1) * 6 + 0 * 3 + 1) * p.group_dim;
  EXPECT_EQ(g[((2 * 8 + 7) * 8 + 0) * 3 + 2], f[7].at(7, 8, 2) / 255.0);
}

TEST(Patchify, RejectsMixedShapes) {
  Frames f = noise_clip(5, 16, 16, 2);
  f[3] = Image(16, 8);
  EXPECT_THROW(patchify(f), std::invalid_argument);
  EXPECT_THROW(patchify(Frames{}), std::invalid_argument);
}

TEST(Vq, TokenizeMatchesBruteForceNearest) {
  const VqVideoCodebook b = random_video_codebook(32, 5);
  const Frames f = noise_clip(5, 16, 16, 3);
  const VideoTokenGrid g = tokenize(f, b);
  const Patches p = patchify(f);
  for (int t = 0; t < g.shape.t; ++t) {
    for (int i = 0; i < g.shape.slice(); ++i) {
      const bool first = t == 0;
      const int dim = first ? b.first_dim : b.group_dim;
      const double* x = first ? p.first.data() + std::size_t(i) * dim
                              : p.groups.data() +
                                    (std::size_t(t - 1) * g.shape.slice() + i) * dim;
      const auto& codes = first ? b.first : b.group;
      const auto& mean = first ? b.first_mean : b.group_mean;
      int best = 0;
      double best_d = INFINITY;
      for (int k = 0; k < b.vocab; ++k) {
        double d = 0;
        for (int j = 0; j < dim; ++j) {
          const double e = x[j] - mean[j] - codes[std::size_t(k) * dim + j];
          d += e * e;
        }
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      EXPECT_EQ(g.tokens[std::size_t(t) * g.shape.slice() + i], best);
    }
  }
}

TEST(Vq, ExactForRepresentableClips) {
  std::vector<Frames> clips;
  for (int i = 0; i < 8; ++i) clips.push_back(palette_clip(i));
  VqTrainOptions o;
  o.vocab = 4;
  o.seed = 1;
  const VqVideoCodebook b = train_vq(clips, o);
  for (const Frames& f : clips) EXPECT_EQ(detokenize(tokenize(f, b), b), f);
}

TEST(Vq, TrainedBeatsRandomCodebook) {
  std::vector<Frames> clips;
  for (int i = 0; i < 6; ++i) {
    const Scene s = build_scene(i);
    clips.push_back(render_clip(s,
                                cardinal_path(canonical_start_pose(),
                                              kAllDirections[i], 5, 0.1),
                                16, 16)
                        .frames);
  }
  VqTrainOptions o;
  o.vocab = 8;
  const VqVideoCodebook trained = train_vq(clips, o);
  const VqVideoCodebook random = random_video_codebook(8, 1);
  double gain = 0;
  for (const Frames& f : clips) {
    gain += psnr(detokenize(tokenize(f, trained), trained), f) -
            psnr(detokenize(tokenize(f, random), random), f);
  }
  EXPECT_GT(gain / clips.size(), 3.0);
}

TEST(Vq, DeterministicTrainingAndValidation) {
  std::vector<Frames> clips = {noise_clip(5, 16, 16, 1), noise_clip(5, 16, 16, 2)};
  VqTrainOptions o;
  o.vocab = 4;
  o.seed = 3;
  EXPECT_EQ(train_vq(clips, o).group, train_vq(clips, o).group);
  o.vocab = 64;  // only 8 first-frame patches
  EXPECT_THROW(train_vq(clips, o), std::invalid_argument);

  const VqVideoCodebook b = random_video_codebook(4, 0);
  VideoTokenGrid g = tokenize(clips[0], b);
  g.tokens[2] = 4;
  EXPECT_THROW(detokenize(g, b), std::invalid_argument);
}

TEST(Vq, FilesRoundTrip) {
  testing::TempDir tmp;
  const VqVideoCodebook b = random_video_codebook(16, 2);
  write_video_codebook(tmp / "b.vvq", b);
  const VqVideoCodebook r = read_video_codebook(tmp / "b.vvq");
  EXPECT_EQ(r.vocab, 16);
  EXPECT_EQ(r.first, b.first);
  EXPECT_EQ(r.group, b.group);
  EXPECT_EQ(r.group_mean, b.group_mean);

  const VideoTokenGrid g = tokenize(noise_clip(9, 16, 24, 4), b);
  write_video_tokens(tmp / "g.vtk", g);
  EXPECT_EQ(read_video_tokens(tmp / "g.vtk"), g);

  auto bytes = read_file_bytes(tmp / "b.vvq");
  bytes.resize(bytes.size() - 8);
  write_file_atomic(tmp / "short.vvq", bytes);
  EXPECT_THROW(read_video_codebook(tmp / "short.vvq"), IoError);
}

TEST(Frames, FileRoundTripAndPsnr) {
  testing::TempDir tmp;
  const Frames f = noise_clip(3, 8, 16, 9);
  write_frames(tmp / "f.bin", f);
  EXPECT_EQ(read_frames(tmp / "f.bin"), f);
  EXPECT_TRUE(std::isinf(psnr(f, f)));
  Frames g = f;
  g[0].rgb[0] ^= 1;
  const double mse = 1.0 / (3.0 * 8 * 16 * 3);
  EXPECT_NEAR(mean_squared_error(f, g), mse, 1e-15);
  EXPECT_NEAR(psnr(f, g), 10 * std::log10(255.0 * 255.0 / mse), 1e-9);
}

}  // namespace
}  // namespace camvid
