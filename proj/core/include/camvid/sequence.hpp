#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "camvid/camcodec.hpp"
#include "camvid/vidcodec.hpp"

namespace camvid {

// Unified id space: six specials, then camera ids, then video ids. Both video
// codebooks (first frame and groups) share the video id range.
struct Vocabulary {
  static constexpr int kBos = 0;
  static constexpr int kBoc = 1;
  static constexpr int kEoc = 2;
  static constexpr int kBov = 3;
  static constexpr int kEov = 4;
  static constexpr int kSep = 5;
  static constexpr int kSpecials = 6;

  int camera = 0;  // K
  int video = 0;   // V

  int size() const { return kSpecials + camera + video; }
  int camera_begin() const { return kSpecials; }
  int video_begin() const { return kSpecials + camera; }

  int camera_id(int token) const { return kSpecials + token; }
  int video_id(int token) const { return kSpecials + camera + token; }
  int video_token(int id) const { return id - video_begin(); }

  bool is_camera(int id) const {
    return id >= camera_begin() && id < video_begin();
  }
  bool is_video(int id) const { return id >= video_begin() && id < size(); }
};

// Segment lengths of one example. The generic (camera-free) layout keeps the
// BOC/EOC markers around an empty camera span.
struct SequenceLayout {
  int camera = 0;  // T * L
  int first = 0;   // Th * Tw
  int rest = 0;    // (Tt - 1) * Th * Tw

  // [BOS, BOC, cam, EOC, BOV, first, SEP, rest, EOV]
  int length() const { return 6 + camera + first + rest; }
  // Ids up to and including SEP: everything the sampler is given.
  int prefix_length() const { return 5 + camera + first; }
  int video_tokens() const { return first + rest; }
};

SequenceLayout sequence_layout(int camera_positions, int camera_levels,
                               const VideoGridShape& grid);

struct TokenSequence {
  std::vector<int> ids;
  // True on positions whose id the model is trained to predict: the
  // generated video span and the closing EOV.
  std::vector<std::uint8_t> loss_mask;

  int size() const { return static_cast<int>(ids.size()); }
};

// Throws std::invalid_argument naming the offending position when a token is
// outside its modality range, or when the camera segment is empty.
TokenSequence build_sequence(const CameraTokens& camera,
                             const VideoTokenGrid& video,
                             const Vocabulary& vocab);

// Same layout with an empty camera span; the loss mask covers the same
// video span.
TokenSequence build_generic_sequence(const VideoTokenGrid& video,
                                     const Vocabulary& vocab);

// [BOS, BOC, cam, EOC, BOV, first, SEP]; pass empty camera tokens for the
// camera-free prefix.
std::vector<int> conditioning_prefix(const CameraTokens& camera,
                                     std::span<const int> first_frame,
                                     const Vocabulary& vocab);

// One training example reference: which pool it comes from and its index.
struct ExampleRef {
  bool camera = true;
  int index = 0;
};

// Draws `batch` examples for a given step: each comes from the camera pool
// with probability mix_ratio, otherwise from the generic pool, with a
// uniform index inside the chosen pool. The draw depends only on
// (seed, step), which makes resumed training replay the same batches.
// An empty pool forces every draw to the other one; both empty or a ratio
// outside [0, 1] throws std::invalid_argument.
std::vector<ExampleRef> mix_batch(int camera_pool, int generic_pool,
                                  double mix_ratio, int batch,
                                  std::uint64_t seed, std::int64_t step);

}  // namespace camvid
