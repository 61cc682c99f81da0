#include "camvid/sequence.hpp"

#include <stdexcept>
#include <string>

#include "camvid/rng.hpp"

namespace camvid {

SequenceLayout sequence_layout(int camera_positions, int camera_levels,
                               const VideoGridShape& grid) {
  if (camera_positions < 0 || camera_levels < 0) {
    throw std::invalid_argument("sequence_layout: negative camera shape");
  }
  SequenceLayout l;
  l.camera = camera_positions * camera_levels;
  l.first = grid.slice();
  l.rest = (grid.t - 1) * grid.slice();
  return l;
}

namespace {

void append_video(const VideoTokenGrid& video, const Vocabulary& vocab,
                  TokenSequence& seq) {
  const int slice = video.shape.slice();
  if (video.shape.t < 1 || slice < 1 ||
      video.tokens.size() != std::size_t(video.shape.count())) {
    throw std::invalid_argument("build_sequence: malformed video grid");
  }
  auto push = [&](int token, bool predicted) {
    if (token < 0 || token >= vocab.video) {
      throw std::invalid_argument(
          "build_sequence: video token " + std::to_string(token) +
          " at sequence position " + std::to_string(seq.ids.size()) +
          " is outside [0, " + std::to_string(vocab.video) + ")");
    }
    seq.ids.push_back(vocab.video_id(token));
    seq.loss_mask.push_back(predicted);
  };
  seq.ids.push_back(Vocabulary::kBov);
  seq.loss_mask.push_back(0);
  for (int i = 0; i < slice; ++i) push(video.tokens[i], false);
  seq.ids.push_back(Vocabulary::kSep);
  seq.loss_mask.push_back(0);
  for (std::size_t i = slice; i < video.tokens.size(); ++i) {
    push(video.tokens[i], true);
  }
  seq.ids.push_back(Vocabulary::kEov);
  seq.loss_mask.push_back(1);
}

void append_camera(const CameraTokens& camera, const Vocabulary& vocab,
                   std::vector<int>& ids) {
  ids.push_back(Vocabulary::kBos);
  ids.push_back(Vocabulary::kBoc);
  for (std::size_t i = 0; i < camera.tokens.size(); ++i) {
    const int t = camera.tokens[i];
    if (t < 0 || t >= vocab.camera) {
      throw std::invalid_argument(
          "build_sequence: camera token " + std::to_string(t) +
          " at sequence position " + std::to_string(ids.size()) +
          " is outside [0, " + std::to_string(vocab.camera) + ")");
    }
    ids.push_back(vocab.camera_id(t));
  }
  ids.push_back(Vocabulary::kEoc);
}

}  // namespace

TokenSequence build_sequence(const CameraTokens& camera,
                             const VideoTokenGrid& video,
                             const Vocabulary& vocab) {
  if (camera.tokens.empty()) {
    throw std::invalid_argument("build_sequence: empty camera segment");
  }
  TokenSequence seq;
  append_camera(camera, vocab, seq.ids);
  seq.loss_mask.assign(seq.ids.size(), 0);
  append_video(video, vocab, seq);
  return seq;
}

TokenSequence build_generic_sequence(const VideoTokenGrid& video,
                                     const Vocabulary& vocab) {
  TokenSequence seq;
  append_camera(CameraTokens{}, vocab, seq.ids);
  seq.loss_mask.assign(seq.ids.size(), 0);
  append_video(video, vocab, seq);
  return seq;
}

std::vector<int> conditioning_prefix(const CameraTokens& camera,
                                     std::span<const int> first_frame,
                                     const Vocabulary& vocab) {
  std::vector<int> ids;
  append_camera(camera, vocab, ids);
  ids.push_back(Vocabulary::kBov);
  for (int t : first_frame) {
    if (t < 0 || t >= vocab.video) {
      throw std::invalid_argument("conditioning_prefix: first-frame token " +
                                  std::to_string(t) + " out of range");
    }
    ids.push_back(vocab.video_id(t));
  }
  ids.push_back(Vocabulary::kSep);
  return ids;
}

std::vector<ExampleRef> mix_batch(int camera_pool, int generic_pool,
                                  double mix_ratio, int batch,
                                  std::uint64_t seed, std::int64_t step) {
  if (!(mix_ratio >= 0.0 && mix_ratio <= 1.0)) {
    throw std::invalid_argument("mix_ratio must lie in [0, 1]");
  }
  if (camera_pool <= 0 && generic_pool <= 0) {
    throw std::invalid_argument("mix_batch: both example pools are empty");
  }
  Rng rng(derive_seed(seed, std::uint64_t(step)));
  std::vector<ExampleRef> out(batch);
  for (ExampleRef& ref : out) {
    bool cam = rng.uniform() < mix_ratio;
    if (camera_pool <= 0) cam = false;
    if (generic_pool <= 0) cam = true;
    ref.camera = cam;
    ref.index = static_cast<int>(rng.below(cam ? camera_pool : generic_pool));
  }
  return out;
}

}  // namespace camvid
