#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <ostream>
#include <string>
#include <vector>

#include "camvid/camcodec.hpp"
#include "camvid/checkpoint.hpp"
#include "camvid/config.hpp"
#include "camvid/dataset.hpp"
#include "camvid/evaluation.hpp"
#include "camvid/vidcodec.hpp"

namespace camvid {

namespace fs = std::filesystem;

// Artifact locations derived from the config.
fs::path camera_codebook_path(const PipelineConfig& c);
fs::path video_codebook_path(const PipelineConfig& c);
fs::path checkpoint_path(const PipelineConfig& c, std::int64_t step);
fs::path train_log_path(const PipelineConfig& c);

// Snapshots in the checkpoint directory, ascending by step.
struct Snapshot {
  std::int64_t step = 0;
  fs::path path;
};
std::vector<Snapshot> list_snapshots(const fs::path& checkpoint_dir);

// Signal fed to the camera tokenizer: per-frame deltas, plus a window of the
// direction signature when camera.signature is on (zeros when the direction
// is unknown, e.g. random paths).
CameraSignal camera_signal(const PipelineConfig& c, const CameraPath& path,
                           std::optional<Direction> direction);

enum class DataSplit { kTrain, kGeneric, kEval };
DataSplit parse_split(std::string_view name);

struct GenDataOptions {
  DataSplit split = DataSplit::kTrain;
  std::optional<int> clips;
  std::optional<std::string> mix;
  std::optional<fs::path> out;
};

// Dataset options for a split: each split draws from its own seed stream,
// so held-out clips never share scenes with training clips.
DatasetOptions dataset_options(const PipelineConfig& c, DataSplit split);

Manifest cmd_gen_data(const PipelineConfig& c, const GenDataOptions& options,
                      std::ostream& log);

void cmd_train_camcodec(const PipelineConfig& c, std::ostream& log);
void cmd_train_vidcodec(const PipelineConfig& c, std::ostream& log);

struct TrainModelOptions {
  bool resume = false;
};

// Writes step_%06d.ckpt at step 0, every train.snapshot_every steps and at
// the end, and appends "step loss lr wallclock_ms" lines to train.log.
// Throws IoError naming any missing prerequisite.
void cmd_train_model(const PipelineConfig& c, const TrainModelOptions& options,
                     std::ostream& log);

// Codebooks plus one model checkpoint: everything needed to turn a first
// frame and a camera path into a clip.
class ClipGenerator {
 public:
  ClipGenerator(const PipelineConfig& c, const fs::path& checkpoint);

  struct Result {
    CameraTokens camera;
    VideoTokenGrid grid;
    Frames frames;
  };
  Result generate(const Image& first_frame, const CameraPath& path,
                  std::optional<Direction> direction,
                  std::uint64_t sample_seed) const;

  const PipelineConfig& config() const { return config_; }
  std::int64_t step() const { return checkpoint_.adam.step; }

 private:
  PipelineConfig config_;
  RvqCodebook camera_book_;
  VqVideoCodebook video_book_;
  Checkpoint checkpoint_;
};

struct GenerateOptions {
  std::optional<fs::path> checkpoint;  // default: latest snapshot
  fs::path image;                      // frames.bin with one frame
  Direction direction = Direction::kStationary;
  std::optional<double> speed;  // default: middle of data.speed_min..max
  fs::path out;
};

// Writes frames.bin, poses.txt, camera.ctk and video.vtk into options.out.
ClipGenerator::Result cmd_generate(const PipelineConfig& c,
                                   const GenerateOptions& options,
                                   std::ostream& log);

struct EvalOptions {
  std::vector<fs::path> checkpoints;  // default: every snapshot
  std::optional<fs::path> dataset;    // default: paths.eval
  std::optional<int> num_videos;      // default: eval.num_videos
};

// Left and right generations from one first frame and one sampling seed,
// differing only in the camera tokens.
struct SwapPair {
  std::string clip_id;
  double left_x = 0.0;
  double right_x = 0.0;
  bool flipped = false;  // nonzero horizontal aggregates of opposite sign
};

struct SwapReport {
  std::vector<SwapPair> pairs;
  double flip_rate = 0.0;
};

// Uses the first frames of up to `pairs` clips.
SwapReport left_right_swap(const ClipGenerator& generator,
                           std::span<const EvalClip> clips, int pairs,
                           std::uint64_t sample_seed);
std::string format_swap(const SwapReport& report);

struct EvalOutcome {
  std::vector<SeriesPoint> series;
  std::vector<EvalReport> reports;
  SwapReport swap;  // best checkpoint
};

// Loads the first num_videos clips of a manifest as evaluation clips.
std::vector<EvalClip> load_eval_clips(const PipelineConfig& c,
                                      const fs::path& dataset, int count);

// Evaluates each checkpoint; writes eval_step_%06d.txt per checkpoint,
// series.txt and the best checkpoint's swap.txt into paths.reports.
EvalOutcome cmd_eval(const PipelineConfig& c, const EvalOptions& options,
                     std::ostream& log);

// Token arithmetic of the configured layout.
std::string cmd_layout_check(const PipelineConfig& c);

}  // namespace camvid
