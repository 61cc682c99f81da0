#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "camvid/flow.hpp"
#include "camvid/geometry.hpp"
#include "camvid/image.hpp"

namespace camvid {

// One held-out clip with its ground-truth flow summary computed up front, so
// a series over many checkpoints estimates it once.
struct EvalClip {
  std::string id;
  Direction direction = Direction::kStationary;
  Frames truth;
  CameraPath path;
  FlowSummary truth_flow;
};

EvalClip make_eval_clip(std::string id, Direction direction, Frames truth,
                        CameraPath path, const FlowParams& flow = {});

// Produces the generated clip for the clip at `index`. Called concurrently
// from several threads when EvalSettings::threads > 1.
using VideoGenerator = std::function<Frames(const EvalClip& clip, int index)>;

struct EvalSettings {
  FlowParams flow;
  MotionClassifier classifier;
  int threads = 1;
};

struct EvalRow {
  std::string clip_id;
  Direction direction = Direction::kStationary;
  double mse = 0.0;
  MotionCall call;
  bool match = false;
  Eigen::Vector2d aggregate = Eigen::Vector2d::Zero();
  double aggregate_radial = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  double mean_mse = 0.0;
  double dir_accuracy = 0.0;
  // Accuracy per direction in lambda order; NaN when a direction is absent.
  std::array<double, 7> per_direction{};
};

// Generates a clip per entry, compares total flow against the ground truth
// and classifies the generated motion. Throws std::invalid_argument on an
// empty clip list or a generated clip with the wrong frame count.
EvalReport eval_run(std::span<const EvalClip> clips,
                    const VideoGenerator& generate,
                    const EvalSettings& settings = {});

// Table rows "clip_id direction mse_px2 dominant_axis match", the summary
// lines, then a key=value block.
std::string format_report(const EvalReport& report);

struct SeriesPoint {
  std::int64_t step = 0;
  double train_loss = 0.0;  // NaN when the log has no entry for the step
  double mean_mse = 0.0;
  double dir_accuracy = 0.0;
};

struct SeriesSummary {
  int best = -1;                  // index into the series (lowest mean_mse)
  double best_to_first = 0.0;     // best mean_mse / first mean_mse
  bool non_increasing = false;    // mean_mse never rises between points
};

SeriesSummary summarize_series(std::span<const SeriesPoint> series);
std::string format_series(std::span<const SeriesPoint> series);

}  // namespace camvid
