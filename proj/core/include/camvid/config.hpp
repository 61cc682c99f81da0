#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "camvid/checkpoint.hpp"
#include "camvid/flow.hpp"
#include "camvid/sequence.hpp"

namespace camvid {

// Every tunable of the pipeline. The text form is flat key=value, one per
// line; keys are listed by config_keys().
struct PipelineConfig {
  std::string preset = "desk";
  std::uint64_t seed = 1;
  bool deterministic = false;
  int threads = 0;  // 0 = hardware concurrency

  int frames = 17;
  int height = 32;
  int width = 32;

  // Datasets.
  int clips = 4096;
  int generic_clips = 1024;
  int eval_clips = 40;
  std::string mix = "uniform7";
  double speed_min = 0.08;
  double speed_max = 0.14;
  double random_speed_min = 0.02;
  double random_speed_max = 0.15;
  double random_rotation_cap = 0.0;
  int supersample = 2;
  int scenes = 0;

  // Camera tokenizer.
  int camera_levels = 4;
  int camera_entries = 64;
  int camera_window = 6;
  int camera_positions = 0;  // 0: derived from frames and window
  int camera_iterations = 20;
  bool camera_signature = false;

  // Video tokenizer.
  int video_vocab = 512;
  int video_iterations = 10;
  int video_train_clips = 512;

  // Model.
  int model_layers = 2;
  int model_heads = 4;
  int model_width = 64;
  int model_ff = 256;
  int model_context = 160;

  // Training.
  int steps = 4000;
  double lr = 1e-3;
  int warmup = 100;
  int batch = 16;
  double clip_norm = 1.0;
  double mix_ratio = 0.7;
  int snapshot_every = 500;

  // Sampling and evaluation.
  double temperature = 0.0;
  int num_videos = 40;
  int swap_pairs = 20;
  int flow_levels = 3;
  int flow_iterations = 100;
  double flow_alpha = 0.3;
  int flow_warps = 2;
  double stationary_px = 0.1;
  double radial_weight = 2.0;

  // Artifact locations, relative to the working directory.
  std::string dataset_dir = "data/train";
  std::string generic_dir = "data/generic";
  std::string eval_dir = "data/eval";
  std::string codec_dir = "runs/codecs";
  std::string checkpoint_dir = "runs/checkpoints";
  std::string report_dir = "runs/reports";

  // Throws std::invalid_argument naming the first offending key.
  void validate() const;

  int camera_token_positions() const;
  VideoGridShape video_grid() const;
  SequenceLayout layout() const;
  Vocabulary vocabulary() const;
  ModelConfig model_config() const;
  FlowParams flow_params() const;
  MotionClassifier classifier() const;
  int worker_threads() const;

  KeyValues to_key_values() const;
};

// Built-in presets "desk" and "paper". Throws std::invalid_argument for any
// other name.
PipelineConfig preset_config(std::string_view name);

// Applies key=value overrides; unknown keys and unparsable values throw
// std::invalid_argument naming the key.
void apply_overrides(PipelineConfig& config, const KeyValues& overrides);

// Preset (from a "preset" key in the file, else `fallback_preset`) plus the
// file's overrides, validated.
PipelineConfig load_config(const std::filesystem::path& path,
                           std::string_view fallback_preset = "desk");

std::vector<std::string> config_keys();
std::string format_config(const PipelineConfig& config);

}  // namespace camvid
