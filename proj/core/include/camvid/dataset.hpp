#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "camvid/geometry.hpp"
#include "camvid/rng.hpp"
#include "camvid/scene.hpp"

namespace camvid {

enum class DirectionMix : std::uint8_t {
  kUniform7,  // cardinal paths, equal counts per direction
  kRandom,    // random_path
};

DirectionMix parse_direction_mix(std::string_view name);
std::string_view direction_mix_name(DirectionMix mix);

struct DatasetOptions {
  int num_clips = 1;
  int frames = 17;
  int height = 32;
  int width = 32;
  DirectionMix mix = DirectionMix::kUniform7;
  std::uint64_t seed = 0;
  RenderOptions render;
  double cardinal_speed_min = 0.08;
  double cardinal_speed_max = 0.14;
  RandomPathOptions random;
  // Number of distinct scenes to cycle through; 0 gives every clip its own.
  int scenes = 0;
  // Render workers; 0 uses the hardware concurrency. Output does not depend
  // on this value.
  int threads = 0;
};

struct ManifestEntry {
  std::string path;   // clip directory relative to the dataset root
  std::string label;  // direction name, or "random"
  int lambda = 0;     // 1..7, or 0 for random paths

  bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
};

struct ClipMeta {
  std::uint64_t clip_seed = 0;
  std::uint64_t scene_seed = 0;
  std::string direction;
  int lambda = 0;
  double speed = 0.0;
};

struct ClipRecord {
  CameraClip clip;
  ClipMeta meta;
};

// True when every pose keeps clear of the walls, floor and primitives, and
// the view straight ahead is not pressed against a surface.
bool path_is_clear(const Scene& scene, const CameraPath& path);

// Random start pose in the room interior: level-ish pitch, any yaw.
CameraPose sample_start_pose(const Scene& scene, Rng& rng);

// Builds one clip deterministically from (options, index). Exposed so tests
// and tools can render a single record without touching the filesystem.
ClipRecord make_clip(const DatasetOptions& options, int index);

// Renders options.num_clips clips into out_dir:
//   clip_%06d/frames.bin, clip_%06d/poses.txt, clip_%06d/meta.json,
//   manifest.txt ("<path> <label> <lambda>" per line).
// Output is staged next to out_dir and moved into place at the end; on
// failure nothing is left behind. An existing out_dir is replaced only if it
// holds a previous dataset (has manifest.txt) or is empty.
Manifest generate_dataset(const DatasetOptions& options,
                          const std::filesystem::path& out_dir);

Manifest read_manifest(const std::filesystem::path& dataset_dir);
std::string format_manifest(const Manifest& manifest);

ClipRecord load_clip(const std::filesystem::path& dataset_dir,
                     const ManifestEntry& entry);

void write_clip(const std::filesystem::path& clip_dir,
                const ClipRecord& record);

// FNV-1a over the manifest and every clip file, in manifest order.
std::uint64_t dataset_digest(const std::filesystem::path& dataset_dir);

}  // namespace camvid
