#include "camvid/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "camvid/binary_io.hpp"
#include "camvid/rng.hpp"
#include "json.hpp"

namespace camvid {

namespace fs = std::filesystem;

DirectionMix parse_direction_mix(std::string_view name) {
  if (name == "uniform7") return DirectionMix::kUniform7;
  if (name == "random") return DirectionMix::kRandom;
  throw std::invalid_argument("unknown direction mix '" + std::string(name) +
                              "'; expected uniform7 or random");
}

std::string_view direction_mix_name(DirectionMix mix) {
  return mix == DirectionMix::kUniform7 ? "uniform7" : "random";
}

bool path_is_clear(const Scene& scene, const CameraPath& path) {
  constexpr double kWallMargin = 1.0;
  constexpr double kPrimitiveMargin = 0.3;
  constexpr double kMinViewDepth = 1.2;
  const Room& room = scene.room;
  for (const CameraPose& pose : path.poses) {
    const Eigen::Vector3d& p = pose.translation();
    if (p.x() < room.min.x() + kWallMargin ||
        p.x() > room.max.x() - kWallMargin ||
        p.z() < room.min.z() + kWallMargin ||
        p.z() > room.max.z() - kWallMargin || p.y() < 0.6 || p.y() > 5.0) {
      return false;
    }
    for (const Primitive& prim : scene.primitives) {
      if ((p - prim.center).norm() <
          prim.bounding_radius() + kPrimitiveMargin) {
        return false;
      }
    }
  }
  for (const CameraPose* pose : {&path.poses.front(), &path.poses.back()}) {
    const Eigen::Vector3d ahead = pose->rotation() * Eigen::Vector3d(0, 0, -1);
    const auto hit = trace(scene, pose->translation(), ahead);
    if (hit && hit->t < kMinViewDepth) return false;
  }
  return true;
}

CameraPose sample_start_pose(const Scene& scene, Rng& rng) {
  const Room& room = scene.room;
  const Eigen::Vector3d pos(rng.uniform(room.min.x() + 1.0, room.max.x() - 1.0),
                            rng.uniform(1.0, 4.0),
                            rng.uniform(room.min.z() + 1.0, room.max.z() - 1.0));
  const double yaw = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double pitch = rng.uniform(-0.12, 0.12);
  return CameraPose::from(rot_y(yaw) * rot_x(pitch), pos);
}

ClipRecord make_clip(const DatasetOptions& options, int index) {
  const std::uint64_t clip_seed = derive_seed(options.seed, index);
  const std::uint64_t scene_seed =
      options.scenes > 0
          ? derive_seed(derive_seed(options.seed, "scenes"),
                        std::uint64_t(index % options.scenes))
          : derive_seed(clip_seed, "scene");
  const Scene scene = build_scene(scene_seed);
  Rng rng(clip_seed);

  ClipRecord rec;
  rec.meta.clip_seed = clip_seed;
  rec.meta.scene_seed = scene_seed;

  constexpr int kMaxAttempts = 2000;
  CameraPath path;
  if (options.mix == DirectionMix::kUniform7) {
    const Direction d = kAllDirections[std::size_t(index) % 7];
    const double speed =
        rng.uniform(options.cardinal_speed_min, options.cardinal_speed_max);
    rec.meta.direction = std::string(direction_name(d));
    rec.meta.lambda = direction_lambda(d);
    rec.meta.speed = d == Direction::kStationary ? 0.0 : speed;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      path = cardinal_path(sample_start_pose(scene, rng), d, options.frames,
                           rec.meta.speed);
      if (path_is_clear(scene, path)) break;
      path.poses.clear();
    }
  } else {
    rec.meta.direction = "random";
    rec.meta.lambda = 0;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
      path = random_path(sample_start_pose(scene, rng), options.frames,
                         rng.next_u64(), options.random);
      if (path_is_clear(scene, path)) break;
      path.poses.clear();
    }
    if (!path.poses.empty()) {
      rec.meta.speed = path.poses.size() > 1
                           ? (path.poses[1].translation() -
                              path.poses[0].translation())
                                 .norm()
                           : 0.0;
    }
  }
  if (path.poses.empty()) {
    throw std::runtime_error("clip " + std::to_string(index) +
                             ": no collision-free start pose found");
  }
  rec.clip = render_clip(scene, path, options.height, options.width,
                         options.render);
  return rec;
}

std::string format_manifest(const Manifest& manifest) {
  std::string out;
  for (const ManifestEntry& e : manifest.entries) {
    out += e.path + ' ' + e.label + ' ' + std::to_string(e.lambda) + '\n';
  }
  return out;
}

void write_clip(const fs::path& clip_dir, const ClipRecord& record) {
  write_frames(clip_dir / "frames.bin", record.clip.frames);
  write_poses(clip_dir / "poses.txt", record.clip.path,
              "row-major 3x4 [R|t], camera-to-world");
  nlohmann::json meta = {
      {"clip_seed", record.meta.clip_seed},
      {"scene_seed", record.meta.scene_seed},
      {"direction", record.meta.direction},
      {"lambda", record.meta.lambda},
      {"speed", record.meta.speed},
  };
  write_file_atomic(clip_dir / "meta.json", meta.dump(2) + "\n");
}

namespace {

void prepare_target(const fs::path& out_dir) {
  std::error_code ec;
  if (!fs::exists(out_dir, ec)) return;
  if (!fs::is_directory(out_dir, ec)) {
    throw IoError(out_dir.string() + " exists and is not a directory");
  }
  const bool empty = fs::is_empty(out_dir, ec);
  if (!empty && !fs::exists(out_dir / "manifest.txt")) {
    throw IoError(out_dir.string() +
                  " is not empty and does not hold a dataset; refusing to "
                  "overwrite");
  }
}

}  // namespace

Manifest generate_dataset(const DatasetOptions& options,
                          const fs::path& out_dir) {
  if (options.num_clips < 1) {
    throw std::invalid_argument("generate_dataset: num_clips must be >= 1");
  }
  prepare_target(out_dir);

  fs::path staging = out_dir;
  staging += ".staging";
  std::error_code ec;
  fs::remove_all(staging, ec);
  fs::create_directories(staging, ec);
  if (ec) {
    throw IoError("cannot create " + staging.string() + ": " + ec.message());
  }

  Manifest manifest;
  manifest.entries.resize(options.num_clips);
  try {
    // Workers render disjoint clip indices; the manifest is assembled by this
    // thread afterwards.
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
      for (int i = next++; i < options.num_clips; i = next++) {
        try {
          const ClipRecord rec = make_clip(options, i);
          char name[32];
          std::snprintf(name, sizeof(name), "clip_%06d", i);
          write_clip(staging / name, rec);
          manifest.entries[i] = {name, rec.meta.direction, rec.meta.lambda};
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next = options.num_clips;
        }
      }
    };
    const unsigned threads =
        options.threads > 0
            ? unsigned(options.threads)
            : std::clamp(std::thread::hardware_concurrency(), 1u, 16u);
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    write_file_atomic(staging / "manifest.txt", format_manifest(manifest));

    if (fs::exists(out_dir)) fs::remove_all(out_dir);
    if (out_dir.has_parent_path()) fs::create_directories(out_dir.parent_path());
    fs::rename(staging, out_dir);
  } catch (const fs::filesystem_error& e) {
    fs::remove_all(staging, ec);
    throw IoError(std::string("dataset write failed: ") + e.what());
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
  return manifest;
}

Manifest read_manifest(const fs::path& dataset_dir) {
  const fs::path file = dataset_dir / "manifest.txt";
  std::istringstream in(read_text_file(file));
  Manifest m;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    ManifestEntry e;
    if (!(ls >> e.path >> e.label >> e.lambda)) {
      throw IoError(file.string() + ":" + std::to_string(lineno) +
                    ": expected '<path> <label> <lambda>'");
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

ClipRecord load_clip(const fs::path& dataset_dir, const ManifestEntry& entry) {
  const fs::path dir = dataset_dir / entry.path;
  ClipRecord rec;
  rec.clip.frames = read_frames(dir / "frames.bin");
  rec.clip.path = read_poses(dir / "poses.txt");
  if (rec.clip.path.size() != static_cast<int>(rec.clip.frames.size())) {
    throw IoError(dir.string() + ": frame count does not match pose count");
  }
  const auto meta = nlohmann::json::parse(read_text_file(dir / "meta.json"));
  rec.meta.clip_seed = meta.at("clip_seed").get<std::uint64_t>();
  rec.meta.scene_seed = meta.at("scene_seed").get<std::uint64_t>();
  rec.meta.direction = meta.at("direction").get<std::string>();
  rec.meta.lambda = meta.at("lambda").get<int>();
  rec.meta.speed = meta.at("speed").get<double>();
  rec.clip.scene_seed = rec.meta.scene_seed;
  return rec;
}

std::uint64_t dataset_digest(const fs::path& dataset_dir) {
  Fnv1a h;
  h.update(read_text_file(dataset_dir / "manifest.txt"));
  for (const ManifestEntry& e : read_manifest(dataset_dir).entries) {
    for (const char* file : {"frames.bin", "poses.txt", "meta.json"}) {
      const auto bytes = read_file_bytes(dataset_dir / e.path / file);
      h.update(bytes.data(), bytes.size());
    }
  }
  return h.digest();
}

}  // namespace camvid
