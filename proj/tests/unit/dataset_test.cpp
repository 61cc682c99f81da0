#include <gtest/gtest.h>

#include <fstream>
#include <map>

#include "camvid/binary_io.hpp"
#include "camvid/dataset.hpp"
#include "temp_dir.hpp"

namespace camvid {
namespace {

DatasetOptions small_options(DirectionMix mix, int clips) {
  DatasetOptions o;
  o.num_clips = clips;
  o.frames = 5;
  o.height = 16;
  o.width = 16;
  o.mix = mix;
  o.seed = 77;
  o.render.supersample = 1;
  return o;
}

TEST(Dataset, MixNames) {
  EXPECT_EQ(parse_direction_mix("uniform7"), DirectionMix::kUniform7);
  EXPECT_EQ(parse_direction_mix("random"), DirectionMix::kRandom);
  EXPECT_EQ(direction_mix_name(DirectionMix::kRandom), "random");
  EXPECT_THROW(parse_direction_mix("cardinal"), std::invalid_argument);
}

TEST(Dataset, MakeClipIsDeterministic) {
  const DatasetOptions o = small_options(DirectionMix::kUniform7, 4);
  const ClipRecord a = make_clip(o, 3);
  const ClipRecord b = make_clip(o, 3);
  EXPECT_EQ(a.clip.frames, b.clip.frames);
  EXPECT_EQ(a.meta.clip_seed, b.meta.clip_seed);
  EXPECT_EQ(format_poses(a.clip.path, ""), format_poses(b.clip.path, ""));
  EXPECT_NE(make_clip(o, 2).clip.frames, a.clip.frames);
}

TEST(Dataset, CardinalClipsFollowTheirLabel) {
  const DatasetOptions o = small_options(DirectionMix::kUniform7, 14);
  std::map<std::string, int> counts;
  for (int i = 0; i < 14; ++i) {
    const ClipRecord r = make_clip(o, i);
    ++counts[r.meta.direction];
    const Direction d = parse_direction(r.meta.direction);
    EXPECT_EQ(r.meta.lambda, direction_lambda(d));
    const Scene scene = build_scene(r.meta.scene_seed);
    EXPECT_TRUE(path_is_clear(scene, r.clip.path));
    const CameraSignal s = path_to_signal(r.clip.path);
    const Eigen::Vector3d step(s.values[6], s.values[7], s.values[8]);
    EXPECT_LT((step - r.meta.speed * camera_axis(d)).norm(), 1e-9);
    if (d != Direction::kStationary) {
      EXPECT_GE(r.meta.speed, o.cardinal_speed_min);
      EXPECT_LE(r.meta.speed, o.cardinal_speed_max);
    }
  }
  EXPECT_EQ(counts.size(), 7u);
  for (const auto& [name, n] : counts) EXPECT_EQ(n, 2) << name;
}

TEST(Dataset, SharedScenesCycle) {
  DatasetOptions o = small_options(DirectionMix::kRandom, 6);
  o.scenes = 2;
  EXPECT_EQ(make_clip(o, 0).meta.scene_seed, make_clip(o, 2).meta.scene_seed);
  EXPECT_NE(make_clip(o, 0).meta.scene_seed, make_clip(o, 1).meta.scene_seed);
}

TEST(Dataset, RandomClipsAreLabelledRandom) {
  const DatasetOptions o = small_options(DirectionMix::kRandom, 3);
  const ClipRecord r = make_clip(o, 1);
  EXPECT_EQ(r.meta.direction, "random");
  EXPECT_EQ(r.meta.lambda, 0);
  EXPECT_GE(r.meta.speed, o.random.speed_min - 1e-12);
  EXPECT_LE(r.meta.speed, o.random.speed_max + 1e-12);
}

TEST(Dataset, WriteReadRoundTripAndThreadIndependence) {
  testing::TempDir tmp;
  DatasetOptions o = small_options(DirectionMix::kUniform7, 9);
  o.threads = 1;
  const Manifest m = generate_dataset(o, tmp / "one");
  o.threads = 3;
  generate_dataset(o, tmp / "three");
  EXPECT_EQ(dataset_digest(tmp / "one"), dataset_digest(tmp / "three"));

  const Manifest back = read_manifest(tmp / "one");
  ASSERT_EQ(back.entries.size(), 9u);
  EXPECT_EQ(back.entries, m.entries);
  EXPECT_EQ(back.entries[0].path, "clip_000000");
  for (int i : {0, 8}) {
    const ClipRecord loaded = load_clip(tmp / "one", back.entries[i]);
    const ClipRecord direct = make_clip(o, i);
    EXPECT_EQ(loaded.clip.frames, direct.clip.frames);
    EXPECT_EQ(loaded.meta.clip_seed, direct.meta.clip_seed);
    EXPECT_EQ(loaded.meta.direction, direct.meta.direction);
    for (int k = 0; k < loaded.clip.path.size(); ++k) {
      EXPECT_EQ(pose_distance(loaded.clip.path.poses[k],
                              direct.clip.path.poses[k]),
                0.0);
    }
  }
  EXPECT_FALSE(std::filesystem::exists(tmp.path() / "one.staging"));
}

TEST(Dataset, ReplacesOnlyDatasets) {
  testing::TempDir tmp;
  const DatasetOptions o = small_options(DirectionMix::kUniform7, 2);
  generate_dataset(o, tmp / "d");
  EXPECT_NO_THROW(generate_dataset(o, tmp / "d"));

  std::filesystem::create_directories(tmp / "other");
  std::ofstream(tmp / "other" / "notes.txt") << "keep me\n";
  EXPECT_THROW(generate_dataset(o, tmp / "other"), IoError);
  EXPECT_TRUE(std::filesystem::exists(tmp / "other" / "notes.txt"));
}

TEST(Dataset, MalformedManifestNamesTheFile) {
  testing::TempDir tmp;
  std::ofstream(tmp / "manifest.txt") << "clip_000000 left\n";
  try {
    read_manifest(tmp.path());
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("manifest.txt"), std::string::npos);
  }
}

}  // namespace
}  // namespace camvid
