#include <gtest/gtest.h>

#include <cmath>

#include "camvid/rng.hpp"
#include "camvid/scene.hpp"

namespace camvid {
namespace {

// Point-in-solid test used by the ray-march oracle below. `grow` inflates
// every solid so points on a surface count as inside.
bool inside_solid(const Scene& s, const Eigen::Vector3d& p, double grow) {
  for (const Primitive& q : s.primitives) {
    if (q.kind == Primitive::Kind::kSphere) {
      if ((p - q.center).norm() <= q.radius + grow) return true;
    } else if (((p - q.center).cwiseAbs() - q.half_extent).maxCoeff() <= grow) {
      return true;
    }
  }
  const Room& r = s.room;
  if (p.y() < r.min.y() + grow) return true;
  if (p.y() > r.max.y()) return false;  // open top
  return p.x() < r.min.x() + grow || p.x() > r.max.x() - grow ||
         p.z() < r.min.z() + grow || p.z() > r.max.z() - grow;
}

TEST(Scene, BuildIsDeterministic) {
  for (std::uint64_t seed : {0ull, 1ull, 12345ull}) {
    EXPECT_EQ(scene_digest(build_scene(seed)), scene_digest(build_scene(seed)));
  }
  EXPECT_NE(scene_digest(build_scene(1)), scene_digest(build_scene(2)));
}

TEST(Scene, PrimitivesFitInsideTheRoom) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Scene s = build_scene(seed);
    ASSERT_GE(s.primitives.size(), 5u);
    ASSERT_LE(s.primitives.size(), 15u);
    for (const Primitive& p : s.primitives) {
      const Eigen::Vector3d extent = p.kind == Primitive::Kind::kSphere
                                         ? Eigen::Vector3d::Constant(p.radius)
                                         : p.half_extent;
      const Eigen::Vector3d lo = p.center - extent;
      const Eigen::Vector3d hi = p.center + extent;
      for (int a = 0; a < 3; ++a) {
        EXPECT_GE(lo[a], s.room.min[a] - 1e-12) << "seed " << seed;
        EXPECT_LE(hi[a], s.room.max[a] + 1e-12) << "seed " << seed;
      }
    }
    EXPECT_NEAR(s.light_dir.norm(), 1.0, 1e-12);
  }
}

TEST(Scene, CanonicalViewSeesAPrimitive) {
  const CameraPose pose = canonical_start_pose();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Scene s = build_scene(seed);
    bool seen = false;
    for (int y = 0; y < 32 && !seen; ++y) {
      for (int x = 0; x < 32 && !seen; ++x) {
        const auto hit = trace(s, pose.translation(),
                               pixel_ray(pose, 32, 32, x + 0.5, y + 0.5, {}));
        seen = hit && hit->primitive >= 0;
      }
    }
    EXPECT_TRUE(seen) << "seed " << seed;
  }
}

TEST(Trace, HandPlacedHits) {
  Scene s;
  Primitive ball;
  ball.kind = Primitive::Kind::kSphere;
  ball.center = {0, 2, -3};
  ball.radius = 0.5;
  s.primitives.push_back(ball);
  Primitive box;
  box.center = {2, 1, 0};
  box.half_extent = {0.5, 1.0, 0.5};
  s.primitives.push_back(box);

  auto hit = trace(s, {0, 2, 0}, {0, 0, -1});
  ASSERT_TRUE(hit);
  EXPECT_NEAR(hit->t, 2.5, 1e-12);
  EXPECT_EQ(hit->primitive, 0);
  EXPECT_NEAR((hit->normal - Eigen::Vector3d(0, 0, 1)).norm(), 0.0, 1e-12);

  hit = trace(s, {0, 1, 0}, {1, 0, 0});
  ASSERT_TRUE(hit);
  EXPECT_NEAR(hit->t, 1.5, 1e-12);
  EXPECT_EQ(hit->primitive, 1);
  EXPECT_EQ(hit->normal, Eigen::Vector3d(-1, 0, 0));

  hit = trace(s, {0, 2, 0}, {0, -1, 0});
  ASSERT_TRUE(hit);
  EXPECT_NEAR(hit->t, 2.0, 1e-12);
  EXPECT_EQ(hit->primitive, -1);
  EXPECT_EQ(hit->normal, Eigen::Vector3d(0, 1, 0));

  EXPECT_FALSE(trace(s, {0, 2, 0}, {0, 1, 0}));  // open top
}

TEST(Trace, AgreesWithRayMarching) {
  Rng rng(21);
  int hits = 0;
  for (int i = 0; i < 300; ++i) {
    const Scene s = build_scene(i % 10);
    Eigen::Vector3d o;
    do {
      o = {rng.uniform(-3.5, 3.5), rng.uniform(0.3, 4.0), rng.uniform(-3.5, 3.5)};
    } while (inside_solid(s, o, 1e-3));
    const Eigen::Vector3d d =
        Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized();
    const auto hit = trace(s, o, d);

    double first = -1;
    constexpr double kStep = 2e-3;
    for (double t = kStep; t < 40.0; t += kStep) {
      if (inside_solid(s, o + t * d, 0.0)) {
        first = t;
        break;
      }
    }
    if (first < 0) {
      EXPECT_FALSE(hit) << "ray " << i << " should reach the sky";
      continue;
    }
    ASSERT_TRUE(hit) << "ray " << i << " missed a surface at t=" << first;
    ++hits;
    // The analytic hit may only be earlier than the march (thin grazes the
    // march steps over), never later, and must lie on a surface.
    EXPECT_LE(hit->t, first + 1e-9) << "ray " << i;
    EXPECT_TRUE(inside_solid(s, o + hit->t * d, 1e-7)) << "ray " << i;
    EXPECT_LE(hit->normal.dot(d), 1e-12);
  }
  EXPECT_GT(hits, 200);
}

TEST(Shade, LambertWithAmbient) {
  Scene s;
  Hit h;
  h.albedo = {0.5, 0.25, 1.0};
  h.normal = s.light_dir;
  EXPECT_NEAR((shade(s, h) - h.albedo * (s.ambient + s.diffuse)).norm(), 0, 1e-15);
  h.normal = -s.light_dir;
  EXPECT_NEAR((shade(s, h) - h.albedo * s.ambient).norm(), 0, 1e-15);
}

TEST(Camera, CentreRayLooksDownMinusZ) {
  const RenderOptions o;
  EXPECT_NEAR(focal_length_px(32, o), 16.0 / std::tan(M_PI / 6), 1e-12);
  const Eigen::Vector3d c = pixel_ray(CameraPose(), 32, 32, 16, 16, o).normalized();
  EXPECT_NEAR((c - Eigen::Vector3d(0, 0, -1)).norm(), 0, 1e-12);
  // Image x grows to the right, image y grows downward.
  const Eigen::Vector3d r = pixel_ray(CameraPose(), 32, 32, 31, 16, o);
  const Eigen::Vector3d b = pixel_ray(CameraPose(), 32, 32, 16, 31, o);
  EXPECT_GT(r.x(), 0);
  EXPECT_LT(b.y(), 0);
}

TEST(Render, DeterministicAndTextured) {
  const Scene s = build_scene(5);
  const Image a = render_frame(s, canonical_start_pose(), 32, 32);
  const Image b = render_frame(s, canonical_start_pose(), 32, 32);
  EXPECT_EQ(a, b);
  int lo = 255, hi = 0;
  for (std::uint8_t v : a.rgb) {
    lo = std::min<int>(lo, v);
    hi = std::max<int>(hi, v);
  }
  EXPECT_GT(hi - lo, 50);
}

TEST(Render, SupersamplingSmoothsButStaysClose) {
  const Scene s = build_scene(6);
  RenderOptions one;
  one.supersample = 1;
  RenderOptions four;
  four.supersample = 4;
  const Frames a{render_frame(s, canonical_start_pose(), 32, 32, one)};
  const Frames b{render_frame(s, canonical_start_pose(), 32, 32, four)};
  EXPECT_NE(a[0], b[0]);
  EXPECT_GT(psnr(a, b), 15.0);
}

TEST(Render, ClipHasOneFramePerPose) {
  const Scene s = build_scene(7);
  const CameraPath p =
      cardinal_path(canonical_start_pose(), Direction::kLeft, 5, 0.1);
  const CameraClip c = render_clip(s, p, 16, 16);
  ASSERT_EQ(c.frames.size(), 5u);
  EXPECT_EQ(c.frames[0].height, 16);
  EXPECT_NE(c.frames[0], c.frames[4]);
}

}  // namespace
}  // namespace camvid
