#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "camvid/geometry.hpp"
#include "camvid/image.hpp"

namespace camvid {

struct CheckerTexture {
  Eigen::Vector3d color_a = Eigen::Vector3d::Constant(0.2);
  Eigen::Vector3d color_b = Eigen::Vector3d::Constant(0.8);
  double cell = 1.0;  // world units per checker square

  const Eigen::Vector3d& lookup(double u, double v) const;
};

// Axis-aligned box or sphere with a diffuse albedo.
struct Primitive {
  enum class Kind : std::uint8_t { kBox, kSphere };
  Kind kind = Kind::kBox;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d half_extent = Eigen::Vector3d::Constant(0.5);  // box
  double radius = 0.5;                                          // sphere
  Eigen::Vector3d albedo = Eigen::Vector3d::Constant(0.5);

  double bounding_radius() const;
};

// Open-topped box: textured floor at y = min.y and four textured walls.
// Walls are ordered -x, +x, -z, +z.
struct Room {
  Eigen::Vector3d min{-4.0, 0.0, -4.0};
  Eigen::Vector3d max{4.0, 10.0, 4.0};
  CheckerTexture floor;
  std::array<CheckerTexture, 4> walls;
};

struct Scene {
  std::uint64_t seed = 0;
  std::vector<Primitive> primitives;
  Room room;
  Eigen::Vector3d light_dir{0.0, 1.0, 0.0};  // unit, points toward the light
  Eigen::Vector3d sky = Eigen::Vector3d::Constant(0.55);
  double ambient = 0.45;
  double diffuse = 0.55;
};

struct RenderOptions {
  double horizontal_fov_deg = 60.0;
  // s x s regular subpixel grid per pixel; 1 gives one center ray.
  int supersample = 2;
};

struct Hit {
  double t = 0.0;
  Eigen::Vector3d normal = Eigen::Vector3d::Zero();  // faces the ray origin
  Eigen::Vector3d albedo = Eigen::Vector3d::Zero();
  int primitive = -1;  // -1 for floor/walls
};

// Nearest hit along origin + t * dir for t > 0, or nullopt for sky.
std::optional<Hit> trace(const Scene& scene, const Eigen::Vector3d& origin,
                         const Eigen::Vector3d& dir);

// Linear RGB for a hit: albedo * (ambient + diffuse * max(0, n.l)).
Eigen::Vector3d shade(const Scene& scene, const Hit& hit);

// Pose used to guarantee scene content is visible: (0, 2, 0) looking down -z.
CameraPose canonical_start_pose();

// Focal length in pixels for the given width and horizontal field of view.
double focal_length_px(int width, const RenderOptions& options);

// World-space ray direction (unnormalized) through image point (px, py),
// measured in pixels from the top-left corner.
Eigen::Vector3d pixel_ray(const CameraPose& pose, int height, int width,
                          double px, double py, const RenderOptions& options);

// Deterministic scene with 5-15 primitives, all inside the room, and at least
// one primitive inside the canonical start pose's view frustum.
Scene build_scene(std::uint64_t seed);

std::uint64_t scene_digest(const Scene& scene);

Image render_frame(const Scene& scene, const CameraPose& pose, int height,
                   int width, const RenderOptions& options = {});

struct CameraClip {
  Frames frames;
  CameraPath path;
  std::uint64_t scene_seed = 0;
};

CameraClip render_clip(const Scene& scene, const CameraPath& path, int height,
                       int width, const RenderOptions& options = {});

}  // namespace camvid
