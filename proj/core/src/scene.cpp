#include "camvid/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "camvid/rng.hpp"

namespace camvid {

namespace {

constexpr double kEps = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::Vector3d random_color(Rng& rng) {
  // Saturated-ish albedo: one strong channel, others random.
  Eigen::Vector3d c(rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9),
                    rng.uniform(0.1, 0.9));
  c[static_cast<int>(rng.below(3))] = rng.uniform(0.75, 1.0);
  return c;
}

CheckerTexture random_checker(Rng& rng, double cell) {
  CheckerTexture t;
  const double dark = rng.uniform(0.08, 0.3);
  const double light = rng.uniform(0.7, 0.95);
  const Eigen::Vector3d tint(rng.uniform(0.6, 1.0), rng.uniform(0.6, 1.0),
                             rng.uniform(0.6, 1.0));
  t.color_a = dark * tint;
  t.color_b = light * tint;
  t.cell = cell;
  return t;
}

std::optional<double> intersect_sphere(const Primitive& p,
                                       const Eigen::Vector3d& o,
                                       const Eigen::Vector3d& d) {
  const Eigen::Vector3d oc = o - p.center;
  const double a = d.squaredNorm();
  const double b = oc.dot(d);
  const double c = oc.squaredNorm() - p.radius * p.radius;
  const double disc = b * b - a * c;
  if (disc < 0) return std::nullopt;
  const double sq = std::sqrt(disc);
  double t = (-b - sq) / a;
  if (t <= kEps) t = (-b + sq) / a;
  if (t <= kEps) return std::nullopt;
  return t;
}

std::optional<std::pair<double, int>> intersect_box(const Primitive& p,
                                                    const Eigen::Vector3d& o,
                                                    const Eigen::Vector3d& d) {
  double tnear = -kInf;
  double tfar = kInf;
  int near_axis = 0;
  int far_axis = 0;
  for (int k = 0; k < 3; ++k) {
    const double lo = p.center[k] - p.half_extent[k];
    const double hi = p.center[k] + p.half_extent[k];
    if (d[k] == 0.0) {
      if (o[k] < lo || o[k] > hi) return std::nullopt;
      continue;
    }
    double t0 = (lo - o[k]) / d[k];
    double t1 = (hi - o[k]) / d[k];
    if (t0 > t1) std::swap(t0, t1);
    if (t0 > tnear) {
      tnear = t0;
      near_axis = k;
    }
    if (t1 < tfar) {
      tfar = t1;
      far_axis = k;
    }
    if (tnear > tfar) return std::nullopt;
  }
  if (tnear > kEps) return std::make_pair(tnear, near_axis);
  if (tfar > kEps) return std::make_pair(tfar, far_axis);
  return std::nullopt;
}

}  // namespace

const Eigen::Vector3d& CheckerTexture::lookup(double u, double v) const {
  const auto iu = static_cast<long long>(std::floor(u / cell));
  const auto iv = static_cast<long long>(std::floor(v / cell));
  return ((iu + iv) & 1) ? color_b : color_a;
}

double Primitive::bounding_radius() const {
  return kind == Kind::kSphere ? radius : half_extent.norm();
}

std::optional<Hit> trace(const Scene& scene, const Eigen::Vector3d& origin,
                         const Eigen::Vector3d& dir) {
  Hit best;
  best.t = kInf;

  for (std::size_t i = 0; i < scene.primitives.size(); ++i) {
    const Primitive& p = scene.primitives[i];
    if (p.kind == Primitive::Kind::kSphere) {
      if (auto t = intersect_sphere(p, origin, dir); t && *t < best.t) {
        best.t = *t;
        best.normal = (origin + *t * dir - p.center).normalized();
        best.albedo = p.albedo;
        best.primitive = static_cast<int>(i);
      }
    } else if (auto h = intersect_box(p, origin, dir); h && h->first < best.t) {
      best.t = h->first;
      best.normal = Eigen::Vector3d::Unit(h->second);
      best.albedo = p.albedo;
      best.primitive = static_cast<int>(i);
    }
  }

  // Room: exit face of the open-topped box.
  const Room& room = scene.room;
  double troom = kInf;
  int face = -1;  // 0..3 walls (-x, +x, -z, +z), 4 floor
  auto consider = [&](double t, int f) {
    if (t > kEps && t < troom) {
      troom = t;
      face = f;
    }
  };
  if (dir.x() < 0) consider((room.min.x() - origin.x()) / dir.x(), 0);
  if (dir.x() > 0) consider((room.max.x() - origin.x()) / dir.x(), 1);
  if (dir.z() < 0) consider((room.min.z() - origin.z()) / dir.z(), 2);
  if (dir.z() > 0) consider((room.max.z() - origin.z()) / dir.z(), 3);
  if (dir.y() < 0) consider((room.min.y() - origin.y()) / dir.y(), 4);
  if (face >= 0 && troom < best.t) {
    const Eigen::Vector3d p = origin + troom * dir;
    if (face < 4 && p.y() > room.max.y()) {
      face = -1;  // above the walls: open sky
    } else {
      best.t = troom;
      best.primitive = -1;
      switch (face) {
        case 0:
          best.normal = Eigen::Vector3d::UnitX();
          best.albedo = room.walls[0].lookup(p.z(), p.y());
          break;
        case 1:
          best.normal = -Eigen::Vector3d::UnitX();
          best.albedo = room.walls[1].lookup(p.z(), p.y());
          break;
        case 2:
          best.normal = Eigen::Vector3d::UnitZ();
          best.albedo = room.walls[2].lookup(p.x(), p.y());
          break;
        case 3:
          best.normal = -Eigen::Vector3d::UnitZ();
          best.albedo = room.walls[3].lookup(p.x(), p.y());
          break;
        default:
          best.normal = Eigen::Vector3d::UnitY();
          best.albedo = room.floor.lookup(p.x(), p.z());
          break;
      }
    }
  }

  if (!std::isfinite(best.t)) return std::nullopt;
  if (best.normal.dot(dir) > 0) best.normal = -best.normal;
  return best;
}

Eigen::Vector3d shade(const Scene& scene, const Hit& hit) {
  const double lambert = std::max(0.0, hit.normal.dot(scene.light_dir));
  return hit.albedo * (scene.ambient + scene.diffuse * lambert);
}

CameraPose canonical_start_pose() {
  return CameraPose::from(Eigen::Matrix3d::Identity(),
                          Eigen::Vector3d(0.0, 2.0, 0.0));
}

double focal_length_px(int width, const RenderOptions& options) {
  const double half = options.horizontal_fov_deg * std::numbers::pi / 360.0;
  return 0.5 * width / std::tan(half);
}

Eigen::Vector3d pixel_ray(const CameraPose& pose, int height, int width,
                          double px, double py, const RenderOptions& options) {
  const double f = focal_length_px(width, options);
  const Eigen::Vector3d cam((px - 0.5 * width) / f, -(py - 0.5 * height) / f,
                            -1.0);
  return pose.rotation() * cam;
}

Scene build_scene(std::uint64_t seed) {
  Rng rng(derive_seed(seed, "scene"));
  Scene scene;
  scene.seed = seed;

  const double cell = rng.uniform(0.6, 1.0);
  scene.room.floor = random_checker(rng, cell);
  for (auto& wall : scene.room.walls) wall = random_checker(rng, cell);

  scene.light_dir =
      Eigen::Vector3d(rng.uniform(-0.6, 0.6), 1.0, rng.uniform(-0.6, 0.6))
          .normalized();

  const Room& room = scene.room;
  const int count = 5 + static_cast<int>(rng.below(11));
  scene.primitives.reserve(count);
  for (int i = 0; i < count; ++i) {
    Primitive p;
    p.kind = rng.uniform() < 0.5 ? Primitive::Kind::kBox
                                 : Primitive::Kind::kSphere;
    p.albedo = random_color(rng);
    p.half_extent = Eigen::Vector3d(rng.uniform(0.25, 0.7),
                                    rng.uniform(0.25, 0.7),
                                    rng.uniform(0.25, 0.7));
    p.radius = rng.uniform(0.25, 0.7);
    const double r = p.bounding_radius();
    if (i == 0) {
      // In front of the canonical pose, well inside its frustum.
      p.center = Eigen::Vector3d(rng.uniform(-0.8, 0.8), rng.uniform(1.5, 2.5),
                                 rng.uniform(-3.0, -2.2));
    } else {
      const double lo_x = room.min.x() + r + 0.05;
      const double hi_x = room.max.x() - r - 0.05;
      const double lo_z = room.min.z() + r + 0.05;
      const double hi_z = room.max.z() - r - 0.05;
      const bool on_floor = rng.uniform() < 0.6;
      const double y = on_floor
                           ? (p.kind == Primitive::Kind::kBox
                                  ? p.half_extent.y()
                                  : p.radius)
                           : rng.uniform(r + 0.3, 4.5);
      p.center = Eigen::Vector3d(rng.uniform(lo_x, hi_x), y,
                                 rng.uniform(lo_z, hi_z));
    }
    scene.primitives.push_back(p);
  }
  return scene;
}

std::uint64_t scene_digest(const Scene& scene) {
  Fnv1a h;
  h.update_value(scene.primitives.size());
  for (const Primitive& p : scene.primitives) {
    h.update_value(p.kind);
    for (int k = 0; k < 3; ++k) {
      h.update_value(p.center[k]);
      h.update_value(p.half_extent[k]);
      h.update_value(p.albedo[k]);
    }
    h.update_value(p.radius);
  }
  return h.digest();
}

Image render_frame(const Scene& scene, const CameraPose& pose, int height,
                   int width, const RenderOptions& options) {
  if (height < 8 || width < 8) {
    throw std::invalid_argument("render_frame: H and W must be >= 8");
  }
  if (options.supersample < 1) {
    throw std::invalid_argument("render_frame: supersample must be >= 1");
  }
  Image img(height, width);
  const int s = options.supersample;
  const double inv = 1.0 / double(s * s);
  const Eigen::Vector3d& origin = pose.translation();
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      Eigen::Vector3d acc = Eigen::Vector3d::Zero();
      for (int sy = 0; sy < s; ++sy) {
        for (int sx = 0; sx < s; ++sx) {
          const double px = x + (sx + 0.5) / s;
          const double py = y + (sy + 0.5) / s;
          const Eigen::Vector3d dir =
              pixel_ray(pose, height, width, px, py, options);
          const auto hit = trace(scene, origin, dir);
          acc += hit ? shade(scene, *hit) : scene.sky;
        }
      }
      acc *= inv;
      for (int c = 0; c < 3; ++c) {
        const double v = std::clamp(acc[c], 0.0, 1.0);
        img.at(y, x, c) = static_cast<std::uint8_t>(std::lround(v * 255.0));
      }
    }
  }
  return img;
}

CameraClip render_clip(const Scene& scene, const CameraPath& path, int height,
                       int width, const RenderOptions& options) {
  if (path.size() < 1) throw std::invalid_argument("render_clip: empty path");
  CameraClip clip;
  clip.path = path;
  clip.scene_seed = scene.seed;
  clip.frames.reserve(path.size());
  for (const CameraPose& pose : path.poses) {
    clip.frames.push_back(render_frame(scene, pose, height, width, options));
  }
  return clip;
}

}  // namespace camvid
