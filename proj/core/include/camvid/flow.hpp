#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "camvid/geometry.hpp"
#include "camvid/image.hpp"

namespace camvid {

struct FlowParams {
  int levels = 3;        // pyramid levels, factor 2
  int iterations = 100;  // Jacobi iterations per warp
  double alpha = 0.3;    // smoothness weight (intensities in [0, 1])
  int warps = 2;         // re-linearisations per level
};

// Dense displacement from the first frame to the second, in pixels:
// f2(x + u, y + v) ~ f1(x, y).
struct FlowField {
  int height = 0;
  int width = 0;
  std::vector<double> u;
  std::vector<double> v;

  double mean_u() const;
  double mean_v() const;
};

// Coarse-to-fine Horn-Schunck with bilinear warping. Throws
// std::invalid_argument on shape mismatch.
FlowField estimate_flow(const GrayImage& f1, const GrayImage& f2,
                        const FlowParams& params = {});
FlowField estimate_flow(const Image& f1, const Image& f2,
                        const FlowParams& params = {});

// Per-transition pixel-mean flow and its sum over transitions. `radial` is
// the pixel-mean flow component pointing away from the image centre, which
// separates forward/backward motion (zero mean flow) from stationarity.
struct FlowSummary {
  std::vector<Eigen::Vector2d> per_transition;  // n - 1 rows
  Eigen::Vector2d aggregate = Eigen::Vector2d::Zero();
  std::vector<double> radial;  // n - 1
  double aggregate_radial = 0.0;

  int frames() const { return static_cast<int>(per_transition.size()) + 1; }
};

// Requires at least two frames.
FlowSummary summarize_flow(const Frames& frames, const FlowParams& params = {});

// ((dx)^2 + (dy)^2) / 2 over the two aggregate vectors. Throws when the
// summaries come from clips of different length.
double flow_mse(const FlowSummary& generated, const FlowSummary& truth);

enum class FlowAxis : std::uint8_t { kNone, kX, kY, kRadial };

char flow_axis_code(FlowAxis axis);

struct MotionCall {
  Direction direction = Direction::kStationary;
  FlowAxis axis = FlowAxis::kNone;
};

struct MotionClassifier {
  // Stationary when both the aggregate norm and the weighted radial
  // component stay below this many pixels per transition.
  double stationary_px_per_transition = 0.1;
  // Radial flow averages |r| over the frame, which is smaller than the
  // focal length that scales lateral flow; this weight puts them on par.
  double radial_weight = 2.0;

  // Image content moving left means the camera moved right, and so on.
  MotionCall classify(const FlowSummary& summary) const;
};

}  // namespace camvid
