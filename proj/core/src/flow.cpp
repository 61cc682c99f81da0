#include "camvid/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace camvid {

namespace {

double sample_clamped(const GrayImage& img, int y, int x) {
  y = std::clamp(y, 0, img.height - 1);
  x = std::clamp(x, 0, img.width - 1);
  return img.at(y, x);
}

double bilinear(const GrayImage& img, double y, double x) {
  y = std::clamp(y, 0.0, double(img.height - 1));
  x = std::clamp(x, 0.0, double(img.width - 1));
  const int y0 = static_cast<int>(std::floor(y));
  const int x0 = static_cast<int>(std::floor(x));
  const double fy = y - y0;
  const double fx = x - x0;
  const double a = sample_clamped(img, y0, x0);
  const double b = sample_clamped(img, y0, x0 + 1);
  const double c = sample_clamped(img, y0 + 1, x0);
  const double d = sample_clamped(img, y0 + 1, x0 + 1);
  return (1 - fy) * ((1 - fx) * a + fx * b) + fy * ((1 - fx) * c + fx * d);
}

// Separable [1 2 1] / 4 blur with replicated border.
GrayImage blur(const GrayImage& src) {
  GrayImage tmp(src.height, src.width);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      tmp.at(y, x) = 0.25 * (sample_clamped(src, y, x - 1) +
                             sample_clamped(src, y, x + 1)) +
                     0.5 * src.at(y, x);
    }
  }
  GrayImage dst(src.height, src.width);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      dst.at(y, x) = 0.25 * (sample_clamped(tmp, y - 1, x) +
                             sample_clamped(tmp, y + 1, x)) +
                     0.5 * tmp.at(y, x);
    }
  }
  return dst;
}

// Blur, then 2x2 box average: the combined [1 3 3 1] / 8 kernel keeps the
// coarse pixel centred on the four fine pixels it covers and suppresses the
// aliasing plain 2x2 averaging leaves on fine textures.
GrayImage downsample(const GrayImage& fine) {
  const GrayImage src = blur(fine);
  const int h = (src.height + 1) / 2;
  const int w = (src.width + 1) / 2;
  GrayImage dst(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      dst.at(y, x) = 0.25 * (sample_clamped(src, 2 * y, 2 * x) +
                             sample_clamped(src, 2 * y, 2 * x + 1) +
                             sample_clamped(src, 2 * y + 1, 2 * x) +
                             sample_clamped(src, 2 * y + 1, 2 * x + 1));
    }
  }
  return dst;
}

// Bilinear upsampling of a coarse flow component to (h, w), scaled by the
// resolution ratio.
GrayImage upsample_flow(const GrayImage& coarse, int h, int w) {
  GrayImage fine(h, w);
  const double sy = double(coarse.height) / h;
  const double sx = double(coarse.width) / w;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      fine.at(y, x) = bilinear(coarse, (y + 0.5) * sy - 0.5,
                               (x + 0.5) * sx - 0.5) /
                      sx;
    }
  }
  return fine;
}

// Weighted 8-neighbour average (1/6 edges, 1/12 corners), replicated border.
double neighbour_mean(const GrayImage& f, int y, int x) {
  return (sample_clamped(f, y - 1, x) + sample_clamped(f, y + 1, x) +
          sample_clamped(f, y, x - 1) + sample_clamped(f, y, x + 1)) /
             6.0 +
         (sample_clamped(f, y - 1, x - 1) + sample_clamped(f, y - 1, x + 1) +
          sample_clamped(f, y + 1, x - 1) + sample_clamped(f, y + 1, x + 1)) /
             12.0;
}

void horn_schunck_level(const GrayImage& i1, const GrayImage& i2,
                        const FlowParams& params, GrayImage& u, GrayImage& v) {
  const int h = i1.height;
  const int w = i1.width;
  const double alpha2 = params.alpha * params.alpha;
  GrayImage ix(h, w), iy(h, w), it(h, w), warped(h, w);
  GrayImage u0(h, w), v0(h, w), un(h, w), vn(h, w);
  for (int warp = 0; warp < params.warps; ++warp) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        warped.at(y, x) = bilinear(i2, y + v.at(y, x), x + u.at(y, x));
      }
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double dx1 =
            0.5 * (sample_clamped(i1, y, x + 1) - sample_clamped(i1, y, x - 1));
        const double dx2 = 0.5 * (sample_clamped(warped, y, x + 1) -
                                  sample_clamped(warped, y, x - 1));
        const double dy1 =
            0.5 * (sample_clamped(i1, y + 1, x) - sample_clamped(i1, y - 1, x));
        const double dy2 = 0.5 * (sample_clamped(warped, y + 1, x) -
                                  sample_clamped(warped, y - 1, x));
        // Pixels whose match falls outside the second frame carry no data
        // term; their flow comes from the smoothness term alone.
        const double wx = x + u.at(y, x);
        const double wy = y + v.at(y, x);
        const bool inside = wx >= 0.0 && wx <= w - 1 && wy >= 0.0 && wy <= h - 1;
        ix.at(y, x) = inside ? 0.5 * (dx1 + dx2) : 0.0;
        iy.at(y, x) = inside ? 0.5 * (dy1 + dy2) : 0.0;
        it.at(y, x) = inside ? warped.at(y, x) - i1.at(y, x) : 0.0;
      }
    }
    u0 = u;
    v0 = v;
    for (int iter = 0; iter < params.iterations; ++iter) {
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const double ub = neighbour_mean(u, y, x);
          const double vb = neighbour_mean(v, y, x);
          const double gx = ix.at(y, x);
          const double gy = iy.at(y, x);
          const double rho = it.at(y, x) + gx * (ub - u0.at(y, x)) +
                             gy * (vb - v0.at(y, x));
          const double k = rho / (alpha2 + gx * gx + gy * gy);
          un.at(y, x) = ub - gx * k;
          vn.at(y, x) = vb - gy * k;
        }
      }
      std::swap(u.data, un.data);
      std::swap(v.data, vn.data);
    }
  }
}

}  // namespace

double FlowField::mean_u() const {
  double s = 0.0;
  for (double x : u) s += x;
  return u.empty() ? 0.0 : s / double(u.size());
}

double FlowField::mean_v() const {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / double(v.size());
}

FlowField estimate_flow(const GrayImage& f1, const GrayImage& f2,
                        const FlowParams& params) {
  if (f1.height != f2.height || f1.width != f2.width) {
    throw std::invalid_argument("estimate_flow: frames differ in shape");
  }
  if (params.levels < 1 || params.iterations < 0 || params.warps < 1) {
    throw std::invalid_argument("estimate_flow: bad parameters");
  }
  std::vector<GrayImage> p1{f1};
  std::vector<GrayImage> p2{f2};
  while (static_cast<int>(p1.size()) < params.levels &&
         p1.back().height >= 8 && p1.back().width >= 8) {
    p1.push_back(downsample(p1.back()));
    p2.push_back(downsample(p2.back()));
  }
  const int top = static_cast<int>(p1.size()) - 1;
  GrayImage u(p1[top].height, p1[top].width);
  GrayImage v(p1[top].height, p1[top].width);
  for (int level = top; level >= 0; --level) {
    if (level != top) {
      u = upsample_flow(u, p1[level].height, p1[level].width);
      v = upsample_flow(v, p1[level].height, p1[level].width);
    }
    horn_schunck_level(blur(p1[level]), blur(p2[level]), params, u, v);
  }
  FlowField out;
  out.height = f1.height;
  out.width = f1.width;
  out.u = std::move(u.data);
  out.v = std::move(v.data);
  return out;
}

FlowField estimate_flow(const Image& f1, const Image& f2,
                        const FlowParams& params) {
  return estimate_flow(to_gray(f1), to_gray(f2), params);
}

FlowSummary summarize_flow(const Frames& frames, const FlowParams& params) {
  if (frames.size() < 2) {
    throw std::invalid_argument("summarize_flow: need at least two frames");
  }
  FlowSummary s;
  std::vector<GrayImage> gray;
  gray.reserve(frames.size());
  for (const Image& f : frames) gray.push_back(to_gray(f));
  for (std::size_t i = 0; i + 1 < gray.size(); ++i) {
    const FlowField f = estimate_flow(gray[i], gray[i + 1], params);
    s.per_transition.emplace_back(f.mean_u(), f.mean_v());
    double radial = 0.0;
    for (int y = 0; y < f.height; ++y) {
      for (int x = 0; x < f.width; ++x) {
        const double dx = x + 0.5 - 0.5 * f.width;
        const double dy = y + 0.5 - 0.5 * f.height;
        const double r = std::hypot(dx, dy);
        const std::size_t k = std::size_t(y) * f.width + x;
        radial += (f.u[k] * dx + f.v[k] * dy) / r;
      }
    }
    s.radial.push_back(radial / double(f.u.size()));
  }
  for (const Eigen::Vector2d& row : s.per_transition) s.aggregate += row;
  for (double r : s.radial) s.aggregate_radial += r;
  return s;
}

double flow_mse(const FlowSummary& generated, const FlowSummary& truth) {
  if (generated.per_transition.size() != truth.per_transition.size()) {
    throw std::invalid_argument("flow_mse: clips differ in frame count");
  }
  const Eigen::Vector2d d = generated.aggregate - truth.aggregate;
  return 0.5 * (d.x() * d.x() + d.y() * d.y());
}

char flow_axis_code(FlowAxis axis) {
  switch (axis) {
    case FlowAxis::kX: return 'x';
    case FlowAxis::kY: return 'y';
    case FlowAxis::kRadial: return 'z';
    case FlowAxis::kNone: break;
  }
  return '-';
}

MotionCall MotionClassifier::classify(const FlowSummary& summary) const {
  const double transitions = static_cast<double>(summary.per_transition.size());
  const double threshold = stationary_px_per_transition * transitions;
  const double ax = std::abs(summary.aggregate.x());
  const double ay = std::abs(summary.aggregate.y());
  const double ar = radial_weight * std::abs(summary.aggregate_radial);
  if (summary.aggregate.norm() < threshold && ar < threshold) {
    return {Direction::kStationary, FlowAxis::kNone};
  }
  if (ax >= ay && ax >= ar) {
    return {summary.aggregate.x() < 0 ? Direction::kRight : Direction::kLeft,
            FlowAxis::kX};
  }
  if (ay >= ar) {
    return {summary.aggregate.y() > 0 ? Direction::kUp : Direction::kDown,
            FlowAxis::kY};
  }
  return {summary.aggregate_radial > 0 ? Direction::kForward
                                       : Direction::kBackward,
          FlowAxis::kRadial};
}

}  // namespace camvid
