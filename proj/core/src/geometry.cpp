#include "camvid/geometry.hpp"

#include <Eigen/Geometry>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "camvid/binary_io.hpp"
#include "camvid/rng.hpp"

namespace camvid {

CameraPose::CameraPose()
    : rotation_(Eigen::Matrix3d::Identity()),
      translation_(Eigen::Vector3d::Zero()) {}

CameraPose CameraPose::from(const Eigen::Matrix3d& rotation,
                            const Eigen::Vector3d& translation) {
  if (!rotation.allFinite() || !translation.allFinite()) {
    throw std::invalid_argument("CameraPose: non-finite entries");
  }
  const double ortho =
      (rotation.transpose() * rotation - Eigen::Matrix3d::Identity())
          .cwiseAbs()
          .maxCoeff();
  if (ortho >= kTolerance) {
    throw std::invalid_argument("CameraPose: rotation is not orthonormal");
  }
  if (std::abs(rotation.determinant() - 1.0) >= kTolerance) {
    throw std::invalid_argument("CameraPose: rotation determinant is not +1");
  }
  return CameraPose(rotation, translation, Unchecked{});
}

CameraPose CameraPose::inverse() const {
  const Eigen::Matrix3d rt = rotation_.transpose();
  return CameraPose(rt, -(rt * translation_), Unchecked{});
}

CameraPose compose(const CameraPose& a, const CameraPose& b) {
  return CameraPose(a.rotation_ * b.rotation_,
                    a.rotation_ * b.translation_ + a.translation_,
                    CameraPose::Unchecked{});
}

double pose_distance(const CameraPose& a, const CameraPose& b) {
  const double dr = (a.rotation() - b.rotation()).cwiseAbs().maxCoeff();
  const double dt = (a.translation() - b.translation()).cwiseAbs().maxCoeff();
  return std::max(dr, dt);
}

Eigen::Matrix3d rot_x(double radians) {
  return Eigen::AngleAxisd(radians, Eigen::Vector3d::UnitX())
      .toRotationMatrix();
}
Eigen::Matrix3d rot_y(double radians) {
  return Eigen::AngleAxisd(radians, Eigen::Vector3d::UnitY())
      .toRotationMatrix();
}
Eigen::Matrix3d rot_z(double radians) {
  return Eigen::AngleAxisd(radians, Eigen::Vector3d::UnitZ())
      .toRotationMatrix();
}

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& rotvec) {
  const double angle = rotvec.norm();
  if (angle == 0.0) return Eigen::Matrix3d::Identity();
  return Eigen::AngleAxisd(angle, rotvec / angle).toRotationMatrix();
}

Eigen::Vector3d log_so3(const Eigen::Matrix3d& rotation) {
  const Eigen::AngleAxisd aa(rotation);
  return aa.angle() * aa.axis();
}

CameraPose pose_from_delta(const Eigen::Vector3d& rotvec,
                           const Eigen::Vector3d& translation) {
  return CameraPose(exp_so3(rotvec), translation, CameraPose::Unchecked{});
}

int direction_lambda(Direction d) { return static_cast<int>(d) + 1; }

Direction direction_from_lambda(int lambda) {
  if (lambda < 1 || lambda > 7) {
    throw std::invalid_argument("direction lambda must be in 1..7, got " +
                                std::to_string(lambda));
  }
  return static_cast<Direction>(lambda - 1);
}

std::string_view direction_name(Direction d) {
  switch (d) {
    case Direction::kLeft: return "left";
    case Direction::kRight: return "right";
    case Direction::kUp: return "up";
    case Direction::kDown: return "down";
    case Direction::kForward: return "forward";
    case Direction::kBackward: return "backward";
    case Direction::kStationary: return "stationary";
  }
  return "?";
}

Direction parse_direction(std::string_view name) {
  for (Direction d : kAllDirections) {
    if (direction_name(d) == name) return d;
  }
  std::string msg = "unknown direction '" + std::string(name) +
                    "'; valid directions:";
  for (Direction d : kAllDirections) {
    msg += ' ';
    msg += direction_name(d);
  }
  throw std::invalid_argument(msg);
}

Eigen::Vector3d camera_axis(Direction d) {
  switch (d) {
    case Direction::kLeft: return {-1, 0, 0};
    case Direction::kRight: return {1, 0, 0};
    case Direction::kUp: return {0, 1, 0};
    case Direction::kDown: return {0, -1, 0};
    case Direction::kForward: return {0, 0, -1};
    case Direction::kBackward: return {0, 0, 1};
    case Direction::kStationary: return {0, 0, 0};
  }
  return {0, 0, 0};
}

CameraPath cardinal_path(const CameraPose& start, Direction d, int n,
                         double speed) {
  if (n < 1) throw std::invalid_argument("cardinal_path: n must be >= 1");
  if (!(speed >= 0.0)) {
    throw std::invalid_argument("cardinal_path: speed must be >= 0");
  }
  const Eigen::Vector3d step = start.rotation() * (speed * camera_axis(d));
  CameraPath path;
  path.poses.reserve(n);
  for (int i = 0; i < n; ++i) {
    path.poses.push_back(CameraPose::from(
        start.rotation(), start.translation() + double(i) * step));
  }
  return path;
}

namespace {

Eigen::Vector3d unit_sphere(Rng& rng) {
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

}  // namespace

CameraPath random_path(const CameraPose& start, int n, std::uint64_t seed,
                       const RandomPathOptions& options) {
  if (n < 2) throw std::invalid_argument("random_path: n must be >= 2");
  if (options.speed_min < 0 || options.speed_max < options.speed_min) {
    throw std::invalid_argument("random_path: bad speed range");
  }
  Rng rng(seed);
  const Eigen::Vector3d dir = unit_sphere(rng);
  const double speed = rng.uniform(options.speed_min, options.speed_max);
  Eigen::Vector3d rotvec = Eigen::Vector3d::Zero();
  if (options.rotation_cap > 0.0) {
    const Eigen::Vector3d axis = unit_sphere(rng);
    rotvec = axis * rng.uniform(0.0, options.rotation_cap);
  }
  const CameraPose delta = pose_from_delta(rotvec, speed * dir);
  CameraPath path;
  path.poses.reserve(n);
  path.poses.push_back(start);
  for (int i = 1; i < n; ++i) {
    path.poses.push_back(compose(path.poses.back(), delta));
  }
  return path;
}

CameraSignal path_to_signal(const CameraPath& path) {
  CameraSignal sig;
  sig.values.assign(std::size_t(path.size()) * CameraSignal::kFrameWidth, 0.0);
  for (int i = 1; i < path.size(); ++i) {
    const CameraPose& prev = path.poses[i - 1];
    const CameraPose& cur = path.poses[i];
    const Eigen::Matrix3d prev_rt = prev.rotation().transpose();
    const Eigen::Vector3d dt =
        prev_rt * (cur.translation() - prev.translation());
    const Eigen::Vector3d dr = log_so3(prev_rt * cur.rotation());
    double* out = sig.values.data() + std::size_t(i) * 6;
    for (int k = 0; k < 3; ++k) {
      out[k] = dt[k];
      out[3 + k] = dr[k];
    }
  }
  return sig;
}

CameraPath signal_to_path(const CameraSignal& signal,
                          const CameraPose& start) {
  const std::size_t len = signal.values.size();
  if (len == 0 || len % CameraSignal::kFrameWidth != 0) {
    throw std::invalid_argument(
        "signal_to_path: length " + std::to_string(len) +
        " is not a positive multiple of 6");
  }
  const int n = static_cast<int>(len / 6);
  CameraPath path;
  path.poses.reserve(n);
  path.poses.push_back(start);
  for (int i = 1; i < n; ++i) {
    const double* v = signal.values.data() + std::size_t(i) * 6;
    const CameraPose delta = pose_from_delta(
        Eigen::Vector3d(v[3], v[4], v[5]), Eigen::Vector3d(v[0], v[1], v[2]));
    path.poses.push_back(compose(path.poses.back(), delta));
  }
  return path;
}

std::vector<double> sinusoid_signature(Direction d, int m) {
  if (m < 2) throw std::invalid_argument("sinusoid_signature: m must be >= 2");
  const double lambda = direction_lambda(d);
  std::vector<double> s(m);
  for (int k = 0; k < m; ++k) {
    s[k] = std::sin(std::numbers::pi * lambda * k / double(m - 1));
  }
  return s;
}

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

std::string format_poses(const CameraPath& poses, std::string_view comment) {
  std::string out;
  if (!comment.empty()) {
    out += "# ";
    out += comment;
    out += '\n';
  }
  for (const CameraPose& p : poses.poses) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        append_double(out, p.rotation()(r, c));
        out += ' ';
      }
      append_double(out, p.translation()[r]);
      out += r == 2 ? '\n' : ' ';
    }
  }
  return out;
}

CameraPath parse_poses(std::string_view text, const std::string& source) {
  CameraPath path;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double v[12];
    for (double& x : v) {
      if (!(ls >> x)) {
        throw IoError(source + ":" + std::to_string(lineno) +
                      ": expected 12 numbers");
      }
    }
    std::string extra;
    if (ls >> extra) {
      throw IoError(source + ":" + std::to_string(lineno) +
                    ": more than 12 numbers");
    }
    Eigen::Matrix3d r;
    Eigen::Vector3d t;
    for (int row = 0; row < 3; ++row) {
      for (int c = 0; c < 3; ++c) r(row, c) = v[row * 4 + c];
      t[row] = v[row * 4 + 3];
    }
    try {
      path.poses.push_back(CameraPose::from(r, t));
    } catch (const std::invalid_argument& e) {
      throw IoError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return path;
}

void write_poses(const std::filesystem::path& path, const CameraPath& poses,
                 std::string_view comment) {
  write_file_atomic(path, format_poses(poses, comment));
}

CameraPath read_poses(const std::filesystem::path& path) {
  return parse_poses(read_text_file(path), path.string());
}

}  // namespace camvid
