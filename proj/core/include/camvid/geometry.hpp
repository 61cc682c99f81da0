#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace camvid {

// Rigid camera-to-world transform x_world = R * x_cam + t. The camera frame is
// right-handed: +x right, +y up, looking down -z.
class CameraPose {
 public:
  static constexpr double kTolerance = 1e-9;

  CameraPose();  // identity

  // Throws std::invalid_argument unless R is orthonormal with det +1 to within
  // kTolerance and every entry is finite.
  static CameraPose from(const Eigen::Matrix3d& rotation,
                         const Eigen::Vector3d& translation);

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }

  CameraPose inverse() const;
  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return rotation_ * p + translation_;
  }

 private:
  struct Unchecked {};
  CameraPose(const Eigen::Matrix3d& r, const Eigen::Vector3d& t, Unchecked)
      : rotation_(r), translation_(t) {}

  friend CameraPose compose(const CameraPose& a, const CameraPose& b);
  friend CameraPose pose_from_delta(const Eigen::Vector3d& rotvec,
                                    const Eigen::Vector3d& translation);

  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

// Rigid transform "apply b, then a".
CameraPose compose(const CameraPose& a, const CameraPose& b);

// Max-abs difference over rotation and translation entries.
double pose_distance(const CameraPose& a, const CameraPose& b);

Eigen::Matrix3d rot_x(double radians);
Eigen::Matrix3d rot_y(double radians);
Eigen::Matrix3d rot_z(double radians);

// Axis-angle <-> rotation matrix.
Eigen::Matrix3d exp_so3(const Eigen::Vector3d& rotvec);
Eigen::Vector3d log_so3(const Eigen::Matrix3d& rotation);

// Pose from an axis-angle rotation and a translation.
CameraPose pose_from_delta(const Eigen::Vector3d& rotvec,
                           const Eigen::Vector3d& translation);

enum class Direction : std::uint8_t {
  kLeft,
  kRight,
  kUp,
  kDown,
  kForward,
  kBackward,
  kStationary,
};

inline constexpr std::array<Direction, 7> kAllDirections = {
    Direction::kLeft,    Direction::kRight,    Direction::kUp,
    Direction::kDown,    Direction::kForward,  Direction::kBackward,
    Direction::kStationary,
};

// lambda in 1..7, in listing order.
int direction_lambda(Direction d);
Direction direction_from_lambda(int lambda);
std::string_view direction_name(Direction d);
// Throws std::invalid_argument listing the seven valid names.
Direction parse_direction(std::string_view name);
// Unit translation axis in the camera frame (zero for stationary).
Eigen::Vector3d camera_axis(Direction d);

struct CameraPath {
  std::vector<CameraPose> poses;

  int size() const { return static_cast<int>(poses.size()); }
};

// Per frame: 3 translation deltas then 3 axis-angle rotation deltas, each the
// relative motion pose[i-1]^-1 * pose[i] expressed in the previous camera
// frame. Frame 0 is always the zero vector, so values.size() == 6 * n.
struct CameraSignal {
  static constexpr int kFrameWidth = 6;
  std::vector<double> values;

  int frames() const { return static_cast<int>(values.size()) / kFrameWidth; }
};

// n poses with rotation fixed to start.rotation() and translation advancing
// by `speed` per frame along the camera axis of d. Throws on speed < 0 or
// n < 1.
CameraPath cardinal_path(const CameraPose& start, Direction d, int n,
                         double speed);

struct RandomPathOptions {
  double speed_min = 0.02;
  double speed_max = 0.15;
  // Maximum per-frame axis-angle magnitude; 0 keeps the rotation fixed.
  double rotation_cap = 0.0;
};

// Evenly spaced path: a uniform direction on the unit sphere, a uniform speed
// in [speed_min, speed_max] and an optional constant per-frame rotation, all
// drawn from `seed`. Requires n >= 2.
CameraPath random_path(const CameraPose& start, int n, std::uint64_t seed,
                       const RandomPathOptions& options = {});

CameraSignal path_to_signal(const CameraPath& path);

// Integrates the deltas from `start`. Frame 0 of the signal is ignored, so
// the first pose is always `start`. Throws unless the length is a nonzero
// multiple of 6.
CameraPath signal_to_path(const CameraSignal& signal, const CameraPose& start);

// s[k] = sin(pi * lambda_d * k / (m - 1)) for k = 0..m-1. Requires m >= 2.
std::vector<double> sinusoid_signature(Direction d, int m);

// Pose file: one pose per line, 12 decimals for the row-major 3x4 [R|t];
// lines starting with '#' are comments.
void write_poses(const std::filesystem::path& path, const CameraPath& poses,
                 std::string_view comment = {});
CameraPath read_poses(const std::filesystem::path& path);
std::string format_poses(const CameraPath& poses, std::string_view comment);
CameraPath parse_poses(std::string_view text, const std::string& source);

}  // namespace camvid
