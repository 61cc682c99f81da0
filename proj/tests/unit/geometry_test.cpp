#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "camvid/geometry.hpp"
#include "camvid/rng.hpp"

namespace camvid {
namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Textbook triple loop, kept independent of Eigen.
Mat3 naive_multiply(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

Mat3 naive_rot_z(double t) {
  return {{{std::cos(t), -std::sin(t), 0}, {std::sin(t), std::cos(t), 0},
           {0, 0, 1}}};
}

Mat3 naive_rot_y(double t) {
  return {{{std::cos(t), 0, std::sin(t)}, {0, 1, 0},
           {-std::sin(t), 0, std::cos(t)}}};
}

CameraPose random_pose(Rng& rng, double angle_scale = 3.0) {
  const Eigen::Vector3d w(rng.normal(), rng.normal(), rng.normal());
  const Eigen::Vector3d t(rng.normal(), rng.normal(), rng.normal());
  return CameraPose::from(exp_so3(w.normalized() * angle_scale * rng.uniform()),
                          t * 3.0);
}

constexpr double kDeg90 = std::numbers::pi / 2;

TEST(Pose, ComposeWithIdentityIsNoop) {
  Rng rng(1);
  const CameraPose p = random_pose(rng);
  EXPECT_EQ(pose_distance(compose(CameraPose(), p), p), 0.0);
  EXPECT_EQ(pose_distance(compose(p, CameraPose()), p), 0.0);
}

TEST(Pose, ComposeWithInverseIsIdentity) {
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const CameraPose p = random_pose(rng);
    EXPECT_LT(pose_distance(compose(p, p.inverse()), CameraPose()), 1e-9);
    EXPECT_LT(pose_distance(compose(p.inverse(), p), CameraPose()), 1e-9);
  }
}

TEST(Pose, QuarterTurnsMatchNaiveProduct) {
  const CameraPose q = CameraPose::from(rot_z(kDeg90), Eigen::Vector3d::Zero());
  const CameraPose half = compose(q, q);
  const Mat3 expect = naive_multiply(naive_rot_z(kDeg90), naive_rot_z(kDeg90));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(half.rotation()(i, j), expect[i][j], 1e-15);
    }
  }
  EXPECT_NEAR(half.rotation()(0, 0), -1.0, 1e-15);
  EXPECT_NEAR(half.rotation()(1, 1), -1.0, 1e-15);
}

TEST(Pose, ComposeAppliesRightOperandFirst) {
  Rng rng(3);
  const CameraPose a = random_pose(rng);
  const CameraPose b = random_pose(rng);
  const Eigen::Vector3d x(0.3, -1.2, 2.5);
  EXPECT_LT((compose(a, b).apply(x) - a.apply(b.apply(x))).norm(), 1e-12);
}

TEST(Pose, ComposeIsAssociative) {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const CameraPose a = random_pose(rng);
    const CameraPose b = random_pose(rng);
    const CameraPose c = random_pose(rng);
    EXPECT_LT(pose_distance(compose(compose(a, b), c), compose(a, compose(b, c))),
              1e-9);
  }
}

TEST(Pose, RejectsInvalidRotations) {
  Eigen::Matrix3d scaled = Eigen::Matrix3d::Identity() * 1.01;
  EXPECT_THROW(CameraPose::from(scaled, Eigen::Vector3d::Zero()),
               std::invalid_argument);
  Eigen::Matrix3d reflect = Eigen::Matrix3d::Identity();
  reflect(2, 2) = -1;
  EXPECT_THROW(CameraPose::from(reflect, Eigen::Vector3d::Zero()),
               std::invalid_argument);
  Eigen::Matrix3d nan = Eigen::Matrix3d::Identity();
  nan(0, 1) = std::nan("");
  EXPECT_THROW(CameraPose::from(nan, Eigen::Vector3d::Zero()),
               std::invalid_argument);
  EXPECT_THROW(CameraPose::from(Eigen::Matrix3d::Identity(),
                                Eigen::Vector3d(0, INFINITY, 0)),
               std::invalid_argument);
}

TEST(Pose, ExpLogRoundTrip) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d w =
        Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized() *
        rng.uniform(0.0, 3.0);
    EXPECT_LT((log_so3(exp_so3(w)) - w).norm(), 1e-9);
  }
}

TEST(Direction, LambdaIsABijectionInListingOrder) {
  const char* names[] = {"left",    "right",    "up",        "down",
                         "forward", "backward", "stationary"};
  std::set<int> lambdas;
  for (int i = 0; i < 7; ++i) {
    const Direction d = kAllDirections[i];
    EXPECT_EQ(direction_lambda(d), i + 1);
    EXPECT_EQ(direction_from_lambda(i + 1), d);
    EXPECT_EQ(direction_name(d), names[i]);
    EXPECT_EQ(parse_direction(names[i]), d);
    lambdas.insert(direction_lambda(d));
  }
  EXPECT_EQ(lambdas.size(), 7u);
  EXPECT_THROW(direction_from_lambda(0), std::invalid_argument);
  EXPECT_THROW(direction_from_lambda(8), std::invalid_argument);
}

TEST(Direction, UnknownNameListsValidOnes) {
  try {
    parse_direction("sideways");
    FAIL() << "expected a throw";
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    for (const char* n : {"left", "right", "up", "down", "forward", "backward",
                          "stationary"}) {
      EXPECT_NE(msg.find(n), std::string::npos) << n;
    }
  }
}

TEST(CardinalPath, StationaryRepeatsTheStart) {
  const CameraPath p = cardinal_path(CameraPose(), Direction::kStationary, 17, 0.1);
  ASSERT_EQ(p.size(), 17);
  for (const CameraPose& q : p.poses) EXPECT_EQ(pose_distance(q, CameraPose()), 0.0);
}

TEST(CardinalPath, RightFromIdentity) {
  const CameraPath p = cardinal_path(CameraPose(), Direction::kRight, 3, 1.0);
  ASSERT_EQ(p.size(), 3);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(p.poses[i].translation(), Eigen::Vector3d(i, 0, 0));
    EXPECT_EQ(p.poses[i].rotation(), Eigen::Matrix3d::Identity());
  }
}

TEST(CardinalPath, AxesFollowTheCameraFrame) {
  const std::pair<Direction, Eigen::Vector3d> cases[] = {
      {Direction::kLeft, {-1, 0, 0}},    {Direction::kRight, {1, 0, 0}},
      {Direction::kUp, {0, 1, 0}},       {Direction::kDown, {0, -1, 0}},
      {Direction::kForward, {0, 0, -1}}, {Direction::kBackward, {0, 0, 1}},
      {Direction::kStationary, {0, 0, 0}},
  };
  for (const auto& [d, axis] : cases) {
    EXPECT_EQ(camera_axis(d), axis) << direction_name(d);
    const CameraPath p = cardinal_path(CameraPose(), d, 2, 1.0);
    EXPECT_EQ(p.poses[1].translation(), axis) << direction_name(d);
  }
}

TEST(CardinalPath, RotatedStartMovesAlongTheRotatedAxis) {
  const CameraPose start = CameraPose::from(rot_y(kDeg90), Eigen::Vector3d::Zero());
  const CameraPath p = cardinal_path(start, Direction::kRight, 2, 1.0);
  const Mat3 r = naive_rot_y(kDeg90);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(p.poses[1].translation()[i], r[i][0], 1e-15);
  }
}

TEST(CardinalPath, DeltasAreConstant) {
  Rng rng(6);
  for (Direction d : kAllDirections) {
    const CameraPath p = cardinal_path(random_pose(rng), d, 17, 0.37);
    const CameraPose first = compose(p.poses[1], p.poses[0].inverse());
    for (int i = 2; i < p.size(); ++i) {
      EXPECT_LT(pose_distance(compose(p.poses[i], p.poses[i - 1].inverse()),
                              first),
                1e-9);
    }
  }
}

TEST(CardinalPath, RejectsBadArguments) {
  EXPECT_THROW(cardinal_path(CameraPose(), Direction::kLeft, 5, -0.1),
               std::invalid_argument);
  EXPECT_THROW(cardinal_path(CameraPose(), Direction::kLeft, 0, 0.1),
               std::invalid_argument);
}

TEST(RandomPath, SameSeedSamePath) {
  RandomPathOptions o;
  o.rotation_cap = 0.05;
  const CameraPath a = random_path(CameraPose(), 17, 99, o);
  const CameraPath b = random_path(CameraPose(), 17, 99, o);
  for (int i = 0; i < 17; ++i) EXPECT_EQ(pose_distance(a.poses[i], b.poses[i]), 0.0);
  const CameraPath c = random_path(CameraPose(), 17, 100, o);
  EXPECT_GT(pose_distance(a.poses[16], c.poses[16]), 0.0);
}

TEST(RandomPath, DirectionsAreUniformOnTheSphere) {
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  const int n = 10000;
  for (int s = 0; s < n; ++s) {
    const CameraPath p = random_path(CameraPose(), 2, derive_seed(7, s));
    sum += (p.poses[1].translation() - p.poses[0].translation()).normalized();
  }
  EXPECT_LT((sum / n).norm(), 0.05);
}

TEST(RandomPath, ZeroCapKeepsRotationAndSpeedStaysInRange) {
  const RandomPathOptions o;
  for (int s = 0; s < 100; ++s) {
    const CameraPose start = CameraPose::from(rot_z(0.3) * rot_x(0.2),
                                              Eigen::Vector3d(1, 2, 3));
    const CameraPath p = random_path(start, 9, s, o);
    for (const CameraPose& q : p.poses) {
      EXPECT_LT((q.rotation() - start.rotation()).cwiseAbs().maxCoeff(), 1e-12);
    }
    const double step = (p.poses[1].translation() - p.poses[0].translation()).norm();
    EXPECT_GE(step, o.speed_min - 1e-12);
    EXPECT_LE(step, o.speed_max + 1e-12);
  }
}

TEST(RandomPath, RotationRespectsTheCap) {
  RandomPathOptions o;
  o.rotation_cap = 0.02;
  for (int s = 0; s < 100; ++s) {
    const CameraPath p = random_path(CameraPose(), 5, s, o);
    const CameraSignal sig = path_to_signal(p);
    for (int i = 1; i < 5; ++i) {
      const Eigen::Vector3d w(sig.values[i * 6 + 3], sig.values[i * 6 + 4],
                              sig.values[i * 6 + 5]);
      EXPECT_LE(w.norm(), o.rotation_cap + 1e-12);
    }
  }
  EXPECT_THROW(random_path(CameraPose(), 1, 0), std::invalid_argument);
}

TEST(Signal, StationaryPathIsAllZero) {
  const CameraPath p = cardinal_path(CameraPose(), Direction::kStationary, 17, 0.1);
  const CameraSignal s = path_to_signal(p);
  ASSERT_EQ(s.values.size(), 17u * 6);
  for (double v : s.values) EXPECT_EQ(v, 0.0);
}

TEST(Signal, CardinalRightHasConstantDeltas) {
  const CameraPath p = cardinal_path(CameraPose(), Direction::kRight, 5, 1.0);
  const CameraSignal s = path_to_signal(p);
  ASSERT_EQ(s.frames(), 5);
  for (int k = 0; k < 6; ++k) EXPECT_EQ(s.values[k], 0.0);
  for (int i = 1; i < 5; ++i) {
    const double expect[6] = {1, 0, 0, 0, 0, 0};
    for (int k = 0; k < 6; ++k) EXPECT_EQ(s.values[i * 6 + k], expect[k]);
  }
}

TEST(Signal, DeltasAreInTheCameraFrame) {
  // A camera turned to face +x moving forward: the world displacement is +x,
  // the signal still reports camera-frame forward (-z).
  const CameraPose start = CameraPose::from(rot_y(-kDeg90), Eigen::Vector3d::Zero());
  const CameraSignal s =
      path_to_signal(cardinal_path(start, Direction::kForward, 2, 1.0));
  EXPECT_NEAR(s.values[6], 0.0, 1e-12);
  EXPECT_NEAR(s.values[7], 0.0, 1e-12);
  EXPECT_NEAR(s.values[8], -1.0, 1e-12);
}

TEST(Signal, RandomPathRoundTrips) {
  Rng rng(8);
  RandomPathOptions o;
  o.rotation_cap = 0.1;
  for (int s = 0; s < 100; ++s) {
    const CameraPath p = random_path(random_pose(rng), 17, s, o);
    const CameraPath q = signal_to_path(path_to_signal(p), p.poses[0]);
    ASSERT_EQ(q.size(), p.size());
    for (int i = 0; i < p.size(); ++i) {
      EXPECT_LT(pose_distance(p.poses[i], q.poses[i]), 1e-6);
    }
  }
}

TEST(Signal, SeededSmallRotationSignalsRoundTrip) {
  Rng rng(9);
  for (int s = 0; s < 50; ++s) {
    CameraSignal sig;
    sig.values.assign(17 * 6, 0.0);
    for (int i = 1; i < 17; ++i) {
      for (int k = 0; k < 3; ++k) sig.values[i * 6 + k] = 0.2 * rng.normal();
      for (int k = 3; k < 6; ++k) sig.values[i * 6 + k] = 0.03 * rng.normal();
    }
    const CameraPose start = random_pose(rng);
    const CameraSignal back = path_to_signal(signal_to_path(sig, start));
    for (std::size_t i = 0; i < sig.values.size(); ++i) {
      EXPECT_NEAR(back.values[i], sig.values[i], 1e-6);
    }
  }
}

TEST(Signal, ZeroSignalGivesCopiesOfStart) {
  Rng rng(10);
  const CameraPose start = random_pose(rng);
  CameraSignal sig;
  sig.values.assign(6 * 9, 0.0);
  const CameraPath p = signal_to_path(sig, start);
  ASSERT_EQ(p.size(), 9);
  for (const CameraPose& q : p.poses) EXPECT_EQ(pose_distance(q, start), 0.0);
}

TEST(Signal, CardinalDownReconstructsExactly) {
  const CameraPath p = cardinal_path(CameraPose(), Direction::kDown, 17, 0.5);
  const CameraPath q = signal_to_path(path_to_signal(p), CameraPose());
  for (int i = 0; i < 17; ++i) {
    EXPECT_EQ(p.poses[i].translation(), q.poses[i].translation());
    EXPECT_EQ(p.poses[i].rotation(), q.poses[i].rotation());
  }
}

TEST(Signal, RejectsBadLength) {
  CameraSignal sig;
  sig.values.assign(13, 0.0);
  EXPECT_THROW(signal_to_path(sig, CameraPose()), std::invalid_argument);
  sig.values.clear();
  EXPECT_THROW(signal_to_path(sig, CameraPose()), std::invalid_argument);
}

TEST(Signature, LeftOverThreeSamples) {
  const auto s = sinusoid_signature(Direction::kLeft, 3);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], 0.0);
  EXPECT_NEAR(s[1], std::sin(std::numbers::pi / 2), 1e-15);
  EXPECT_NEAR(s[2], 0.0, 1e-15);
}

TEST(Signature, StartsAtZeroAndSeparatesDirections) {
  std::vector<std::vector<double>> sigs;
  for (Direction d : kAllDirections) {
    sigs.push_back(sinusoid_signature(d, 106));
    EXPECT_EQ(sigs.back()[0], 0.0);
  }
  for (int a = 0; a < 7; ++a) {
    for (int b = a + 1; b < 7; ++b) {
      double d2 = 0;
      for (int k = 0; k < 106; ++k) {
        d2 += (sigs[a][k] - sigs[b][k]) * (sigs[a][k] - sigs[b][k]);
      }
      EXPECT_GT(d2, 0.0) << a << " vs " << b;
    }
  }
  EXPECT_THROW(sinusoid_signature(Direction::kUp, 1), std::invalid_argument);
}

TEST(PoseFile, RoundTripsBitExactly) {
  RandomPathOptions o;
  o.rotation_cap = 0.1;
  Rng rng(11);
  const CameraPath p = random_path(random_pose(rng), 17, 3, o);
  const CameraPath q = parse_poses(format_poses(p, "test"), "mem");
  ASSERT_EQ(q.size(), 17);
  for (int i = 0; i < 17; ++i) {
    EXPECT_EQ(p.poses[i].rotation(), q.poses[i].rotation());
    EXPECT_EQ(p.poses[i].translation(), q.poses[i].translation());
  }
}

TEST(PoseFile, AcceptsCommentsAndRejectsShortLines) {
  const std::string ok =
      "# header\n1 0 0 0 0 1 0 0 0 0 1 0\n# mid\n1 0 0 1 0 1 0 2 0 0 1 3\n";
  const CameraPath p = parse_poses(ok, "mem");
  ASSERT_EQ(p.size(), 2);
  EXPECT_EQ(p.poses[1].translation(), Eigen::Vector3d(1, 2, 3));
  EXPECT_ANY_THROW(parse_poses("1 0 0 0 0 1 0 0 0 0 1\n", "mem"));
  EXPECT_ANY_THROW(parse_poses("2 0 0 0 0 1 0 0 0 0 1 0\n", "mem"));
}

}  // namespace
}  // namespace camvid
