#include <gtest/gtest.h>

#include <algorithm>

#include "camvid/kmeans.hpp"
#include "camvid/rng.hpp"

namespace camvid {
namespace {

TEST(KMeans, RecoversSeparatedClusters) {
  const double centres[3][2] = {{0, 0}, {10, 0}, {0, 10}};
  Rng rng(1);
  std::vector<double> data;
  for (int i = 0; i < 300; ++i) {
    const auto& c = centres[i % 3];
    data.push_back(c[0] + 0.1 * rng.normal());
    data.push_back(c[1] + 0.1 * rng.normal());
  }
  KMeansOptions o;
  o.k = 3;
  o.seed = 4;
  const std::vector<double> got = kmeans(data, 2, o);
  ASSERT_EQ(got.size(), 6u);
  for (const auto& c : centres) {
    const int k = nearest_centroid(got, 2, c);
    EXPECT_LT(squared_distance(std::span<const double>(got).subspan(k * 2, 2), c),
              0.01);
  }
}

TEST(KMeans, SameSeedSameCentroids) {
  Rng rng(2);
  std::vector<double> data(400);
  for (double& v : data) v = rng.normal();
  KMeansOptions o;
  o.k = 16;
  o.seed = 9;
  EXPECT_EQ(kmeans(data, 4, o), kmeans(data, 4, o));
}

TEST(KMeans, PinnedZeroStaysAtTheOrigin) {
  Rng rng(3);
  std::vector<double> data(600);
  for (double& v : data) v = 5.0 + rng.normal();
  KMeansOptions o;
  o.k = 8;
  o.pin_zero = true;
  const std::vector<double> c = kmeans(data, 3, o);
  EXPECT_EQ(c[0], 0.0);
  EXPECT_EQ(c[1], 0.0);
  EXPECT_EQ(c[2], 0.0);
}

TEST(KMeans, LloydNeverIncreasesDistortion) {
  Rng rng(4);
  std::vector<double> data(1000);
  for (double& v : data) v = rng.normal();
  auto distortion = [&](const std::vector<double>& c) {
    double s = 0;
    for (int i = 0; i < 500; ++i) {
      const std::span<const double> x(data.data() + i * 2, 2);
      const int k = nearest_centroid(c, 2, x);
      s += squared_distance(std::span<const double>(c).subspan(k * 2, 2), x);
    }
    return s;
  };
  KMeansOptions o;
  o.k = 10;
  double prev = 1e300;
  for (int it : {0, 1, 2, 5, 10}) {
    o.iterations = it;
    const double d = distortion(kmeans(data, 2, o));
    EXPECT_LE(d, prev + 1e-9) << it;
    prev = d;
  }
}

TEST(KMeans, NearestMatchesLinearScanWithTiesToSmallerIndex) {
  const std::vector<double> c = {1, 0, -1, 0, 1, 0};
  const double x[2] = {0, 0};
  EXPECT_EQ(nearest_centroid(c, 2, x), 0);
  const double y[2] = {1, 0};
  EXPECT_EQ(nearest_centroid(c, 2, y), 0);

  Rng rng(5);
  std::vector<double> book(64 * 3);
  for (double& v : book) v = rng.normal();
  for (int i = 0; i < 200; ++i) {
    const double p[3] = {rng.normal(), rng.normal(), rng.normal()};
    int best = 0;
    double best_d = 1e300;
    for (int k = 0; k < 64; ++k) {
      double d = 0;
      for (int j = 0; j < 3; ++j) d += (book[k * 3 + j] - p[j]) * (book[k * 3 + j] - p[j]);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    EXPECT_EQ(nearest_centroid(book, 3, p), best);
  }
}

TEST(KMeans, TooFewPointsThrows) {
  const std::vector<double> data(6, 1.0);
  KMeansOptions o;
  o.k = 4;
  EXPECT_THROW(kmeans(data, 2, o), std::invalid_argument);
}

}  // namespace
}  // namespace camvid
