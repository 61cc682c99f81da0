#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace camvid {

struct KMeansOptions {
  int k = 8;
  int iterations = 10;
  std::uint64_t seed = 0;
  // Reserve centroid 0 as the zero vector; it is never moved or reseeded.
  bool pin_zero = false;
};

// Seeded k-means++ initialisation followed by `iterations` Lloyd rounds.
// `data` is n x dim row-major. Empty clusters are re-seeded to the point
// farthest from its assigned centroid. Returns k x dim centroids.
// Throws std::invalid_argument if n < k.
std::vector<double> kmeans(std::span<const double> data, int dim,
                           const KMeansOptions& options);

// Exact nearest centroid by squared L2 distance, summed in index order; ties
// go to the smaller index.
int nearest_centroid(std::span<const double> centroids, int dim,
                     std::span<const double> x);

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace camvid
