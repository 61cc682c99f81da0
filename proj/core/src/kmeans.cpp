#include "camvid/kmeans.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "camvid/rng.hpp"

namespace camvid {

namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstRowMap = Eigen::Map<const RowMatrix>;

constexpr Eigen::Index kBlockRows = 2048;

// Assigns each row to its nearest centroid via the expanded-norm form; used
// for training only, where last-ulp ties do not matter.
void assign_all(const ConstRowMap& x, const RowMatrix& c,
                std::vector<int>& labels, std::vector<double>& dist) {
  const Eigen::VectorXd cnorm = c.rowwise().squaredNorm();
  const Eigen::Index n = x.rows();
  RowMatrix block;
  for (Eigen::Index start = 0; start < n; start += kBlockRows) {
    const Eigen::Index rows = std::min(kBlockRows, n - start);
    const auto xb = x.middleRows(start, rows);
    block.noalias() = -2.0 * xb * c.transpose();
    block.rowwise() += cnorm.transpose();
    const Eigen::VectorXd xnorm = xb.rowwise().squaredNorm();
    for (Eigen::Index r = 0; r < rows; ++r) {
      int best = 0;
      double best_d = block(r, 0);
      for (Eigen::Index j = 1; j < block.cols(); ++j) {
        if (block(r, j) < best_d) {
          best_d = block(r, j);
          best = static_cast<int>(j);
        }
      }
      labels[start + r] = best;
      dist[start + r] = std::max(0.0, best_d + xnorm[r]);
    }
  }
}

}  // namespace

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

int nearest_centroid(std::span<const double> centroids, int dim,
                     std::span<const double> x) {
  const std::size_t k = centroids.size() / dim;
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k; ++j) {
    const double d = squared_distance(centroids.subspan(j * dim, dim), x);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(j);
    }
  }
  return best;
}

std::vector<double> kmeans(std::span<const double> data, int dim,
                           const KMeansOptions& options) {
  if (dim <= 0 || data.size() % dim != 0) {
    throw std::invalid_argument("kmeans: data size is not a multiple of dim");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(data.size() / dim);
  const int k = options.k;
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (n < k) {
    throw std::invalid_argument("kmeans: " + std::to_string(n) +
                                " points is fewer than k = " +
                                std::to_string(k));
  }
  const ConstRowMap x(data.data(), n, dim);
  Rng rng(options.seed);

  // k-means++ seeding with exact distances.
  RowMatrix c(k, dim);
  Eigen::VectorXd d2(n);
  int first = 0;
  if (options.pin_zero) {
    c.row(0).setZero();
    d2 = x.rowwise().squaredNorm();
  } else {
    c.row(0) = x.row(static_cast<Eigen::Index>(rng.below(n)));
    d2 = (x.rowwise() - c.row(0)).rowwise().squaredNorm();
  }
  first = 1;
  for (int j = first; j < k; ++j) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += d2[i];
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double cum = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        cum += d2[i];
        if (cum > r) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(n));
    }
    c.row(j) = x.row(pick);
    d2 = d2.cwiseMin((x.rowwise() - c.row(j)).rowwise().squaredNorm());
  }

  std::vector<int> labels(n);
  std::vector<double> dist(n);
  std::vector<Eigen::Index> counts(k);
  RowMatrix sums(k, dim);
  for (int it = 0; it < options.iterations; ++it) {
    assign_all(x, c, labels, dist);
    sums.setZero();
    std::fill(counts.begin(), counts.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(labels[i]) += x.row(i);
      ++counts[labels[i]];
    }
    std::vector<char> taken(n, 0);
    for (int j = 0; j < k; ++j) {
      if (options.pin_zero && j == 0) continue;
      if (counts[j] > 0) {
        c.row(j) = sums.row(j) / double(counts[j]);
        continue;
      }
      Eigen::Index far = -1;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!taken[i] && dist[i] > far_d) {
          far_d = dist[i];
          far = i;
        }
      }
      if (far >= 0) {
        taken[far] = 1;
        dist[far] = 0.0;
        c.row(j) = x.row(far);
      }
    }
  }
  return std::vector<double>(c.data(), c.data() + c.size());
}

}  // namespace camvid
