#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "specluster/spectral.hpp"

namespace specluster {

// n points in R^d, one point per row (row-major).
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t n, std::size_t d) : n_(n), d_(d), coords_(n * d, 0.0) {}
  PointSet(std::size_t n, std::size_t d, std::vector<double> coords);

  // Rows of the embedding become points.
  static PointSet from_embedding(const EmbeddingMatrix& e);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }
  std::span<double> row(std::size_t i) { return {coords_.data() + i * d_, d_}; }
  std::span<const double> row(std::size_t i) const { return {coords_.data() + i * d_, d_}; }
  std::span<const double> coords() const { return coords_; }

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> coords_;
};

// Assignment of n items to labels in [0, k). Empty clusters are allowed.
struct Partition {
  std::vector<std::uint32_t> labels;
  std::size_t k = 0;

  Partition() = default;
  Partition(std::vector<std::uint32_t> labels_, std::size_t k_);

  // Infers k as max label + 1.
  static Partition from_labels(std::vector<std::uint32_t> labels_);

  std::size_t size() const { return labels.size(); }
  std::vector<std::size_t> cluster_sizes() const;
  std::vector<std::size_t> empty_clusters() const;

  friend bool operator==(const Partition&, const Partition&) = default;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

// Sum over clusters of squared distances to the cluster mean. Empty clusters
// contribute nothing.
double kmeans_cost(const PointSet& points, const Partition& part);

struct KMeansSeeding {
  std::vector<std::size_t> rows;  // chosen point indices, distinct
  PointSet centers;               // k x d
};

// k-means++: first center uniform, each further center drawn with probability
// proportional to the squared distance to the nearest chosen center. When all
// remaining points coincide with chosen centers the draw is uniform over the
// unchosen points, so the rows are always distinct.
KMeansSeeding kmeans_pp_seed(const PointSet& points, std::size_t k, std::uint64_t seed);

struct LloydOptions {
  std::size_t max_iters = 100;
  double tol = 1e-6;  // relative cost improvement
  std::size_t threads = 1;
};

struct LloydResult {
  Partition partition;
  PointSet centers;
  double cost = 0.0;
  double seed_cost = 0.0;          // cost of assigning points to the seeds
  std::vector<double> cost_trace;  // cost after each assignment step
  std::size_t iterations = 0;
  bool converged = false;
};

// Lloyd iterations from k-means++ seeds. Ties go to the lowest cluster index;
// an emptied cluster is refilled with the point farthest from its center.
LloydResult lloyd(const PointSet& points, std::size_t k, std::uint64_t seed, const LloydOptions& options = {});

struct KMeansOptions {
  std::size_t restarts = 10;
  LloydOptions lloyd;
};

// Best of `restarts` Lloyd runs (restart r uses derive_seed(seed, r)); ties
// on cost keep the earliest restart.
LloydResult kmeans(const PointSet& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options = {});

}  // namespace specluster
