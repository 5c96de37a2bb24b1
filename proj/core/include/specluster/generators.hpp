#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "specluster/graph.hpp"
#include "specluster/kmeans.hpp"

namespace specluster {

// Stochastic block model with k equal blocks of n / k vertices.
struct SbmParams {
  std::size_t n = 0;
  std::size_t k = 0;
  double p = 0.0;  // within-block edge probability
  double q = 0.0;  // between-block edge probability
  std::uint64_t seed = 0;

  void validate() const;
};

struct SbmSample {
  Graph graph;
  Partition planted;
  // kept[new_id] = original vertex id; empty when no vertex was isolated.
  std::vector<Vertex> kept;
  std::size_t dropped = 0;
};

// Each unordered pair is sampled independently once, using geometric skips so
// the expected cost is O(n + m). Block pair (i, j) draws from the stream
// derive_seed(seed, i * k + j). Isolated vertices are removed and recorded.
SbmSample sample_sbm(const SbmParams& params);

// Expected number of edges of the model.
double sbm_expected_edges(const SbmParams& params);

struct PointCloud {
  PointSet points;
  std::optional<Partition> labels;
};

// Exact kNN graph under the Euclidean metric, symmetrized by union, unit
// weights. Brute force O(n^2 d); ties are broken by point index. Requires
// 1 <= k_nn < n. Vertices can still end up isolated only if n == 1.
Graph build_knn_graph(const PointSet& points, std::size_t k_nn, std::size_t threads = 1);

// `blobs` isotropic Gaussian clusters of `per_blob` points each in R^d with
// standard deviation sigma; blob b is centered at separation * e_{b mod d} *
// (1 + b / d). Labels are the blob indices.
PointCloud gaussian_blobs(std::size_t blobs, std::size_t per_blob, std::size_t d, double separation,
                          double sigma, std::uint64_t seed);

}  // namespace specluster
