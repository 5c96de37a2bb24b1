#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "specluster/graph.hpp"
#include "specluster/kmeans.hpp"
#include "specluster/spectral.hpp"

namespace specluster {

enum class Mode {
  pm_log_k,    // log k random vectors from the power method (the fast algorithm)
  pm_k,        // k power-method vectors, orthonormalized
  eigs_k,      // k eigenvectors of M
  eigs_log_k,  // ceil(log2 k) eigenvectors of M
};

std::string_view to_string(Mode m);
// Throws InputError for an unknown name.
Mode parse_mode(std::string_view name);

struct SpectralParams {
  std::size_t k = 2;
  std::optional<double> epsilon;
  std::optional<std::size_t> l;
  std::optional<std::size_t> t;
  Mode mode = Mode::pm_log_k;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  KMeansOptions kmeans;
  SubspaceOptions eigensolver;  // seed is overridden from `seed`
};

struct ResolvedParams {
  std::size_t k = 0;
  std::size_t l = 0;  // power-method vectors for pm_log_k
  std::size_t t = 0;  // power-method steps (pm modes)
  std::size_t dims = 0;  // embedding columns actually used by `mode`
  std::optional<double> epsilon;
  Mode mode = Mode::pm_log_k;
  std::uint64_t seed = 0;
};

// c3 = 1 / (2 ln(1 / c1)) with c1 = 1/2.
inline constexpr double kPowerStepConstant = 0.72134752044448170368;

// Fills l and t:
//   defaults:    l = max(1, ceil(log2 k)),  t = ceil(10 ln(max(2, n / k)))
//   epsilon set: l = min(k, ceil((log2 k + log2(1/eps)) / eps^2)),
//                t = ceil(c3 ln(24 n / (eps^2 k)))
// Explicit l / t always win. Throws InputError unless 2 <= k <= n, l >= 1 and
// 0 < eps <= 1.
ResolvedParams resolve_params(const SpectralParams& params, std::size_t n);

// Unrounded helpers behind resolve_params, shared with the test harnesses.
std::size_t default_embedding_dim(std::size_t k);
std::size_t default_power_steps(std::size_t n, std::size_t k);
std::size_t epsilon_embedding_dim(std::size_t k, double epsilon, bool cap_at_k);
std::size_t epsilon_power_steps(std::size_t n, std::size_t k, double epsilon);

struct StageTimings {
  double embed_ms = 0.0;
  double scale_ms = 0.0;
  double kmeans_ms = 0.0;
  double total_ms = 0.0;
};

struct EmbedResult {
  EmbeddingMatrix raw;  // unscaled power-method output or eigenvectors
  std::optional<EigenResult> eigen;  // eigs modes only (vectors moved into raw)
  double embed_ms = 0.0;
};

// The embedding stage alone: the columns handed to degree scaling.
EmbedResult embed(const Graph& g, const ResolvedParams& params, std::size_t threads = 1,
                  const SubspaceOptions& eig_options = {});

// Returns a copy with row u multiplied by deg(u)^{-1/2}; marked scaled.
EmbeddingMatrix scale_by_inv_sqrt_degree(const Graph& g, const EmbeddingMatrix& y);

struct ClusterResult {
  Partition partition;
  EmbeddingMatrix raw_embedding;
  EmbeddingMatrix embedding;  // scaled, the k-means input
  double kmeans_cost = 0.0;
  ResolvedParams params;
  StageTimings timings;
  // Set for eigs modes.
  bool eigensolver_converged = true;
  std::size_t eigensolver_iterations = 0;
  double eigensolver_max_residual = 0.0;
};

// Embeds with the configured mode, scales rows by deg^{-1/2} and runs k-means
// with k clusters. For Mode::pm_log_k this is the fast spectral clustering
// algorithm. Deterministic in (graph, params) and independent of threads.
ClusterResult fast_spectral_cluster(const Graph& g, const SpectralParams& params);

struct CostPreservationReport {
  std::size_t l = 0;
  std::size_t t = 0;
  std::size_t partitions = 0;  // evaluated partitions, planted one first when given
  // cost_F / (cost_Z / l) on the planted partition (NaN without one).
  double planted_ratio = 0.0;
  double planted_multiplicative_deviation = 0.0;
  // max over evaluated partitions of |cost_F / (cost_Z / l) - 1|.
  double max_multiplicative_deviation = 0.0;
  // | ||(I - XX^T) D^{-1/2} Y||_F - ||(I - XX^T) D^{-1/2} Z||_F |
  double planted_additive_deviation = 0.0;
  double max_additive_deviation = 0.0;
  double frobenius_y_minus_z = 0.0;
  double gamma_k = 0.0;
  double gamma_k_plus_1 = 0.0;
};

struct CostPreservationOptions {
  std::size_t k = 2;
  double epsilon = 0.5;
  std::size_t trials = 100;  // random partitions
  std::uint64_t seed = 0;
  // Default: l from the epsilon rule without the cap at k, t from the epsilon rule.
  std::optional<std::size_t> l;
  std::optional<std::size_t> t;
};

inline constexpr std::size_t kMaxDenseHarnessVertices = 300;

// Compares k-means costs of random partitions (and `planted`, if given) under
// the embeddings D^{-1/2}F (top-k eigenvectors, dense oracle), D^{-1/2}Z with
// Z = F F^T X0, and D^{-1/2}Y with Y = M^t X0. Costs under Z are divided by l
// so a Gaussian projection is unbiased. Refuses n > 300.
CostPreservationReport kmeans_cost_preservation_check(const Graph& g, const CostPreservationOptions& options,
                                                      const Partition* planted = nullptr);

// max over partitions of |cost_a/scale_a - cost_b/scale_b| / (cost_b/scale_b).
// Zero when a and b are the same point set.
double max_relative_cost_deviation(const PointSet& a, double scale_a, const PointSet& b, double scale_b,
                                   const std::vector<Partition>& partitions);

}  // namespace specluster
