#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "specluster/graph.hpp"
#include "specluster/kmeans.hpp"

namespace specluster {

// counts(i, j) = |{u : a(u) = i, b(u) = j}|.
class ContingencyTable {
 public:
  ContingencyTable(const Partition& a, const Partition& b);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t total() const { return total_; }
  std::uint64_t operator()(std::size_t i, std::size_t j) const { return counts_[i * cols_ + j]; }
  const std::vector<std::uint64_t>& row_sums() const { return row_sums_; }
  const std::vector<std::uint64_t>& col_sums() const { return col_sums_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t total_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> row_sums_;
  std::vector<std::uint64_t> col_sums_;
};

// Adjusted Rand index. Returns 0 when the maximum index equals the expected
// index (e.g. both partitions trivial).
double ari(const Partition& a, const Partition& b);

// Normalized mutual information with arithmetic-mean normalization and
// natural-log entropies. Two single-cluster labelings score 1.
double nmi(const Partition& a, const Partition& b);

// Minimum-cost perfect assignment on a square cost matrix (row-major k x k).
// Returns assignment[row] = column. Ties resolve toward lower indices.
std::vector<std::size_t> hungarian_min_assignment(const std::vector<double>& cost, std::size_t k);

struct MatchedVolume {
  double volume = 0.0;
  // permutation[i] = part of `s` matched to part i of `a`.
  std::vector<std::size_t> permutation;
  // True when the part counts differed and the smaller side was padded.
  bool padded = false;
};

// min over bijections sigma of sum_i vol(A_i symmetric-difference S_sigma(i)).
MatchedVolume matched_sym_diff_volume(const Graph& g, const Partition& a, const Partition& s);

// Conductance of every part. Throws InputError listing empty parts.
std::vector<double> partition_conductances(const Graph& g, const Partition& p);

struct ClusteringReport {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::size_t> cluster_sizes;
  std::vector<double> conductances;
  double max_conductance = 0.0;
  bool has_truth = false;
  double ari = 0.0;
  double nmi = 0.0;
  double matched_sym_diff_volume = 0.0;
  std::vector<std::size_t> permutation;
  bool padded = false;
  std::vector<std::size_t> empty_clusters;
  std::map<std::string, double> timings_ms;
};

// Structural metrics of `labels` on `g`; quality metrics against `truth` when given.
ClusteringReport evaluate_partition(const Graph& g, const Partition& labels, const Partition* truth);

// Deterministic JSON (fixed key order, 17 significant digits). Wall-clock
// timings are only written when include_timings is set.
std::string report_to_json(const ClusteringReport& report, bool include_timings);

}  // namespace specluster
