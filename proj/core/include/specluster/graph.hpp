#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace specluster {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double w = 1.0;
};

// Immutable weighted undirected graph in CSR form. Each undirected edge {u,v}
// with u != v is stored twice (u->v and v->u); a self-loop is stored once on
// the diagonal and counted once in the degree. Rows are sorted by column.
class Graph {
 public:
  Graph() = default;

  // Takes ownership of CSR arrays and validates every invariant (symmetry,
  // positive finite weights, sorted unique rows, ids in range). Throws
  // InputError on violation. Isolated vertices are allowed here; ingestion
  // decides whether to reject them.
  Graph(std::vector<std::size_t> row_offsets, std::vector<Vertex> col_indices,
        std::vector<double> weights);

  std::size_t num_vertices() const { return degrees_.size(); }
  // Undirected edge count (self-loops count once).
  std::size_t num_edges() const { return num_edges_; }
  // Stored adjacency entries.
  std::size_t nnz() const { return col_indices_.size(); }

  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const Vertex> col_indices() const { return col_indices_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> degrees() const { return degrees_; }

  std::span<const Vertex> neighbors(Vertex u) const {
    return {col_indices_.data() + row_offsets_[u], row_offsets_[u + 1] - row_offsets_[u]};
  }
  std::span<const double> neighbor_weights(Vertex u) const {
    return {weights_.data() + row_offsets_[u], row_offsets_[u + 1] - row_offsets_[u]};
  }

  double degree(Vertex u) const { return degrees_[u]; }
  double total_volume() const { return total_volume_; }
  bool has_self_loops() const { return self_loops_ > 0; }
  bool has_isolated_vertices() const;

  // Weight of edge {u,v}, 0 if absent. O(log deg(u)).
  double edge_weight(Vertex u, Vertex v) const;

  // Undirected edge list with u <= v, in CSR order.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> row_offsets_{0};
  std::vector<Vertex> col_indices_;
  std::vector<double> weights_;
  std::vector<double> degrees_;
  std::size_t num_edges_ = 0;
  std::size_t self_loops_ = 0;
  double total_volume_ = 0.0;
};

struct IngestOptions {
  // Self-loops are an error unless set; when set they are kept on the diagonal.
  bool allow_self_loops = false;
  // Isolated vertices are an error unless set; when set they are removed.
  bool drop_isolated = false;
};

struct IngestResult {
  Graph graph;
  // kept[new_id] = original id. Empty when no vertex was removed.
  std::vector<Vertex> kept;
};

// Builds a graph on vertices [0, n) from undirected edge records, each listed
// once in either orientation. Duplicate records have their weights summed.
// The result does not depend on the order of `edges`.
IngestResult build_graph(std::size_t n, std::span<const Edge> edges,
                         const IngestOptions& options = {});

// A set of vertex ids. Sorted and deduplicated on construction; range checks
// happen against a concrete graph in the operations below.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::vector<Vertex> members);

  std::span<const Vertex> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  // Membership bitmap over [0, n). Throws InputError if an id is >= n.
  std::vector<char> mask(std::size_t n) const;

 private:
  std::vector<Vertex> members_;
};

double volume(const Graph& g, const VertexSet& s);
double cut_weight(const Graph& g, const VertexSet& s);

// w(S, S^c) / min(vol S, vol S^c). Throws InputError when either side has
// zero volume (S empty or S = V).
double conductance(const Graph& g, const VertexSet& s);

// Conductance of the set given as a membership mask; same contract.
double conductance(const Graph& g, std::span<const char> in_set);

// Exact k-way expansion: min over partitions into k nonempty parts of the
// largest part conductance. Exhaustive, so n <= 12 is enforced.
inline constexpr std::size_t kMaxBruteForceVertices = 12;
double k_way_expansion_bruteforce(const Graph& g, std::size_t k);

}  // namespace specluster
