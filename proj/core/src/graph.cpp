#include "specluster/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "specluster/errors.hpp"

namespace specluster {

namespace {

std::string edge_str(std::size_t u, std::size_t v) {
  return "(" + std::to_string(u) + ", " + std::to_string(v) + ")";
}

}  // namespace

Graph::Graph(std::vector<std::size_t> row_offsets, std::vector<Vertex> col_indices,
             std::vector<double> weights)
    : row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      weights_(std::move(weights)) {
  if (row_offsets_.empty() || row_offsets_.front() != 0)
    throw InputError("graph: row_offsets must start with 0");
  if (col_indices_.size() != weights_.size())
    throw InputError("graph: col_indices and weights differ in length");
  if (row_offsets_.back() != col_indices_.size())
    throw InputError("graph: row_offsets do not cover col_indices");
  const std::size_t n = row_offsets_.size() - 1;
  if (n > std::numeric_limits<Vertex>::max())
    throw InputError("graph: too many vertices");

  degrees_.assign(n, 0.0);
  std::size_t off_diagonal = 0;
  for (std::size_t u = 0; u < n; ++u) {
    if (row_offsets_[u + 1] < row_offsets_[u])
      throw InputError("graph: row_offsets must be nondecreasing");
    double deg = 0.0;
    for (std::size_t e = row_offsets_[u]; e < row_offsets_[u + 1]; ++e) {
      const Vertex v = col_indices_[e];
      const double w = weights_[e];
      if (v >= n) throw InputError("graph: neighbor id out of range in row " + std::to_string(u));
      if (!(w > 0.0) || !std::isfinite(w))
        throw InputError("graph: edge " + edge_str(u, v) + " has non-positive or non-finite weight");
      if (e > row_offsets_[u] && col_indices_[e - 1] >= v)
        throw InputError("graph: row " + std::to_string(u) + " is not strictly sorted");
      if (v == u) {
        ++self_loops_;
      } else {
        ++off_diagonal;
      }
      deg += w;
    }
    degrees_[u] = deg;
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t e = row_offsets_[u]; e < row_offsets_[u + 1]; ++e) {
      const Vertex v = col_indices_[e];
      if (v == u) continue;
      if (edge_weight(v, static_cast<Vertex>(u)) != weights_[e])
        throw InputError("graph: edge " + edge_str(u, v) + " has no symmetric counterpart");
    }
  }
  num_edges_ = off_diagonal / 2 + self_loops_;
  total_volume_ = std::accumulate(degrees_.begin(), degrees_.end(), 0.0);
}

bool Graph::has_isolated_vertices() const {
  return std::any_of(degrees_.begin(), degrees_.end(), [](double d) { return d == 0.0; });
}

double Graph::edge_weight(Vertex u, Vertex v) const {
  const auto nbrs = neighbors(u);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
  if (it == nbrs.end() || *it != v) return 0.0;
  return weights_[row_offsets_[u] + static_cast<std::size_t>(it - nbrs.begin())];
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (std::size_t u = 0; u < num_vertices(); ++u) {
    for (std::size_t e = row_offsets_[u]; e < row_offsets_[u + 1]; ++e) {
      if (col_indices_[e] >= u)
        out.push_back({static_cast<Vertex>(u), col_indices_[e], weights_[e]});
    }
  }
  return out;
}

IngestResult build_graph(std::size_t n, std::span<const Edge> edges, const IngestOptions& options) {
  if (n > std::numeric_limits<Vertex>::max()) throw InputError("graph: too many vertices");

  // Directed half-edges, canonically sorted so input order is irrelevant.
  std::vector<Edge> half;
  half.reserve(2 * edges.size());
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n)
      throw InputError("graph: edge " + edge_str(e.u, e.v) + " references a vertex outside [0, " +
                       std::to_string(n) + ")");
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw InputError("graph: edge " + edge_str(e.u, e.v) + " has non-positive or non-finite weight");
    if (e.u == e.v) {
      if (!options.allow_self_loops)
        throw InputError("graph: self-loop at vertex " + std::to_string(e.u) +
                         " (self-loops change degrees; pass --allow-self-loops to keep them)");
      half.push_back(e);
      continue;
    }
    half.push_back(e);
    half.push_back({e.v, e.u, e.w});
  }
  std::sort(half.begin(), half.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : (a.v != b.v ? a.v < b.v : a.w < b.w);
  });

  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<Vertex> cols;
  std::vector<double> weights;
  cols.reserve(half.size());
  weights.reserve(half.size());
  for (std::size_t i = 0; i < half.size();) {
    const Edge& e = half[i];
    double w = 0.0;
    std::size_t j = i;
    for (; j < half.size() && half[j].u == e.u && half[j].v == e.v; ++j) w += half[j].w;
    cols.push_back(e.v);
    weights.push_back(w);
    ++offsets[e.u + 1];
    i = j;
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());

  std::vector<Vertex> isolated;
  for (std::size_t u = 0; u < n; ++u)
    if (offsets[u + 1] == offsets[u]) isolated.push_back(static_cast<Vertex>(u));

  if (isolated.empty()) {
    return {Graph(std::move(offsets), std::move(cols), std::move(weights)), {}};
  }
  if (!options.drop_isolated) {
    throw InputError("graph: " + std::to_string(isolated.size()) + " isolated vertices (first: " +
                     std::to_string(isolated.front()) +
                     "); degree-0 vertices have no normalized embedding, pass --drop-isolated");
  }
  if (isolated.size() == n) throw InputError("graph: no edges; graph is empty after dropping isolated vertices");

  std::vector<Vertex> new_id(n, std::numeric_limits<Vertex>::max());
  std::vector<Vertex> kept;
  kept.reserve(n - isolated.size());
  for (std::size_t u = 0; u < n; ++u) {
    if (offsets[u + 1] != offsets[u]) {
      new_id[u] = static_cast<Vertex>(kept.size());
      kept.push_back(static_cast<Vertex>(u));
    }
  }
  std::vector<std::size_t> new_offsets(kept.size() + 1, 0);
  for (std::size_t i = 0; i < kept.size(); ++i)
    new_offsets[i + 1] = new_offsets[i] + (offsets[kept[i] + 1] - offsets[kept[i]]);
  // Relabeling is monotone, so rows stay sorted.
  for (Vertex& c : cols) c = new_id[c];
  return {Graph(std::move(new_offsets), std::move(cols), std::move(weights)), std::move(kept)};
}

VertexSet::VertexSet(std::vector<Vertex> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

std::vector<char> VertexSet::mask(std::size_t n) const {
  std::vector<char> in(n, 0);
  for (Vertex v : members_) {
    if (v >= n)
      throw InputError("vertex id " + std::to_string(v) + " out of range for graph with " +
                       std::to_string(n) + " vertices");
    in[v] = 1;
  }
  return in;
}

double volume(const Graph& g, const VertexSet& s) {
  double vol = 0.0;
  for (Vertex v : s.members()) {
    if (v >= g.num_vertices())
      throw InputError("vertex id " + std::to_string(v) + " out of range for graph with " +
                       std::to_string(g.num_vertices()) + " vertices");
    vol += g.degree(v);
  }
  return vol;
}

namespace {

struct CutStats {
  double cut = 0.0;
  double vol_in = 0.0;
};

CutStats cut_stats(const Graph& g, std::span<const char> in) {
  CutStats st;
  for (std::size_t u = 0; u < g.num_vertices(); ++u) {
    if (!in[u]) continue;
    st.vol_in += g.degree(static_cast<Vertex>(u));
    const auto nbrs = g.neighbors(static_cast<Vertex>(u));
    const auto ws = g.neighbor_weights(static_cast<Vertex>(u));
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      if (!in[nbrs[i]]) st.cut += ws[i];
  }
  return st;
}

}  // namespace

double cut_weight(const Graph& g, const VertexSet& s) {
  const auto in = s.mask(g.num_vertices());
  return cut_stats(g, in).cut;
}

double conductance(const Graph& g, std::span<const char> in_set) {
  if (in_set.size() != g.num_vertices()) throw InputError("conductance: mask length mismatch");
  const CutStats st = cut_stats(g, in_set);
  const double vol_out = g.total_volume() - st.vol_in;
  if (!(st.vol_in > 0.0) || !(vol_out > 0.0))
    throw InputError("conductance undefined: one side of the cut has zero volume");
  return st.cut / std::min(st.vol_in, vol_out);
}

double conductance(const Graph& g, const VertexSet& s) {
  const auto in = s.mask(g.num_vertices());
  return conductance(g, std::span<const char>(in));
}

double k_way_expansion_bruteforce(const Graph& g, std::size_t k) {
  const std::size_t n = g.num_vertices();
  if (n > kMaxBruteForceVertices)
    throw InputError("k_way_expansion_bruteforce: n = " + std::to_string(n) + " exceeds " +
                     std::to_string(kMaxBruteForceVertices) + " (exhaustive enumeration)");
  if (k < 2 || k > n) throw InputError("k_way_expansion_bruteforce: need 2 <= k <= n");

  // Restricted growth strings enumerate each set partition exactly once.
  std::vector<std::size_t> label(n, 0);
  std::vector<double> vol(k), cut(k);
  double best = std::numeric_limits<double>::infinity();

  auto evaluate = [&] {
    std::fill(vol.begin(), vol.end(), 0.0);
    std::fill(cut.begin(), cut.end(), 0.0);
    for (std::size_t u = 0; u < n; ++u) {
      vol[label[u]] += g.degree(static_cast<Vertex>(u));
      const auto nbrs = g.neighbors(static_cast<Vertex>(u));
      const auto ws = g.neighbor_weights(static_cast<Vertex>(u));
      for (std::size_t i = 0; i < nbrs.size(); ++i)
        if (label[nbrs[i]] != label[u]) cut[label[u]] += ws[i];
    }
    double worst = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double denom = std::min(vol[c], g.total_volume() - vol[c]);
      if (!(denom > 0.0)) return;  // a part with zero volume has no conductance
      worst = std::max(worst, cut[c] / denom);
      if (worst >= best) return;
    }
    best = worst;
  };

  // label[0] = 0; label[i] <= prefix_max[i-1] + 1.
  auto recurse = [&](auto&& self, std::size_t i, std::size_t used) -> void {
    if (i == n) {
      if (used == k) evaluate();
      return;
    }
    if (used + (n - i) < k) return;
    const std::size_t limit = std::min(used + 1, k);
    for (std::size_t c = 0; c < limit; ++c) {
      label[i] = c;
      self(self, i + 1, std::max(used, c + 1));
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

}  // namespace specluster
