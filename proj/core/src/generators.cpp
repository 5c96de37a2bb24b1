#include "specluster/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "specluster/errors.hpp"
#include "specluster/parallel.hpp"
#include "specluster/rng.hpp"

namespace specluster {

void SbmParams::validate() const {
  if (k == 0 || n == 0) throw InputError("sbm: n and k must be positive");
  if (n % k != 0)
    throw InputError("sbm: k = " + std::to_string(k) + " does not divide n = " + std::to_string(n));
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
    throw InputError("sbm: probabilities must lie in [0, 1]");
  if (q > p) throw InputError("sbm: need q <= p");
  if (n > std::numeric_limits<Vertex>::max()) throw InputError("sbm: too many vertices");
}

double sbm_expected_edges(const SbmParams& params) {
  const double s = static_cast<double>(params.n / params.k);
  const double kk = static_cast<double>(params.k);
  return kk * s * (s - 1.0) / 2.0 * params.p + kk * (kk - 1.0) / 2.0 * s * s * params.q;
}

namespace {

// Calls visit(idx) for each index in [0, length) independently with
// probability prob, in increasing order, using geometric jumps.
template <class Visit>
void bernoulli_skip(std::uint64_t length, double prob, Rng& rng, Visit&& visit) {
  if (prob <= 0.0 || length == 0) return;
  if (prob >= 1.0) {
    for (std::uint64_t i = 0; i < length; ++i) visit(i);
    return;
  }
  const double log_q = std::log1p(-prob);
  std::uint64_t idx = 0;
  for (;;) {
    const double jump = std::floor(std::log(rng.uniform_open_zero()) / log_q);
    if (jump >= static_cast<double>(length - idx)) return;
    idx += static_cast<std::uint64_t>(jump);
    visit(idx);
    ++idx;
    if (idx >= length) return;
  }
}

}  // namespace

SbmSample sample_sbm(const SbmParams& params) {
  params.validate();
  const std::size_t k = params.k;
  const std::uint64_t s = params.n / k;
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(sbm_expected_edges(params) * 1.1) + 16);

  for (std::size_t bi = 0; bi < k; ++bi) {
    const Vertex base_i = static_cast<Vertex>(bi * s);
    // Within block: pairs (a, b) with a < b, enumerated row by row.
    {
      Rng rng(derive_seed(params.seed, bi * k + bi));
      std::uint64_t row = 0;
      std::uint64_t row_start = 0;
      bernoulli_skip(s * (s - 1) / 2, params.p, rng, [&](std::uint64_t idx) {
        while (idx >= row_start + (s - 1 - row)) {
          row_start += s - 1 - row;
          ++row;
        }
        const std::uint64_t col = row + 1 + (idx - row_start);
        edges.push_back({static_cast<Vertex>(base_i + row), static_cast<Vertex>(base_i + col), 1.0});
      });
    }
    for (std::size_t bj = bi + 1; bj < k; ++bj) {
      const Vertex base_j = static_cast<Vertex>(bj * s);
      Rng rng(derive_seed(params.seed, bi * k + bj));
      bernoulli_skip(s * s, params.q, rng, [&](std::uint64_t idx) {
        edges.push_back({static_cast<Vertex>(base_i + idx / s), static_cast<Vertex>(base_j + idx % s), 1.0});
      });
    }
  }

  IngestOptions opts;
  opts.drop_isolated = true;
  IngestResult built = build_graph(params.n, edges, opts);

  std::vector<std::uint32_t> labels;
  if (built.kept.empty()) {
    labels.resize(params.n);
    for (std::size_t v = 0; v < params.n; ++v) labels[v] = static_cast<std::uint32_t>(v / s);
  } else {
    labels.reserve(built.kept.size());
    for (Vertex v : built.kept) labels.push_back(static_cast<std::uint32_t>(v / s));
  }
  SbmSample out;
  out.dropped = built.kept.empty() ? 0 : params.n - built.kept.size();
  out.graph = std::move(built.graph);
  out.kept = std::move(built.kept);
  out.planted = Partition(std::move(labels), k);
  return out;
}

Graph build_knn_graph(const PointSet& points, std::size_t k_nn, std::size_t threads) {
  const std::size_t n = points.size();
  if (k_nn == 0 || k_nn >= n)
    throw InputError("knn graph: need 1 <= k_nn < n (k_nn = " + std::to_string(k_nn) + ", n = " +
                     std::to_string(n) + ")");
  std::vector<Vertex> nn(n * k_nn);
  parallel_for(0, n, threads, [&](std::size_t i) {
    std::vector<std::pair<double, Vertex>> cand;
    cand.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) cand.emplace_back(squared_distance(points.row(i), points.row(j)), static_cast<Vertex>(j));
    // (distance, index) ordering breaks ties by index.
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k_nn), cand.end());
    for (std::size_t r = 0; r < k_nn; ++r) nn[i * k_nn + r] = cand[r].second;
  });

  std::vector<Edge> edges;
  edges.reserve(n * k_nn);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < k_nn; ++r) {
      const Vertex j = nn[i * k_nn + r];
      edges.push_back({std::min(static_cast<Vertex>(i), j), std::max(static_cast<Vertex>(i), j), 1.0});
    }
  }
  // Union symmetrization: a mutual pair is listed twice, keep it once.
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; }),
              edges.end());
  return build_graph(n, edges).graph;
}

PointCloud gaussian_blobs(std::size_t blobs, std::size_t per_blob, std::size_t d, double separation,
                          double sigma, std::uint64_t seed) {
  if (blobs == 0 || per_blob == 0 || d == 0) throw InputError("gaussian_blobs: sizes must be positive");
  Rng rng(seed);
  const std::size_t n = blobs * per_blob;
  std::vector<double> coords(n * d);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t b = 0; b < blobs; ++b) {
    std::vector<double> center(d, 0.0);
    center[b % d] = separation * (1.0 + static_cast<double>(b / d));
    for (std::size_t i = 0; i < per_blob; ++i) {
      const std::size_t row = b * per_blob + i;
      labels[row] = static_cast<std::uint32_t>(b);
      for (std::size_t j = 0; j < d; ++j) coords[row * d + j] = center[j] + sigma * rng.normal();
    }
  }
  return {PointSet(n, d, std::move(coords)), Partition(std::move(labels), blobs)};
}

}  // namespace specluster
