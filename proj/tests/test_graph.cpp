#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "specluster/errors.hpp"
#include "specluster/graph.hpp"

using namespace specluster;

namespace {

Graph k4() {
  std::vector<Edge> e;
  for (Vertex u = 0; u < 4; ++u)
    for (Vertex v = u + 1; v < 4; ++v) e.push_back({u, v, 1.0});
  return build_graph(4, e).graph;
}

Graph path3() { return build_graph(3, std::vector<Edge>{{0, 1, 1.0}, {1, 2, 1.0}}).graph; }

// Triangles {0,1,2} and {3,4,5} joined by the edge 2-3.
Graph two_triangles_bridged() {
  return build_graph(6, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}).graph;
}

Graph two_triangles() {
  return build_graph(6, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}).graph;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("volume") {
  CHECK(volume(k4(), VertexSet({0})) == 3.0);
  CHECK(volume(k4(), VertexSet{}) == 0.0);
  CHECK(volume(path3(), VertexSet({1})) == 2.0);
  CHECK_THROWS_AS(volume(k4(), VertexSet({7})), InputError);
}

TEST_CASE("cut weight") {
  CHECK(cut_weight(k4(), VertexSet({0})) == 3.0);
  CHECK(cut_weight(k4(), VertexSet({0, 1, 2, 3})) == 0.0);
  CHECK(cut_weight(two_triangles_bridged(), VertexSet({0, 1, 2})) == 1.0);
}

TEST_CASE("conductance examples") {
  CHECK(conductance(k4(), VertexSet({0})) == doctest::Approx(1.0));
  CHECK(conductance(two_triangles_bridged(), VertexSet({0, 1, 2})) == doctest::Approx(1.0 / 7.0));
  CHECK(conductance(two_triangles(), VertexSet({0, 1, 2})) == 0.0);
  CHECK_THROWS_AS(conductance(k4(), VertexSet{}), InputError);
  CHECK_THROWS_AS(conductance(k4(), VertexSet({0, 1, 2, 3})), InputError);
}

TEST_CASE("k-way expansion by exhaustive enumeration") {
  CHECK(k_way_expansion_bruteforce(two_triangles(), 2) == 0.0);
  CHECK(k_way_expansion_bruteforce(k4(), 2) == doctest::Approx(2.0 / 3.0));
  CHECK(k_way_expansion_bruteforce(two_triangles_bridged(), 2) == doctest::Approx(1.0 / 7.0));

  std::vector<Edge> big;
  for (Vertex u = 0; u + 1 < 13; ++u) big.push_back({u, static_cast<Vertex>(u + 1), 1.0});
  CHECK_THROWS_AS(k_way_expansion_bruteforce(build_graph(13, big).graph, 2), InputError);
}

TEST_CASE("conductance against a dense adjacency oracle, both sides agree, range [0,1]") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 5 + seed % 20;
    const auto edges = oracle::random_connected_edges(n, 0.3, seed);
    const Graph g = build_graph(n, edges).graph;
    const Eigen::MatrixXd a = oracle::adjacency(n, edges);
    std::mt19937_64 rng(seed + 100);
    std::vector<Vertex> s, sc;
    std::vector<char> in(n, 0);
    for (Vertex v = 0; v < n; ++v) {
      in[v] = (rng() & 1U) != 0;
      (in[v] ? s : sc).push_back(v);
    }
    if (s.empty() || sc.empty()) continue;
    double w = 0, vs = 0, vsc = 0;
    for (std::size_t u = 0; u < n; ++u) {
      (in[u] ? vs : vsc) += a.row(static_cast<Eigen::Index>(u)).sum();
      for (std::size_t v = 0; v < n; ++v)
        if (in[u] && !in[v]) w += a(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
    }
    const double phi = conductance(g, VertexSet(s));
    CHECK(phi == doctest::Approx(w / std::min(vs, vsc)).epsilon(1e-12));
    CHECK(phi == doctest::Approx(conductance(g, VertexSet(sc))).epsilon(1e-12));
    CHECK(phi >= 0.0);
    CHECK(phi <= 1.0 + 1e-12);
  }
}

TEST_CASE("degrees, volume and CSR invariants") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 30;
    const auto edges = oracle::random_connected_edges(n, 0.2, seed, false);
    const Graph g = build_graph(n, edges).graph;
    CHECK(g.total_volume() == doctest::Approx(2.0 * static_cast<double>(edges.size())));
    CHECK(g.num_edges() == edges.size());
    const auto off = g.row_offsets();
    CHECK(std::is_sorted(off.begin(), off.end()));
    for (Vertex u = 0; u < n; ++u) {
      double s = 0;
      for (double w : g.neighbor_weights(u)) s += w;
      CHECK(g.degree(u) == doctest::Approx(s).epsilon(1e-12));
      for (Vertex v : g.neighbors(u)) CHECK(g.edge_weight(v, u) == g.edge_weight(u, v));
    }
  }
}

TEST_CASE("construction is invariant to edge order and orientation") {
  auto edges = oracle::random_connected_edges(25, 0.25, 7);
  const Graph ref = build_graph(25, edges).graph;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(edges.begin(), edges.end(), rng);
    for (auto& e : edges)
      if (rng() & 1U) std::swap(e.u, e.v);
    CHECK(build_graph(25, edges).graph == ref);
  }
}

TEST_CASE("duplicate edges are summed") {
  const Graph g = build_graph(2, std::vector<Edge>{{0, 1, 1.5}, {1, 0, 2.0}}).graph;
  CHECK(g.num_edges() == 1);
  CHECK(g.edge_weight(0, 1) == 3.5);
  CHECK(g.degree(0) == 3.5);
}

TEST_CASE("self-loops are rejected unless allowed, then counted once") {
  const std::vector<Edge> e{{0, 1, 1.0}, {1, 1, 2.0}};
  CHECK_THROWS_AS(build_graph(2, e), InputError);
  IngestOptions opts;
  opts.allow_self_loops = true;
  const Graph g = build_graph(2, e, opts).graph;
  CHECK(g.has_self_loops());
  CHECK(g.degree(1) == 3.0);
  CHECK(g.degree(0) == 1.0);
  CHECK(g.num_edges() == 2);
  CHECK(cut_weight(g, VertexSet({1})) == 1.0);
}

TEST_CASE("isolated vertices are rejected unless dropped, with a remap") {
  const std::vector<Edge> e{{0, 2, 1.0}, {2, 4, 1.0}};
  CHECK_THROWS_AS(build_graph(5, e), InputError);
  IngestOptions opts;
  opts.drop_isolated = true;
  const IngestResult r = build_graph(5, e, opts);
  CHECK(r.graph.num_vertices() == 3);
  CHECK(r.kept == std::vector<Vertex>{0, 2, 4});
  CHECK(r.graph.edge_weight(0, 1) == 1.0);
  CHECK(r.graph.edge_weight(1, 2) == 1.0);
  CHECK_THROWS_AS(build_graph(3, std::vector<Edge>{}, opts), InputError);
}

TEST_CASE("invalid input") {
  CHECK_THROWS_AS(build_graph(2, std::vector<Edge>{{0, 2, 1.0}}), InputError);
  CHECK_THROWS_AS(build_graph(2, std::vector<Edge>{{0, 1, 0.0}}), InputError);
  CHECK_THROWS_AS(build_graph(2, std::vector<Edge>{{0, 1, -1.0}}), InputError);
  // Asymmetric CSR.
  CHECK_THROWS_AS(Graph({0, 1, 1}, {1}, {1.0}), InputError);
}

}  // TEST_SUITE
