#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "oracles.hpp"
#include "specluster/errors.hpp"
#include "specluster/io.hpp"
#include "specluster/spectral.hpp"

using namespace specluster;

namespace {

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("edge list round trip preserves the graph") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto edges = oracle::random_connected_edges(25, 0.15, s, s % 2 == 0);
    const Graph g = build_graph(25, edges).graph;
    std::stringstream ss;
    write_edge_list(ss, g);
    const auto back = read_edge_list(ss);
    CHECK(back.graph == g);
    CHECK(back.names.empty());
  }
}

TEST_CASE("edge list parsing") {
  std::istringstream in("# comment\n\n0\t1\n1 2  2.5\n\n# another\n2\t0\n");
  const auto g = read_edge_list(in).graph;
  CHECK(g.num_vertices() == 3);
  CHECK(g.num_edges() == 3);
  CHECK(g.edge_weight(1, 2) == 2.5);
  CHECK(g.edge_weight(0, 2) == 1.0);

  std::istringstream names("alice bob\nbob carol\n");
  const auto named = read_edge_list(names);
  CHECK(named.graph.num_vertices() == 3);
  CHECK(named.names == std::vector<std::string>{"alice", "bob", "carol"});
  CHECK(named.graph.edge_weight(0, 1) == 1.0);
}

TEST_CASE("edge list errors carry line numbers") {
  std::istringstream bad_fields("0 1\n1\n");
  CHECK(message_of([&] { read_edge_list(bad_fields, {}, "g.tsv"); }).find("g.tsv:2:") != std::string::npos);
  std::istringstream bad_weight("0 1 x\n");
  CHECK(message_of([&] { read_edge_list(bad_weight); }).find(":1:") != std::string::npos);
  std::istringstream neg("0 1 -1\n");
  CHECK_THROWS_AS(read_edge_list(neg), InputError);
  std::istringstream loop("0 0\n0 1\n");
  CHECK_THROWS_AS(read_edge_list(loop), InputError);
  std::istringstream loop2("0 0\n0 1\n");
  IngestOptions allow;
  allow.allow_self_loops = true;
  CHECK(read_edge_list(loop2, allow).graph.has_self_loops());
  std::istringstream gap("0 1\n3 4\n");  // vertex 2 isolated
  CHECK_THROWS_AS(read_edge_list(gap), InputError);
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(read_edge_list(empty), InputError);
}

TEST_CASE("missing files name the path") {
  const std::string msg = message_of([] { load_edge_list("/nonexistent/dir/graph.tsv"); });
  CHECK(msg.find("/nonexistent/dir/graph.tsv") != std::string::npos);
}

TEST_CASE("labels round trip and count check") {
  const Partition p({0, 2, 1, 1, 0}, 3);
  std::stringstream ss;
  write_labels(ss, p, "header");
  CHECK(ss.str().rfind("# header\n", 0) == 0);
  CHECK(read_labels(ss, 5) == p);

  std::istringstream short_file("0\n1\n");
  const std::string msg = message_of([&] { read_labels(short_file, 3); });
  CHECK(msg.find("2 labels") != std::string::npos);
  CHECK(msg.find("3 vertices") != std::string::npos);
  std::istringstream bad("0\n-1\n");
  CHECK_THROWS_AS(read_labels(bad), InputError);
}

TEST_CASE("points CSV with header and labels") {
  std::istringstream in("x,y,label\n0,1,0\n2.5,-1,1\n# skipped\n3,3,1\n");
  const auto c = read_points_csv(in);
  CHECK(c.points.size() == 3);
  CHECK(c.points.dim() == 2);
  CHECK(c.points.row(1)[0] == 2.5);
  REQUIRE(c.labels);
  CHECK(c.labels->labels == std::vector<std::uint32_t>{0, 1, 1});

  std::istringstream plain("1,2,3\n4,5,6\n");
  const auto d = read_points_csv(plain);
  CHECK(d.points.dim() == 3);
  CHECK_FALSE(d.labels);

  std::istringstream ragged("1,2\n3\n");
  CHECK(message_of([&] { read_points_csv(ragged); }).find(":2:") != std::string::npos);
  std::istringstream nan("1,nan\n");
  CHECK_THROWS_AS(read_points_csv(nan), InputError);
}

TEST_CASE("embedding round trip is exact") {
  auto e = sample_gaussian_vectors(30, 3, 12);
  e.set_scaled(true);
  std::stringstream ss;
  write_embedding(ss, e, 12);
  const auto back = read_embedding(ss);
  CHECK(back.seed == 12);
  CHECK(back.matrix == e);

  std::istringstream no_header("1,2\n");
  CHECK_THROWS_AS(read_embedding(no_header), InputError);
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  const double x = 1.0 / 3.0;
  CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("file helpers") {
  const auto dir = std::filesystem::temp_directory_path() / "specluster_io_test";
  std::filesystem::create_directories(dir);
  const Graph g = build_graph(3, std::vector<Edge>{{0, 1, 1.0}, {1, 2, 3.0}}).graph;
  save_edge_list(dir / "g.tsv", g);
  CHECK(load_edge_list(dir / "g.tsv").graph == g);
  save_labels(dir / "l.txt", Partition({0, 1, 1}, 2));
  CHECK(load_labels(dir / "l.txt", 3).labels == std::vector<std::uint32_t>{0, 1, 1});
  CHECK_THROWS_AS(write_text_file(dir / "missing" / "x.txt", "x"), InputError);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
