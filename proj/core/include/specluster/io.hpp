#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "specluster/generators.hpp"
#include "specluster/graph.hpp"
#include "specluster/kmeans.hpp"
#include "specluster/spectral.hpp"

namespace specluster {

// Shortest decimal text that round-trips (at most 17 significant digits).
// Locale independent.
std::string format_double(double x);

struct LoadedGraph {
  Graph graph;
  // names[id] is the token that identified vertex `id` in the input. Empty
  // when the input used dense integer ids and no vertex was removed.
  std::vector<std::string> names;
};

// Edge list: one `u<TAB>v[<TAB>w]` record per line (any blank run separates
// fields), '#' comment lines and blank lines ignored, w defaults to 1. If every
// id is a non-negative integer the ids are used directly (n = max id + 1);
// otherwise ids are mapped to 0..n-1 in order of first appearance. Errors
// carry the line number.
LoadedGraph read_edge_list(std::istream& in, const IngestOptions& options = {},
                           std::string_view source = "<stream>");
LoadedGraph load_edge_list(const std::filesystem::path& path, const IngestOptions& options = {});

void write_edge_list(std::ostream& out, const Graph& g);
void save_edge_list(const std::filesystem::path& path, const Graph& g);

// Labels: one non-negative integer per line, line i labels vertex i. '#'
// lines are ignored. expected_n (when nonzero) is checked against the count.
Partition read_labels(std::istream& in, std::size_t expected_n = 0, std::string_view source = "<stream>");
Partition load_labels(const std::filesystem::path& path, std::size_t expected_n = 0);

void write_labels(std::ostream& out, const Partition& p, std::string_view header_comment = {});
void save_labels(const std::filesystem::path& path, const Partition& p, std::string_view header_comment = {});

// Points CSV: comma-separated decimals, one point per row. A first row with a
// non-numeric field is a header; a header column named `label` holds integer
// labels instead of a coordinate.
PointCloud read_points_csv(std::istream& in, std::string_view source = "<stream>");
PointCloud load_points_csv(const std::filesystem::path& path);

// Embedding: `#specluster-embedding n=<n> l=<l> scaled=<0|1> seed=<seed>`
// followed by n rows of l comma-separated values.
void write_embedding(std::ostream& out, const EmbeddingMatrix& e, std::uint64_t seed);
void save_embedding(const std::filesystem::path& path, const EmbeddingMatrix& e, std::uint64_t seed);
struct LoadedEmbedding {
  EmbeddingMatrix matrix;
  std::uint64_t seed = 0;
};
LoadedEmbedding read_embedding(std::istream& in, std::string_view source = "<stream>");

// Writes `text` to `path`, throwing InputError if the file cannot be created.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace specluster
