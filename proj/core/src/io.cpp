#include "specluster/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "specluster/errors.hpp"

namespace specluster {

namespace {

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_blank(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> split_comma(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(',', start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file '" + path.string() + "'");
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw NumericError("format_double: conversion failed");
  return std::string(buf, ptr);
}

LoadedGraph read_edge_list(std::istream& in, const IngestOptions& options, std::string_view source) {
  struct Record {
    std::string u, v;
    double w;
    std::size_t line;
  };
  std::vector<Record> records;
  bool numeric = true;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_blank(t);
    if (fields.size() < 2 || fields.size() > 3)
      throw InputError(where(source, lineno) + "expected 'u<TAB>v[<TAB>w]', got " + std::to_string(fields.size()) +
                       " fields");
    double w = 1.0;
    if (fields.size() == 3 && !parse_double(fields[2], w))
      throw InputError(where(source, lineno) + "weight '" + std::string(fields[2]) + "' is not a number");
    if (!(w > 0.0) || !std::isfinite(w))
      throw InputError(where(source, lineno) + "weight must be positive and finite");
    std::uint64_t tmp;
    if (!parse_u64(fields[0], tmp) || !parse_u64(fields[1], tmp)) numeric = false;
    records.push_back({std::string(fields[0]), std::string(fields[1]), w, lineno});
  }

  std::vector<Edge> edges;
  edges.reserve(records.size());
  std::vector<std::string> names;
  std::size_t n = 0;
  if (numeric) {
    for (const auto& r : records) {
      std::uint64_t a = 0, b = 0;
      parse_u64(r.u, a);
      parse_u64(r.v, b);
      if (a >= std::numeric_limits<Vertex>::max() || b >= std::numeric_limits<Vertex>::max())
        throw InputError(where(source, r.line) + "vertex id too large");
      n = std::max<std::size_t>(n, std::max(a, b) + 1);
      edges.push_back({static_cast<Vertex>(a), static_cast<Vertex>(b), r.w});
    }
  } else {
    std::unordered_map<std::string, Vertex> ids;
    auto id_of = [&](const std::string& s) {
      const auto [it, inserted] = ids.try_emplace(s, static_cast<Vertex>(names.size()));
      if (inserted) names.push_back(s);
      return it->second;
    };
    for (const auto& r : records) {
      const Vertex a = id_of(r.u);
      const Vertex b = id_of(r.v);
      edges.push_back({a, b, r.w});
    }
    n = names.size();
  }
  if (n == 0) throw InputError(std::string(source) + ": edge list contains no edges");

  IngestResult built = [&] {
    try {
      return build_graph(n, edges, options);
    } catch (const InputError& e) {
      throw InputError(std::string(source) + ": " + e.what());
    }
  }();
  LoadedGraph out;
  out.graph = std::move(built.graph);
  if (!built.kept.empty()) {
    std::vector<std::string> kept_names;
    kept_names.reserve(built.kept.size());
    for (Vertex v : built.kept) kept_names.push_back(numeric ? std::to_string(v) : names[v]);
    out.names = std::move(kept_names);
  } else if (!numeric) {
    out.names = std::move(names);
  }
  return out;
}

LoadedGraph load_edge_list(const std::filesystem::path& path, const IngestOptions& options) {
  auto in = open_in(path);
  return read_edge_list(in, options, path.string());
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (const Edge& e : g.edges()) out << e.u << '\t' << e.v << '\t' << format_double(e.w) << '\n';
}

void save_edge_list(const std::filesystem::path& path, const Graph& g) {
  auto out = open_out(path);
  write_edge_list(out, g);
}

Partition read_labels(std::istream& in, std::size_t expected_n, std::string_view source) {
  std::vector<std::uint32_t> labels;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::uint64_t v = 0;
    if (!parse_u64(t, v) || v > std::numeric_limits<std::uint32_t>::max())
      throw InputError(where(source, lineno) + "label '" + std::string(t) + "' is not a non-negative integer");
    labels.push_back(static_cast<std::uint32_t>(v));
  }
  if (expected_n != 0 && labels.size() != expected_n)
    throw InputError(std::string(source) + ": label file has " + std::to_string(labels.size()) +
                     " labels but the graph has " + std::to_string(expected_n) + " vertices");
  return Partition::from_labels(std::move(labels));
}

Partition load_labels(const std::filesystem::path& path, std::size_t expected_n) {
  auto in = open_in(path);
  return read_labels(in, expected_n, path.string());
}

void write_labels(std::ostream& out, const Partition& p, std::string_view header_comment) {
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  for (auto l : p.labels) out << l << '\n';
}

void save_labels(const std::filesystem::path& path, const Partition& p, std::string_view header_comment) {
  auto out = open_out(path);
  write_labels(out, p, header_comment);
}

PointCloud read_points_csv(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> label_col;
  std::size_t width = 0;
  bool first = true;
  std::vector<double> coords;
  std::vector<std::uint32_t> labels;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_comma(t);
    if (first) {
      first = false;
      double probe;
      const bool header = std::any_of(fields.begin(), fields.end(), [&](auto f) { return !parse_double(f, probe); });
      width = fields.size();
      if (header) {
        for (std::size_t i = 0; i < fields.size(); ++i)
          if (fields[i] == "label") label_col = i;
        continue;
      }
    }
    if (fields.size() != width)
      throw InputError(where(source, lineno) + "expected " + std::to_string(width) + " fields, got " +
                       std::to_string(fields.size()));
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (label_col && i == *label_col) {
        std::uint64_t v = 0;
        if (!parse_u64(fields[i], v) || v > std::numeric_limits<std::uint32_t>::max())
          throw InputError(where(source, lineno) + "label '" + std::string(fields[i]) + "' is not a non-negative integer");
        labels.push_back(static_cast<std::uint32_t>(v));
        continue;
      }
      double x = 0.0;
      if (!parse_double(fields[i], x) || !std::isfinite(x))
        throw InputError(where(source, lineno) + "field '" + std::string(fields[i]) + "' is not a finite number");
      coords.push_back(x);
    }
    ++rows;
  }
  const std::size_t d = width - (label_col ? 1 : 0);
  if (rows == 0 || d == 0) throw InputError(std::string(source) + ": no points");
  PointCloud pc{PointSet(rows, d, std::move(coords)), std::nullopt};
  if (label_col) pc.labels = Partition::from_labels(std::move(labels));
  return pc;
}

PointCloud load_points_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_points_csv(in, path.string());
}

void write_embedding(std::ostream& out, const EmbeddingMatrix& e, std::uint64_t seed) {
  out << "#specluster-embedding n=" << e.rows() << " l=" << e.cols() << " scaled=" << (e.scaled() ? 1 : 0)
      << " seed=" << seed << '\n';
  std::string row;
  for (std::size_t i = 0; i < e.rows(); ++i) {
    row.clear();
    for (std::size_t j = 0; j < e.cols(); ++j) {
      if (j) row += ',';
      row += format_double(e(i, j));
    }
    row += '\n';
    out << row;
  }
}

void save_embedding(const std::filesystem::path& path, const EmbeddingMatrix& e, std::uint64_t seed) {
  auto out = open_out(path);
  write_embedding(out, e, seed);
}

LoadedEmbedding read_embedding(std::istream& in, std::string_view source) {
  std::string line;
  if (!std::getline(in, line)) throw InputError(std::string(source) + ": empty embedding file");
  std::istringstream hs(line);
  std::string tag;
  hs >> tag;
  if (tag != "#specluster-embedding") throw InputError(where(source, 1) + "missing #specluster-embedding header");
  std::uint64_t n = 0, l = 0, scaled = 0, seed = 0;
  int seen = 0;
  for (std::string kv; hs >> kv;) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = kv.substr(0, eq);
    std::uint64_t val = 0;
    if (!parse_u64(std::string_view(kv).substr(eq + 1), val))
      throw InputError(where(source, 1) + "bad header value '" + kv + "'");
    if (key == "n") n = val, seen |= 1;
    else if (key == "l") l = val, seen |= 2;
    else if (key == "scaled") scaled = val, seen |= 4;
    else if (key == "seed") seed = val, seen |= 8;
  }
  if (seen != 15) throw InputError(where(source, 1) + "header must define n, l, scaled and seed");
  LoadedEmbedding out{EmbeddingMatrix(n, l), seed};
  out.matrix.set_scaled(scaled != 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw InputError(std::string(source) + ": expected " + std::to_string(n) + " rows");
    const auto fields = split_comma(trim(line));
    if (fields.size() != l) throw InputError(where(source, i + 2) + "expected " + std::to_string(l) + " values");
    for (std::size_t j = 0; j < l; ++j)
      if (!parse_double(fields[j], out.matrix(i, j)))
        throw InputError(where(source, i + 2) + "value '" + std::string(fields[j]) + "' is not a number");
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

}  // namespace specluster
