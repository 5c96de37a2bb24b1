#include "specluster/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "specluster/errors.hpp"

namespace specluster {

namespace {

void require_same_length(const Partition& a, const Partition& b, const char* what) {
  if (a.size() != b.size())
    throw InputError(std::string(what) + ": partitions have different lengths (" + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()) + ")");
}

double comb2(std::uint64_t x) { return 0.5 * static_cast<double>(x) * static_cast<double>(x == 0 ? 0 : x - 1); }

}  // namespace

ContingencyTable::ContingencyTable(const Partition& a, const Partition& b)
    : rows_(a.k), cols_(b.k), total_(a.size()), counts_(a.k * b.k, 0), row_sums_(a.k, 0), col_sums_(b.k, 0) {
  require_same_length(a, b, "contingency table");
  for (std::size_t u = 0; u < total_; ++u) {
    ++counts_[a.labels[u] * cols_ + b.labels[u]];
    ++row_sums_[a.labels[u]];
    ++col_sums_[b.labels[u]];
  }
}

double ari(const Partition& a, const Partition& b) {
  require_same_length(a, b, "ari");
  const ContingencyTable t(a, b);
  double index = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) index += comb2(t(i, j));
  double sum_a = 0.0, sum_b = 0.0;
  for (auto r : t.row_sums()) sum_a += comb2(r);
  for (auto c : t.col_sums()) sum_b += comb2(c);
  const double pairs = comb2(t.total());
  if (pairs == 0.0) return 0.0;
  const double expected = sum_a * sum_b / pairs;
  const double max_index = 0.5 * (sum_a + sum_b);
  const double denom = max_index - expected;
  if (denom == 0.0) return 0.0;
  return (index - expected) / denom;
}

double nmi(const Partition& a, const Partition& b) {
  require_same_length(a, b, "nmi");
  const ContingencyTable t(a, b);
  const double n = static_cast<double>(t.total());
  if (n == 0.0) return 0.0;
  auto entropy = [n](const std::vector<std::uint64_t>& sums) {
    double h = 0.0;
    for (auto c : sums)
      if (c > 0) {
        const double pr = static_cast<double>(c) / n;
        h -= pr * std::log(pr);
      }
    return h;
  };
  const double ha = entropy(t.row_sums());
  const double hb = entropy(t.col_sums());
  double mi = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const auto c = t(i, j);
      if (c == 0) continue;
      const double pij = static_cast<double>(c) / n;
      mi += pij * std::log(pij * n * n / (static_cast<double>(t.row_sums()[i]) * static_cast<double>(t.col_sums()[j])));
    }
  const double mean_h = 0.5 * (ha + hb);
  if (mean_h <= 0.0) return 1.0;  // both labelings have a single nonempty cluster
  return std::clamp(mi / mean_h, 0.0, 1.0);
}

std::vector<std::size_t> hungarian_min_assignment(const std::vector<double>& cost, std::size_t k) {
  if (cost.size() != k * k) throw InputError("hungarian: cost matrix is not k x k");
  if (k == 0) return {};
  // Shortest augmenting path formulation with row/column potentials (1-based).
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0);
  std::vector<std::size_t> match_col(k + 1, 0), way(k + 1, 0);
  for (std::size_t row = 1; row <= k; ++row) {
    match_col[0] = row;
    std::size_t j0 = 0;
    std::vector<double> minv(k + 1, inf);
    std::vector<char> used(k + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match_col[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * k + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= k; ++j) {
        if (used[j]) {
          u[match_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match_col[j0] = match_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(k, 0);
  for (std::size_t j = 1; j <= k; ++j)
    if (match_col[j] != 0) assignment[match_col[j] - 1] = j - 1;
  return assignment;
}

MatchedVolume matched_sym_diff_volume(const Graph& g, const Partition& a, const Partition& s) {
  require_same_length(a, s, "matched_sym_diff_volume");
  if (a.size() != g.num_vertices())
    throw InputError("matched_sym_diff_volume: partition length does not match the graph");
  const std::size_t k = std::max(a.k, s.k);
  std::vector<double> vol_a(k, 0.0), vol_s(k, 0.0), inter(k * k, 0.0);
  for (std::size_t u = 0; u < a.size(); ++u) {
    const double d = g.degree(static_cast<Vertex>(u));
    vol_a[a.labels[u]] += d;
    vol_s[s.labels[u]] += d;
    inter[a.labels[u] * k + s.labels[u]] += d;
  }
  // vol(A_i sym-diff S_j) = vol(A_i) + vol(S_j) - 2 vol(A_i intersect S_j)
  std::vector<double> cost(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) cost[i * k + j] = vol_a[i] + vol_s[j] - 2.0 * inter[i * k + j];
  MatchedVolume out;
  out.permutation = hungarian_min_assignment(cost, k);
  out.padded = a.k != s.k;
  for (std::size_t i = 0; i < k; ++i) out.volume += cost[i * k + out.permutation[i]];
  return out;
}

std::vector<double> partition_conductances(const Graph& g, const Partition& p) {
  if (p.size() != g.num_vertices()) throw InputError("partition_conductances: partition length does not match the graph");
  const auto empty = p.empty_clusters();
  if (!empty.empty()) {
    std::string list;
    for (auto c : empty) list += (list.empty() ? "" : ", ") + std::to_string(c);
    throw InputError("partition_conductances: empty parts {" + list + "}");
  }
  std::vector<double> vol(p.k, 0.0), cut(p.k, 0.0);
  for (std::size_t u = 0; u < g.num_vertices(); ++u) {
    const auto lu = p.labels[u];
    vol[lu] += g.degree(static_cast<Vertex>(u));
    const auto nbrs = g.neighbors(static_cast<Vertex>(u));
    const auto ws = g.neighbor_weights(static_cast<Vertex>(u));
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      if (p.labels[nbrs[i]] != lu) cut[lu] += ws[i];
  }
  std::vector<double> out(p.k);
  for (std::size_t c = 0; c < p.k; ++c) {
    const double denom = std::min(vol[c], g.total_volume() - vol[c]);
    if (!(denom > 0.0)) {
      if (p.k == 1) throw InputError("partition_conductances: a single part covering V has no conductance");
      throw InputError("partition_conductances: part " + std::to_string(c) + " has zero volume");
    }
    out[c] = cut[c] / denom;
  }
  return out;
}

ClusteringReport evaluate_partition(const Graph& g, const Partition& labels, const Partition* truth) {
  if (labels.size() != g.num_vertices())
    throw InputError("evaluate: " + std::to_string(labels.size()) + " labels for a graph with " +
                     std::to_string(g.num_vertices()) + " vertices");
  ClusteringReport r;
  r.n = labels.size();
  r.k = labels.k;
  r.cluster_sizes = labels.cluster_sizes();
  r.empty_clusters = labels.empty_clusters();
  if (r.empty_clusters.empty() && labels.k >= 2) {
    r.conductances = partition_conductances(g, labels);
    r.max_conductance = *std::max_element(r.conductances.begin(), r.conductances.end());
  }
  if (truth != nullptr) {
    r.has_truth = true;
    r.ari = ari(labels, *truth);
    r.nmi = nmi(labels, *truth);
    const MatchedVolume mv = matched_sym_diff_volume(g, labels, *truth);
    r.matched_sym_diff_volume = mv.volume;
    r.permutation = mv.permutation;
    r.padded = mv.padded;
  }
  return r;
}

std::string report_to_json(const ClusteringReport& report, bool include_timings) {
  nlohmann::ordered_json j;
  j["n"] = report.n;
  j["k"] = report.k;
  j["cluster_sizes"] = report.cluster_sizes;
  j["empty_clusters"] = report.empty_clusters;
  j["conductances"] = report.conductances;
  j["max_conductance"] = report.max_conductance;
  if (report.has_truth) {
    j["ari"] = report.ari;
    j["nmi"] = report.nmi;
    j["matched_sym_diff_volume"] = report.matched_sym_diff_volume;
    j["permutation"] = report.permutation;
    j["padded"] = report.padded;
  }
  if (include_timings) {
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    for (const auto& [stage, ms] : report.timings_ms) t[stage] = ms;
    j["timings_ms"] = t;
  }
  return j.dump(2) + "\n";
}

}  // namespace specluster
