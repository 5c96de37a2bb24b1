#include "specluster/kmeans.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "specluster/errors.hpp"
#include "specluster/parallel.hpp"
#include "specluster/rng.hpp"

namespace specluster {

PointSet::PointSet(std::size_t n, std::size_t d, std::vector<double> coords)
    : n_(n), d_(d), coords_(std::move(coords)) {
  if (d_ == 0) throw InputError("PointSet: dimension must be >= 1");
  if (coords_.size() != n_ * d_) throw InputError("PointSet: coordinate count does not equal n * d");
  for (double c : coords_)
    if (!std::isfinite(c)) throw InputError("PointSet: non-finite coordinate");
}

PointSet PointSet::from_embedding(const EmbeddingMatrix& e) {
  PointSet p(e.rows(), e.cols());
  for (std::size_t j = 0; j < e.cols(); ++j) {
    const auto col = e.column(j);
    for (std::size_t i = 0; i < e.rows(); ++i) p.coords_[i * p.d_ + j] = col[i];
  }
  return p;
}

Partition::Partition(std::vector<std::uint32_t> labels_, std::size_t k_) : labels(std::move(labels_)), k(k_) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] >= k)
      throw InputError("partition: label " + std::to_string(labels[i]) + " at index " + std::to_string(i) +
                       " is not below k = " + std::to_string(k));
}

Partition Partition::from_labels(std::vector<std::uint32_t> labels_) {
  std::size_t k = 0;
  for (auto l : labels_) k = std::max<std::size_t>(k, std::size_t{l} + 1);
  return Partition(std::move(labels_), k);
}

std::vector<std::size_t> Partition::cluster_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (auto l : labels) ++sizes[l];
  return sizes;
}

std::vector<std::size_t> Partition::empty_clusters() const {
  std::vector<std::size_t> out;
  const auto sizes = cluster_sizes();
  for (std::size_t c = 0; c < k; ++c)
    if (sizes[c] == 0) out.push_back(c);
  return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

namespace {

PointSet cluster_means(const PointSet& points, const Partition& part) {
  PointSet means(part.k, points.dim());
  std::vector<std::size_t> counts(part.k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto m = means.row(part.labels[i]);
    const auto p = points.row(i);
    for (std::size_t j = 0; j < p.size(); ++j) m[j] += p[j];
    ++counts[part.labels[i]];
  }
  for (std::size_t c = 0; c < part.k; ++c) {
    if (counts[c] == 0) continue;
    for (double& v : means.row(c)) v /= static_cast<double>(counts[c]);
  }
  return means;
}

// Nearest center for every point; ties go to the lowest index.
void assign(const PointSet& points, const PointSet& centers, std::size_t threads,
            std::vector<std::uint32_t>& labels, std::vector<double>& dist) {
  parallel_for(0, points.size(), threads, [&](std::size_t i) {
    const auto p = points.row(i);
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t arg = 0;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d = squared_distance(p, centers.row(c));
      if (d < best) {
        best = d;
        arg = static_cast<std::uint32_t>(c);
      }
    }
    labels[i] = arg;
    dist[i] = best;
  });
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

double kmeans_cost(const PointSet& points, const Partition& part) {
  if (part.size() != points.size())
    throw InputError("kmeans_cost: partition has " + std::to_string(part.size()) + " labels for " +
                     std::to_string(points.size()) + " points");
  const PointSet means = cluster_means(points, part);
  double cost = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) cost += squared_distance(points.row(i), means.row(part.labels[i]));
  return cost;
}

KMeansSeeding kmeans_pp_seed(const PointSet& points, std::size_t k, std::uint64_t seed) {
  const std::size_t n = points.size();
  if (k == 0) throw InputError("kmeans_pp_seed: k must be >= 1");
  if (k > n) throw InputError("kmeans_pp_seed: k = " + std::to_string(k) + " exceeds the number of points " +
                              std::to_string(n));
  Rng rng(seed);
  KMeansSeeding out{{}, PointSet(k, points.dim())};
  std::vector<char> chosen(n, 0);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  auto take = [&](std::size_t row) {
    chosen[row] = 1;
    const std::size_t c = out.rows.size();
    out.rows.push_back(row);
    std::copy_n(points.row(row).begin(), points.dim(), out.centers.row(c).begin());
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(points.row(i), points.row(row)));
    d2[row] = 0.0;
  };

  take(static_cast<std::size_t>(rng.below(n)));
  while (out.rows.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (!chosen[i]) total += d2[i];
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i] || d2[i] == 0.0) continue;
        acc += d2[i];
        pick = i;
        if (acc > target) break;
      }
    } else {
      std::size_t r = static_cast<std::size_t>(rng.below(n - out.rows.size()));
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i]) continue;
        if (r-- == 0) {
          pick = i;
          break;
        }
      }
    }
    take(pick);
  }
  return out;
}

LloydResult lloyd(const PointSet& points, std::size_t k, std::uint64_t seed, const LloydOptions& options) {
  const std::size_t n = points.size();
  if (k == 0 || k > n)
    throw InputError("lloyd: need 1 <= k <= n (k = " + std::to_string(k) + ", n = " + std::to_string(n) + ")");

  KMeansSeeding seeding = kmeans_pp_seed(points, k, seed);
  LloydResult res;
  res.centers = std::move(seeding.centers);
  std::vector<std::uint32_t> labels(n, 0);
  std::vector<double> dist(n, 0.0);

  assign(points, res.centers, options.threads, labels, dist);
  res.seed_cost = sum(dist);

  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < std::max<std::size_t>(options.max_iters, 1); ++it) {
    if (it > 0) assign(points, res.centers, options.threads, labels, dist);

    // Refill empty clusters with the point farthest from its center.
    std::vector<std::size_t> sizes(k, 0);
    for (auto l : labels) ++sizes[l];
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[labels[i]] < 2) continue;
        if (far == n || dist[i] > dist[far]) far = i;
      }
      if (far == n) break;
      --sizes[labels[far]];
      labels[far] = static_cast<std::uint32_t>(c);
      sizes[c] = 1;
      dist[far] = 0.0;
    }

    res.partition = Partition(labels, k);
    res.centers = cluster_means(points, res.partition);
    const double cost = kmeans_cost(points, res.partition);
    assert(res.cost_trace.empty() || cost <= res.cost_trace.back() * (1.0 + 1e-12) + 1e-300);
    res.cost_trace.push_back(cost);
    res.cost = cost;
    res.iterations = it + 1;

    const double improvement = prev - cost;
    if (cost == 0.0 || (std::isfinite(prev) && improvement <= options.tol * prev)) {
      res.converged = true;
      break;
    }
    prev = cost;
  }
  return res;
}

LloydResult kmeans(const PointSet& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
  LloydResult best;
  bool have = false;
  for (std::size_t r = 0; r < std::max<std::size_t>(options.restarts, 1); ++r) {
    LloydResult run = lloyd(points, k, derive_seed(seed, r), options.lloyd);
    if (!have || run.cost < best.cost) {
      best = std::move(run);
      have = true;
    }
  }
  return best;
}

}  // namespace specluster
