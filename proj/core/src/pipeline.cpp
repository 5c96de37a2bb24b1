#include "specluster/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "specluster/dense.hpp"
#include "specluster/errors.hpp"
#include "specluster/rng.hpp"

namespace specluster {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Stream ids under the master seed.
constexpr std::uint64_t kEmbedStream = 1;
constexpr std::uint64_t kKMeansStream = 2;

std::size_t ceil_to_size(double x) { return static_cast<std::size_t>(std::ceil(x - 1e-12)); }

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::pm_log_k: return "pm_log_k";
    case Mode::pm_k: return "pm_k";
    case Mode::eigs_k: return "eigs_k";
    case Mode::eigs_log_k: return "eigs_log_k";
  }
  return "unknown";
}

Mode parse_mode(std::string_view name) {
  for (Mode m : {Mode::pm_log_k, Mode::pm_k, Mode::eigs_k, Mode::eigs_log_k})
    if (to_string(m) == name) return m;
  throw InputError("unknown mode '" + std::string(name) + "' (expected pm_log_k, pm_k, eigs_k or eigs_log_k)");
}

std::size_t default_embedding_dim(std::size_t k) {
  return std::max<std::size_t>(1, ceil_to_size(std::log2(static_cast<double>(k))));
}

std::size_t default_power_steps(std::size_t n, std::size_t k) {
  const double ratio = std::max(2.0, static_cast<double>(n) / static_cast<double>(k));
  return ceil_to_size(10.0 * std::log(ratio));
}

std::size_t epsilon_embedding_dim(std::size_t k, double epsilon, bool cap_at_k) {
  const double l = (std::log2(static_cast<double>(k)) + std::log2(1.0 / epsilon)) / (epsilon * epsilon);
  std::size_t out = std::max<std::size_t>(1, ceil_to_size(l));
  return cap_at_k ? std::min(out, k) : out;
}

std::size_t epsilon_power_steps(std::size_t n, std::size_t k, double epsilon) {
  const double arg = 24.0 * static_cast<double>(n) / (epsilon * epsilon * static_cast<double>(k));
  return ceil_to_size(kPowerStepConstant * std::log(arg));
}

ResolvedParams resolve_params(const SpectralParams& params, std::size_t n) {
  if (params.k < 2 || params.k > n)
    throw InputError("k = " + std::to_string(params.k) + " must satisfy 2 <= k <= n = " + std::to_string(n));
  if (params.epsilon && !(*params.epsilon > 0.0 && *params.epsilon <= 1.0))
    throw InputError("epsilon must lie in (0, 1]");
  if (params.l && *params.l == 0) throw InputError("l must be >= 1");

  ResolvedParams r;
  r.k = params.k;
  r.mode = params.mode;
  r.seed = params.seed;
  r.epsilon = params.epsilon;
  if (params.l) {
    r.l = *params.l;
  } else if (params.epsilon) {
    r.l = epsilon_embedding_dim(params.k, *params.epsilon, true);
  } else {
    r.l = default_embedding_dim(params.k);
  }
  if (params.t) {
    r.t = *params.t;
  } else if (params.epsilon) {
    r.t = epsilon_power_steps(n, params.k, *params.epsilon);
  } else {
    r.t = default_power_steps(n, params.k);
  }
  switch (params.mode) {
    case Mode::pm_log_k: r.dims = r.l; break;
    case Mode::pm_k:
    case Mode::eigs_k: r.dims = r.k; break;
    case Mode::eigs_log_k: r.dims = default_embedding_dim(r.k); break;
  }
  return r;
}

EmbedResult embed(const Graph& g, const ResolvedParams& params, std::size_t threads,
                  const SubspaceOptions& eig_options) {
  const auto start = Clock::now();
  const SignlessLaplacianOp m(g);
  const SymmetricOperator op = m.as_operator();
  const std::uint64_t embed_seed = derive_seed(params.seed, kEmbedStream);
  EmbedResult out;
  switch (params.mode) {
    case Mode::pm_log_k:
      out.raw = sample_gaussian_vectors(g.num_vertices(), params.dims, embed_seed);
      power_method_columns(op, out.raw, params.t, threads);
      break;
    case Mode::pm_k:
      out.raw = pm_k_orthonormal_vectors(op, params.dims, params.t, embed_seed, threads);
      break;
    case Mode::eigs_k:
    case Mode::eigs_log_k: {
      SubspaceOptions opts = eig_options;
      opts.seed = embed_seed;
      EigenResult eig = subspace_iteration_eigs(op, params.dims, opts);
      out.raw = std::move(eig.vectors);
      eig.vectors = EmbeddingMatrix();
      out.eigen = std::move(eig);
      break;
    }
  }
  out.raw.check_finite();
  out.embed_ms = elapsed_ms(start);
  return out;
}

EmbeddingMatrix scale_by_inv_sqrt_degree(const Graph& g, const EmbeddingMatrix& y) {
  if (y.rows() != g.num_vertices()) throw InputError("scale: embedding rows do not match the graph");
  EmbeddingMatrix out = y;
  for (std::size_t j = 0; j < y.cols(); ++j) {
    auto col = out.column(j);
    for (std::size_t u = 0; u < y.rows(); ++u) col[u] /= std::sqrt(g.degree(static_cast<Vertex>(u)));
  }
  out.set_scaled(true);
  return out;
}

ClusterResult fast_spectral_cluster(const Graph& g, const SpectralParams& params) {
  const auto start = Clock::now();
  ClusterResult res;
  res.params = resolve_params(params, g.num_vertices());

  EmbedResult emb = embed(g, res.params, params.threads, params.eigensolver);
  res.timings.embed_ms = emb.embed_ms;
  if (emb.eigen) {
    res.eigensolver_converged = emb.eigen->converged;
    res.eigensolver_iterations = emb.eigen->iterations;
    res.eigensolver_max_residual = emb.eigen->max_residual();
  }

  auto t0 = Clock::now();
  res.embedding = scale_by_inv_sqrt_degree(g, emb.raw);
  res.timings.scale_ms = elapsed_ms(t0);
  res.raw_embedding = std::move(emb.raw);

  t0 = Clock::now();
  KMeansOptions km = params.kmeans;
  km.lloyd.threads = params.threads;
  LloydResult clustering = kmeans(PointSet::from_embedding(res.embedding), res.params.k,
                                  derive_seed(params.seed, kKMeansStream), km);
  res.timings.kmeans_ms = elapsed_ms(t0);
  res.partition = std::move(clustering.partition);
  res.kmeans_cost = clustering.cost;
  res.timings.total_ms = elapsed_ms(start);
  return res;
}

double max_relative_cost_deviation(const PointSet& a, double scale_a, const PointSet& b, double scale_b,
                                   const std::vector<Partition>& partitions) {
  double worst = 0.0;
  for (const Partition& p : partitions) {
    const double ca = kmeans_cost(a, p) / scale_a;
    const double cb = kmeans_cost(b, p) / scale_b;
    if (ca == cb) continue;
    worst = std::max(worst, std::abs(ca - cb) / cb);
  }
  return worst;
}

CostPreservationReport kmeans_cost_preservation_check(const Graph& g, const CostPreservationOptions& options,
                                                      const Partition* planted) {
  const std::size_t n = g.num_vertices();
  const std::size_t k = options.k;
  if (n > kMaxDenseHarnessVertices)
    throw InputError("cost preservation check needs a dense eigendecomposition; n = " + std::to_string(n) +
                     " exceeds " + std::to_string(kMaxDenseHarnessVertices));
  if (k < 2 || k > n) throw InputError("cost preservation check: need 2 <= k <= n");
  if (!(options.epsilon > 0.0 && options.epsilon <= 1.0)) throw InputError("epsilon must lie in (0, 1]");
  if (planted && (planted->size() != n || planted->k != k))
    throw InputError("cost preservation check: planted partition does not match (n, k)");

  CostPreservationReport rep;
  rep.l = options.l.value_or(epsilon_embedding_dim(k, options.epsilon, false));
  rep.t = options.t.value_or(epsilon_power_steps(n, k, options.epsilon));

  const SymmetricEigen eig = symmetric_eigen(dense_signless_laplacian(g));
  rep.gamma_k = eig.values[k - 1];
  rep.gamma_k_plus_1 = k < n ? eig.values[k] : 0.0;

  EmbeddingMatrix f(n, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t u = 0; u < n; ++u) f(u, j) = eig.vectors(u, j);

  const EmbeddingMatrix x0 = sample_gaussian_vectors(n, rep.l, derive_seed(options.seed, kEmbedStream));
  // Z = F (F^T X0)
  EmbeddingMatrix z(n, rep.l);
  for (std::size_t c = 0; c < rep.l; ++c) {
    const auto xc = x0.column(c);
    auto zc = z.column(c);
    for (std::size_t j = 0; j < k; ++j) {
      const auto fj = f.column(j);
      double a = 0.0;
      for (std::size_t u = 0; u < n; ++u) a += fj[u] * xc[u];
      for (std::size_t u = 0; u < n; ++u) zc[u] += a * fj[u];
    }
  }
  const SignlessLaplacianOp m(g);
  EmbeddingMatrix y = x0;
  power_method_columns(m.as_operator(), y, rep.t);

  double frob = 0.0;
  for (std::size_t i = 0; i < y.data().size(); ++i) {
    const double d = y.data()[i] - z.data()[i];
    frob += d * d;
  }
  rep.frobenius_y_minus_z = std::sqrt(frob);

  const PointSet bf = PointSet::from_embedding(scale_by_inv_sqrt_degree(g, f));
  const PointSet bz = PointSet::from_embedding(scale_by_inv_sqrt_degree(g, z));
  const PointSet by = PointSet::from_embedding(scale_by_inv_sqrt_degree(g, y));

  std::vector<Partition> parts;
  if (planted) parts.push_back(*planted);
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    Rng rng(derive_seed(options.seed, 1000 + trial));
    std::vector<std::uint32_t> labels(n);
    for (auto& lab : labels) lab = static_cast<std::uint32_t>(rng.below(k));
    parts.emplace_back(std::move(labels), k);
  }
  rep.partitions = parts.size();
  rep.planted_ratio = std::numeric_limits<double>::quiet_NaN();

  const double l = static_cast<double>(rep.l);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const double cf = kmeans_cost(bf, parts[i]);
    const double cz = kmeans_cost(bz, parts[i]);
    const double cy = kmeans_cost(by, parts[i]);
    const double ratio = cf / (cz / l);
    const double mult = std::abs(ratio - 1.0);
    const double add = std::abs(std::sqrt(cy) - std::sqrt(cz));
    rep.max_multiplicative_deviation = std::max(rep.max_multiplicative_deviation, mult);
    rep.max_additive_deviation = std::max(rep.max_additive_deviation, add);
    if (planted && i == 0) {
      rep.planted_ratio = ratio;
      rep.planted_multiplicative_deviation = mult;
      rep.planted_additive_deviation = add;
    }
  }
  return rep;
}

}  // namespace specluster
