#include "specluster/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specluster/errors.hpp"
#include "specluster/parallel.hpp"
#include "specluster/rng.hpp"

namespace specluster {

void EmbeddingMatrix::check_finite() const {
  for (std::size_t idx = 0; idx < data_.size(); ++idx) {
    if (!std::isfinite(data_[idx]))
      throw NumericError("embedding has a non-finite entry at row " + std::to_string(idx % rows_) +
                         ", column " + std::to_string(idx / rows_));
  }
}

void SymmetricOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_)
    throw InputError("operator apply: vector length " + std::to_string(x.size()) + "/" +
                     std::to_string(y.size()) + " does not match dimension " + std::to_string(n_));
  apply_(x, y);
}

SignlessLaplacianOp::SignlessLaplacianOp(const Graph& g) : graph_(&g), inv_sqrt_deg_(g.num_vertices()) {
  for (std::size_t u = 0; u < g.num_vertices(); ++u) {
    const double d = g.degree(static_cast<Vertex>(u));
    if (!(d > 0.0))
      throw InputError("signless Laplacian undefined: vertex " + std::to_string(u) + " has degree 0");
    inv_sqrt_deg_[u] = 1.0 / std::sqrt(d);
  }
}

void SignlessLaplacianOp::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  if (x.size() != n || y.size() != n)
    throw InputError("apply_m: vector length " + std::to_string(x.size()) + " does not match n = " +
                     std::to_string(n));
  thread_local std::vector<double> scaled;
  scaled.resize(n);
  const double* s = inv_sqrt_deg_.data();
  for (std::size_t v = 0; v < n; ++v) scaled[v] = s[v] * x[v];

  const auto offsets = graph_->row_offsets();
  const Vertex* cols = graph_->col_indices().data();
  const double* w = graph_->weights().data();
  for (std::size_t u = 0; u < n; ++u) {
    double acc = 0.0;
    for (std::size_t e = offsets[u]; e < offsets[u + 1]; ++e) acc += w[e] * scaled[cols[e]];
    y[u] = 0.5 * x[u] + 0.5 * s[u] * acc;
  }
}

std::vector<double> SignlessLaplacianOp::apply(std::span<const double> x) const {
  std::vector<double> y(size());
  apply(x, y);
  return y;
}

SymmetricOperator SignlessLaplacianOp::as_operator() const {
  return SymmetricOperator(size(), [this](std::span<const double> x, std::span<double> y) { apply(x, y); });
}

std::vector<double> apply_m(const SignlessLaplacianOp& op, std::span<const double> x) { return op.apply(x); }

namespace {

void power_in_place(const SymmetricOperator& op, std::span<double> x, std::size_t t) {
  std::vector<double> buf(x.size());
  std::span<double> cur = x;
  std::span<double> next = buf;
  for (std::size_t i = 0; i < t; ++i) {
    op.apply(cur, next);
    std::swap(cur, next);
  }
  if (cur.data() != x.data()) std::copy(cur.begin(), cur.end(), x.begin());
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// Orthogonalizes column j against columns [0, j) twice; returns the final norm.
double project_out(EmbeddingMatrix& x, std::size_t j) {
  auto cj = x.column(j);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < j; ++i) {
      const auto ci = std::as_const(x).column(i);
      axpy(-dot(ci, cj), ci, cj);
    }
  }
  return norm2(cj);
}

// Like orthonormalize_columns, but a column that collapses is replaced by a
// fresh random direction instead of failing. Used inside the eigensolver where
// the block may legitimately contain (near-)null directions of the operator.
void orthonormalize_or_refill(EmbeddingMatrix& x, Rng& rng, double rel_tol) {
  for (std::size_t j = 0; j < x.cols(); ++j) {
    auto cj = x.column(j);
    double before = norm2(cj);
    double after = project_out(x, j);
    for (int attempt = 0; !(after > rel_tol * before) || !(after > 0.0); ++attempt) {
      if (attempt == 8) throw NumericError("subspace iteration: cannot complete an orthonormal basis");
      for (double& v : cj) v = rng.normal();
      before = norm2(cj);
      after = project_out(x, j);
    }
    for (double& v : cj) v /= after;
  }
}

}  // namespace

std::vector<double> power_method(const SymmetricOperator& op, std::span<const double> x0, std::size_t t) {
  if (x0.size() != op.size()) throw InputError("power_method: start vector length mismatch");
  std::vector<double> x(x0.begin(), x0.end());
  power_in_place(op, x, t);
  return x;
}

std::vector<double> power_method(const SignlessLaplacianOp& op, std::span<const double> x0, std::size_t t) {
  return power_method(op.as_operator(), x0, t);
}

void power_method_columns(const SymmetricOperator& op, EmbeddingMatrix& x, std::size_t t, std::size_t threads) {
  if (x.rows() != op.size()) throw InputError("power_method_columns: row count mismatch");
  parallel_for(0, x.cols(), threads, [&](std::size_t j) { power_in_place(op, x.column(j), t); });
}

EmbeddingMatrix sample_gaussian_vectors(std::size_t n, std::size_t l, std::uint64_t seed) {
  if (n == 0 || l == 0) throw InputError("sample_gaussian_vectors: n and l must be >= 1");
  EmbeddingMatrix x(n, l);
  for (std::size_t j = 0; j < l; ++j) {
    Rng rng(derive_seed(seed, j));
    for (double& v : x.column(j)) v = rng.normal();
  }
  return x;
}

void orthonormalize_columns(EmbeddingMatrix& x, double rel_tol) {
  for (std::size_t j = 0; j < x.cols(); ++j) {
    const double before = norm2(x.column(j));
    const double after = project_out(x, j);
    if (!(after > rel_tol * before) || !(after > 0.0))
      throw NumericError("orthonormalization: column " + std::to_string(j) +
                         " is numerically dependent on earlier columns (residual norm " +
                         std::to_string(after) + ")");
    for (double& v : x.column(j)) v /= after;
  }
}

double EigenResult::max_residual() const {
  return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
}

EigenResult subspace_iteration_eigs(const SymmetricOperator& op, std::size_t k, const SubspaceOptions& options) {
  const std::size_t n = op.size();
  if (k < 1 || k > n) throw InputError("subspace_iteration_eigs: need 1 <= k <= n");

  Rng refill(derive_seed(options.seed, 0xfeedULL));
  EmbeddingMatrix q = sample_gaussian_vectors(n, k, options.seed);
  orthonormalize_or_refill(q, refill, 1e-10);
  EmbeddingMatrix w(n, k);
  EigenResult result;

  for (std::size_t it = 1; it <= options.max_iters; ++it) {
    for (std::size_t j = 0; j < k; ++j) op.apply(q.column(j), w.column(j));

    DenseMatrix h(k, k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a; b < k; ++b) {
        const double s = 0.5 * (dot(q.column(a), w.column(b)) + dot(q.column(b), w.column(a)));
        h(a, b) = s;
        h(b, a) = s;
      }
    const SymmetricEigen ritz = symmetric_eigen(h);

    // Ritz vectors U = Q V and their images M U = W V.
    EmbeddingMatrix u(n, k), mu(n, k);
    for (std::size_t j = 0; j < k; ++j) {
      auto uj = u.column(j);
      auto muj = mu.column(j);
      for (std::size_t a = 0; a < k; ++a) {
        const double c = ritz.vectors(a, j);
        axpy(c, q.column(a), uj);
        axpy(c, w.column(a), muj);
      }
    }

    result.residuals.assign(k, 0.0);
    bool done = true;
    for (std::size_t j = 0; j < k; ++j) {
      double r2 = 0.0;
      const auto uj = std::as_const(u).column(j);
      const auto muj = std::as_const(mu).column(j);
      for (std::size_t i = 0; i < n; ++i) {
        const double d = muj[i] - ritz.values[j] * uj[i];
        r2 += d * d;
      }
      result.residuals[j] = std::sqrt(r2);
      if (!(result.residuals[j] <= options.tol)) done = false;
    }
    result.values = ritz.values;
    result.vectors = std::move(u);
    result.iterations = it;
    if (done) {
      result.converged = true;
      return result;
    }
    q = std::move(mu);
    orthonormalize_or_refill(q, refill, 1e-10);
  }
  return result;
}

EmbeddingMatrix pm_k_orthonormal_vectors(const SymmetricOperator& op, std::size_t k, std::size_t t,
                                         std::uint64_t seed, std::size_t threads) {
  if (k < 1) throw InputError("pm_k_orthonormal_vectors: k must be >= 1");
  EmbeddingMatrix x = sample_gaussian_vectors(op.size(), k, seed);
  power_method_columns(op, x, t, threads);
  orthonormalize_columns(x);
  return x;
}

DenseMatrix dense_signless_laplacian(const Graph& g) {
  const std::size_t n = g.num_vertices();
  SignlessLaplacianOp op(g);
  const auto s = op.inv_sqrt_degrees();
  DenseMatrix m(n, n);
  for (std::size_t u = 0; u < n; ++u) {
    m(u, u) = 0.5;
    const auto nbrs = g.neighbors(static_cast<Vertex>(u));
    const auto ws = g.neighbor_weights(static_cast<Vertex>(u));
    for (std::size_t i = 0; i < nbrs.size(); ++i) m(u, nbrs[i]) += 0.5 * s[u] * ws[i] * s[nbrs[i]];
  }
  return m;
}

}  // namespace specluster
