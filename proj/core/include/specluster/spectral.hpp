#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "specluster/dense.hpp"
#include "specluster/graph.hpp"

namespace specluster {

// n x l matrix stored column-major: each column is one embedding vector.
// `scaled` records whether rows have been multiplied by deg(u)^{-1/2}.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool scaled() const { return scaled_; }
  void set_scaled(bool s) { scaled_ = s; }

  std::span<double> column(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> column(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }
  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }
  std::span<const double> data() const { return data_; }

  // Throws NumericError naming the first non-finite entry.
  void check_finite() const;

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  bool scaled_ = false;
  std::vector<double> data_;
};

// Type-erased symmetric linear operator y = A x on R^n. The power method and
// the subspace eigensolver only need this, so synthetic dense operators can
// stand in for graph operators.
class SymmetricOperator {
 public:
  using ApplyFn = std::function<void(std::span<const double>, std::span<double>)>;

  SymmetricOperator(std::size_t n, ApplyFn apply) : n_(n), apply_(std::move(apply)) {}

  std::size_t size() const { return n_; }
  void apply(std::span<const double> x, std::span<double> y) const;

 private:
  std::size_t n_;
  ApplyFn apply_;
};

// Matrix-free M = I - N/2 = (I + D^{-1/2} A D^{-1/2}) / 2 for a graph without
// isolated vertices. Holds a reference to the graph, which must outlive it.
class SignlessLaplacianOp {
 public:
  explicit SignlessLaplacianOp(const Graph& g);

  std::size_t size() const { return graph_->num_vertices(); }
  const Graph& graph() const { return *graph_; }
  std::span<const double> inv_sqrt_degrees() const { return inv_sqrt_deg_; }

  // y = M x: two diagonal scalings and one SpMV. x and y must not alias.
  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

  SymmetricOperator as_operator() const;

 private:
  const Graph* graph_;
  std::vector<double> inv_sqrt_deg_;
};

// Same as SignlessLaplacianOp::apply; named entry point for the operator.
std::vector<double> apply_m(const SignlessLaplacianOp& op, std::span<const double> x);

// Returns M^t x0 with no normalization between steps.
std::vector<double> power_method(const SymmetricOperator& op, std::span<const double> x0, std::size_t t);
std::vector<double> power_method(const SignlessLaplacianOp& op, std::span<const double> x0, std::size_t t);

// Applies the power method to every column of `x` in place. Columns are
// independent and may run concurrently; the result is identical for any
// thread count.
void power_method_columns(const SymmetricOperator& op, EmbeddingMatrix& x, std::size_t t,
                          std::size_t threads = 1);

// l independent N(0, I) vectors of length n. Column j is drawn from the stream
// derive_seed(seed, j), so columns can be generated in any order.
EmbeddingMatrix sample_gaussian_vectors(std::size_t n, std::size_t l, std::uint64_t seed);

// Modified Gram-Schmidt with one reorthogonalization pass. Throws NumericError
// naming the first column whose residual norm falls below rel_tol times its
// original norm.
void orthonormalize_columns(EmbeddingMatrix& x, double rel_tol = 1e-10);

struct SubspaceOptions {
  std::size_t max_iters = 1000;
  double tol = 1e-8;
  std::uint64_t seed = 0;
};

struct EigenResult {
  std::vector<double> values;  // descending
  EmbeddingMatrix vectors;     // orthonormal, column j pairs with values[j]
  std::vector<double> residuals;
  std::size_t iterations = 0;
  bool converged = false;

  double max_residual() const;
};

// Top-k eigenpairs by block subspace iteration with per-iteration
// orthonormalization and Rayleigh-Ritz extraction. Stops when every residual
// ||A f - gamma f||_2 is <= tol; otherwise returns with converged == false.
EigenResult subspace_iteration_eigs(const SymmetricOperator& op, std::size_t k,
                                    const SubspaceOptions& options = {});

// k Gaussian vectors, each power-iterated t steps, orthonormalized once at the end.
EmbeddingMatrix pm_k_orthonormal_vectors(const SymmetricOperator& op, std::size_t k, std::size_t t,
                                         std::uint64_t seed, std::size_t threads = 1);

// Dense n x n matrix of M, for tests and small-graph oracles.
DenseMatrix dense_signless_laplacian(const Graph& g);

}  // namespace specluster
