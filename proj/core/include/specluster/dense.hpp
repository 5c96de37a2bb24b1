#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace specluster {

// Small row-major dense matrix. Used for Rayleigh-Ritz projections, synthetic
// test operators and the dense eigen-decomposition in the cost harness.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> data() const { return data_; }

  // y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct SymmetricEigen {
  std::vector<double> values;  // descending
  DenseMatrix vectors;         // column j pairs with values[j]
};

// Full eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
// Eigenvalues are sorted descending; ties keep the lower original column first.
// Intended for n up to a few hundred.
SymmetricEigen symmetric_eigen(const DenseMatrix& a, double tol = 1e-14, std::size_t max_sweeps = 100);

}  // namespace specluster
