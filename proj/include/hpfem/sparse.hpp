#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace hpfem {

struct Triplet {
  int row;
  int col;
  double value;
};

/**
 * Square sparse matrix in compressed row storage.
 *
 * Built from triplets: entries are bucketed by row, stably sorted by column
 * and duplicates summed in insertion order, so the result does not depend on
 * how the triplets were produced as long as their order is fixed.
 */
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(int n, std::span<const Triplet> triplets, bool symmetric = false);

  /// Symmetric matrix from triplets with row <= col; stored in full, exactly symmetric.
  static SparseMatrix from_upper(int n, std::span<const Triplet> upper);

  int rows() const { return n_; }
  int cols() const { return n_; }
  long long nonzeros() const { return static_cast<long long>(values_.size()); }
  bool symmetric() const { return symmetric_; }

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_index() const { return col_; }
  std::span<const double> values() const { return values_; }

  /// Entry (i, j), zero when not stored.
  double coeff(int i, int j) const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  std::vector<double> diagonal() const;

  /// max |A_ij - A_ji| over stored entries.
  double max_asymmetry() const;
  double max_abs() const;

  /// alpha * A + beta * B with the union sparsity pattern.
  static SparseMatrix linear_combination(double alpha, const SparseMatrix& a, double beta,
                                         const SparseMatrix& b);

  Eigen::SparseMatrix<double> to_eigen() const;
  Eigen::MatrixXd to_dense() const;

private:
  int n_ = 0;
  bool symmetric_ = false;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_;
  std::vector<double> values_;
};

/// Coordinate MatrixMarket file; symmetric matrices store only the lower triangle.
void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& file);
SparseMatrix read_matrix_market(const std::filesystem::path& file);

} // namespace hpfem
