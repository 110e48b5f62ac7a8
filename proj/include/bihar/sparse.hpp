#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <vector>

namespace bihar {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix.  Duplicate triplets are summed in input
/// order, so equal triplet sequences give bitwise equal matrices.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols);
  static SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& t);
  static SparseMatrix from_eigen(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(values_.size()); }
  const std::vector<int>& row_offsets() const { return row_ptr_; }
  const std::vector<int>& col_indices() const { return col_; }
  const std::vector<double>& values() const { return values_; }

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd multiply_transpose(const Eigen::VectorXd& x) const;
  SparseMatrix transpose() const;
  double coeff(int i, int j) const;
  double max_abs() const;
  bool is_symmetric(double tol) const;
  Eigen::SparseMatrix<double> to_eigen() const;
  Eigen::MatrixXd to_dense() const;
  /// Symmetric reindexing P A P^T with row/col i of the result equal to
  /// row/col perm[i] of this.
  SparseMatrix permuted(const std::vector<int>& perm) const;

  void write_matrix_market(std::ostream& os) const;

  bool operator==(const SparseMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && row_ptr_ == o.row_ptr_ && col_ == o.col_ &&
           values_ == o.values_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_;
  std::vector<double> values_;
};

}  // namespace bihar
