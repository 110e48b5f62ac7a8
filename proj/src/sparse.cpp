#include "bihar/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace bihar {

SparseMatrix::SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, const std::vector<Triplet>& t) {
  SparseMatrix m(rows, cols);
  std::vector<int> count(rows + 1, 0);
  for (const auto& x : t) {
    if (x.row < 0 || x.row >= rows || x.col < 0 || x.col >= cols)
      throw std::out_of_range("triplet index out of range");
    ++count[x.row + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());
  // bucket by row keeping input order
  std::vector<int> order(t.size());
  std::vector<int> fill(count.begin(), count.end() - 1);
  for (std::size_t k = 0; k < t.size(); ++k) order[fill[t[k].row]++] = static_cast<int>(k);
  for (int i = 0; i < rows; ++i) {
    auto b = order.begin() + count[i], e = order.begin() + count[i + 1];
    std::stable_sort(b, e, [&](int p, int q) { return t[p].col < t[q].col; });
    for (auto it = b; it != e; ++it) {
      const auto& x = t[*it];
      if (static_cast<int>(m.col_.size()) > m.row_ptr_[i] && m.col_.back() == x.col)
        m.values_.back() += x.value;
      else {
        m.col_.push_back(x.col);
        m.values_.push_back(x.value);
      }
    }
    m.row_ptr_[i + 1] = static_cast<int>(m.col_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::from_eigen(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a) {
  std::vector<Triplet> t;
  for (int i = 0; i < a.outerSize(); ++i)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a, i); it; ++it)
      t.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), it.value()});
  return from_triplets(static_cast<int>(a.rows()), static_cast<int>(a.cols()), t);
}

Eigen::VectorXd SparseMatrix::multiply(const Eigen::VectorXd& x) const {
  if (x.size() != cols_) throw std::invalid_argument("multiply: size mismatch");
  Eigen::VectorXd y(rows_);
  for (int i = 0; i < rows_; ++i) {
    double s = 0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_[k]];
    y[i] = s;
  }
  return y;
}

Eigen::VectorXd SparseMatrix::multiply_transpose(const Eigen::VectorXd& x) const {
  if (x.size() != rows_) throw std::invalid_argument("multiply_transpose: size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[col_[k]] += values_[k] * x[i];
  return y;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (int i = 0; i < rows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) t.push_back({col_[k], i, values_[k]});
  return from_triplets(cols_, rows_, t);
}

double SparseMatrix::coeff(int i, int j) const {
  auto b = col_.begin() + row_ptr_[i], e = col_.begin() + row_ptr_[i + 1];
  auto it = std::lower_bound(b, e, j);
  return (it != e && *it == j) ? values_[it - col_.begin()] : 0.0;
}

double SparseMatrix::max_abs() const {
  double m = 0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool SparseMatrix::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  const double scale = std::max(max_abs(), 1e-300);
  for (int i = 0; i < rows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (std::abs(values_[k] - coeff(col_[k], i)) > tol * scale) return false;
  return true;
}

Eigen::SparseMatrix<double> SparseMatrix::to_eigen() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(values_.size());
  for (int i = 0; i < rows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) t.emplace_back(i, col_[k], values_[k]);
  Eigen::SparseMatrix<double> a(rows_, cols_);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) a(i, col_[k]) = values_[k];
  return a;
}

SparseMatrix SparseMatrix::permuted(const std::vector<int>& perm) const {
  if (rows_ != cols_ || static_cast<int>(perm.size()) != rows_)
    throw std::invalid_argument("permuted: needs a square matrix and a full permutation");
  std::vector<int> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
  std::vector<Triplet> t;
  for (int i = 0; i < rows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) t.push_back({inv[i], inv[col_[k]], values_[k]});
  return from_triplets(rows_, cols_, t);
}

void SparseMatrix::write_matrix_market(std::ostream& os) const {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << rows_ << ' ' << cols_ << ' ' << nnz() << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int i = 0; i < rows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      os << i + 1 << ' ' << col_[k] + 1 << ' ' << values_[k] << '\n';
}

}  // namespace bihar
