#pragma once

// Small dense matrices over a generic field (double or exact rationals).

#include <cmath>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace bihar {

template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, T(0)) {}

  static DenseMatrix identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
  const T& operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend DenseMatrix operator*(const DenseMatrix& x, const DenseMatrix& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("DenseMatrix: shape mismatch");
    DenseMatrix r(x.rows_, y.cols_);
    for (int i = 0; i < x.rows_; ++i)
      for (int k = 0; k < x.cols_; ++k) {
        if (x(i, k) == T(0)) continue;
        for (int j = 0; j < y.cols_; ++j) r(i, j) += x(i, k) * y(k, j);
      }
    return r;
  }

  /// Row echelon form in place; returns pivot columns and the sign of the
  /// row permutation.  Exact types take the first nonzero pivot, floating
  /// types the largest.
  std::vector<int> eliminate(int& sign, T* det = nullptr) {
    sign = 1;
    std::vector<int> pivots;
    if (det) *det = T(1);
    int row = 0;
    for (int col = 0; col < cols_ && row < rows_; ++col) {
      int p = -1;
      if constexpr (std::is_floating_point_v<T>) {
        double best = 0;
        for (int i = row; i < rows_; ++i)
          if (std::abs((*this)(i, col)) > best) best = std::abs((*this)(i, col)), p = i;
        if (best <= 1e-300) p = -1;
      } else {
        for (int i = row; i < rows_; ++i)
          if ((*this)(i, col) != T(0)) {
            p = i;
            break;
          }
      }
      if (p < 0) continue;
      if (p != row) {
        for (int j = 0; j < cols_; ++j) std::swap((*this)(p, j), (*this)(row, j));
        sign = -sign;
      }
      const T piv = (*this)(row, col);
      if (det) *det *= piv;
      for (int i = row + 1; i < rows_; ++i) {
        if ((*this)(i, col) == T(0)) continue;
        const T f = (*this)(i, col) / piv;
        for (int j = col; j < cols_; ++j) (*this)(i, j) -= f * (*this)(row, j);
      }
      pivots.push_back(col);
      ++row;
    }
    return pivots;
  }

  T determinant() const {
    if (rows_ != cols_) throw std::invalid_argument("determinant: not square");
    DenseMatrix w = *this;
    int sign;
    T det;
    const auto piv = w.eliminate(sign, &det);
    if (static_cast<int>(piv.size()) < rows_) return T(0);
    return sign > 0 ? det : T(0) - det;
  }

  /// Solves this * X = B by Gauss-Jordan; throws if singular.
  DenseMatrix solve(const DenseMatrix& b) const {
    if (rows_ != cols_ || b.rows_ != rows_) throw std::invalid_argument("solve: shape mismatch");
    DenseMatrix aug(rows_, cols_ + b.cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
      for (int j = 0; j < b.cols_; ++j) aug(i, cols_ + j) = b(i, j);
    }
    int sign;
    const auto piv = aug.eliminate(sign);
    if (static_cast<int>(piv.size()) < rows_ || piv.back() >= cols_)
      throw std::runtime_error("solve: singular matrix");
    for (int i = rows_ - 1; i >= 0; --i) {
      const T d = aug(i, i);
      for (int j = i; j < aug.cols_; ++j) aug(i, j) /= d;
      for (int k = 0; k < i; ++k) {
        const T f = aug(k, i);
        if (f == T(0)) continue;
        for (int j = i; j < aug.cols_; ++j) aug(k, j) -= f * aug(i, j);
      }
    }
    DenseMatrix x(rows_, b.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < b.cols_; ++j) x(i, j) = aug(i, cols_ + j);
    return x;
  }

  DenseMatrix inverse() const { return solve(identity(rows_)); }

  /// Basis of the right null space, one column per vector.  Floating types
  /// treat entries below tol * max|a| as zero.
  DenseMatrix nullspace(double tol = 1e-12) const {
    DenseMatrix w = *this;
    if constexpr (std::is_floating_point_v<T>) {
      double m = 0;
      for (const auto& v : w.a_) m = std::max(m, std::abs(v));
      for (auto& v : w.a_)
        if (std::abs(v) <= tol * m) v = 0;
    }
    // reduced row echelon form
    std::vector<int> piv;
    int row = 0;
    for (int col = 0; col < cols_ && row < rows_; ++col) {
      int p = -1;
      if constexpr (std::is_floating_point_v<T>) {
        double best = 0, m = 0;
        for (const auto& v : a_) m = std::max(m, std::abs(v));
        for (int i = row; i < rows_; ++i)
          if (std::abs(w(i, col)) > best) best = std::abs(w(i, col)), p = i;
        if (best <= tol * m) p = -1;
      } else {
        for (int i = row; i < rows_; ++i)
          if (w(i, col) != T(0)) {
            p = i;
            break;
          }
      }
      if (p < 0) continue;
      for (int j = 0; j < cols_; ++j) std::swap(w(p, j), w(row, j));
      const T d = w(row, col);
      for (int j = 0; j < cols_; ++j) w(row, j) /= d;
      for (int i = 0; i < rows_; ++i) {
        if (i == row || w(i, col) == T(0)) continue;
        const T f = w(i, col);
        for (int j = 0; j < cols_; ++j) w(i, j) -= f * w(row, j);
      }
      piv.push_back(col);
      ++row;
    }
    std::vector<int> is_piv(cols_, -1);
    for (std::size_t r = 0; r < piv.size(); ++r) is_piv[piv[r]] = static_cast<int>(r);
    std::vector<int> free;
    for (int j = 0; j < cols_; ++j)
      if (is_piv[j] < 0) free.push_back(j);
    DenseMatrix n(cols_, static_cast<int>(free.size()));
    for (std::size_t k = 0; k < free.size(); ++k) {
      n(free[k], static_cast<int>(k)) = T(1);
      for (int j = 0; j < cols_; ++j)
        if (is_piv[j] >= 0) n(j, static_cast<int>(k)) = T(0) - w(is_piv[j], free[k]);
    }
    return n;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> a_;
};

}  // namespace bihar
