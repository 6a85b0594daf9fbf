#pragma once

/**
 * @file matrix.hpp
 * @brief Dense row-major matrix plus exact rank and determinant.
 *
 * exact_rank and exact_determinant clear denominators row by row and then
 * run Bareiss fraction-free elimination over mpz integers, so every
 * intermediate is an exact integer and every division is exact.
 */

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lyness/rational.hpp"

namespace lyness {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw std::invalid_argument("ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] std::span<const T> row(std::size_t i) const {
    return std::span<const T>(data_).subspan(i * cols_, cols_);
  }

  /// Matrix-vector product.
  [[nodiscard]] std::vector<T> apply(std::span<const T> v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector size mismatch");
    std::vector<T> out(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      T acc(0);
      for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
      out[i] = std::move(acc);
    }
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product size mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) {
        T acc(0);
        for (std::size_t l = 0; l < a.cols_; ++l) acc += a(i, l) * b(l, j);
        out(i, j) = std::move(acc);
      }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RatMatrix = Matrix<Rat>;

namespace detail {

// Each row multiplied by the lcm of its denominators; rank and the sign
// pattern are unchanged, the determinant is scaled by the product of the lcms.
inline std::vector<std::vector<mpz_class>> integer_rows(const RatMatrix& m, mpq_class* scale) {
  std::vector<std::vector<mpz_class>> out(m.rows(), std::vector<mpz_class>(m.cols()));
  mpq_class total = 1;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).mpq().get_den_mpz_t());
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const mpq_class& q = m(i, j).mpq();
      out[i][j] = q.get_num() * (l / q.get_den());
    }
    total *= l;
  }
  if (scale != nullptr) *scale = total;
  return out;
}

// Bareiss elimination in place; returns rank, and the sign flips from row
// swaps through *swaps.
inline std::size_t bareiss(std::vector<std::vector<mpz_class>>& a, std::size_t cols, int* swaps) {
  const std::size_t rows = a.size();
  mpz_class prev = 1;
  std::size_t rank = 0;
  int flips = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      std::swap(a[pivot], a[rank]);
      ++flips;
    }
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < cols; ++j) {
        mpz_class v = a[rank][col] * a[i][j] - a[i][col] * a[rank][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = std::move(v);
      }
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  if (swaps != nullptr) *swaps = flips;
  return rank;
}

}  // namespace detail

/// Rank over Q. Exact; no tolerance involved.
inline std::size_t exact_rank(const RatMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  auto a = detail::integer_rows(m, nullptr);
  return detail::bareiss(a, m.cols(), nullptr);
}

inline Rat exact_determinant(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return Rat(1);
  mpq_class scale;
  auto a = detail::integer_rows(m, &scale);
  int swaps = 0;
  if (detail::bareiss(a, n, &swaps) < n) return Rat(0);
  // After Bareiss the last pivot is the determinant of the integer matrix.
  mpq_class det(a[n - 1][n - 1]);
  if (swaps % 2 != 0) det = -det;
  return Rat(mpq_class(det / scale));
}

}  // namespace lyness
