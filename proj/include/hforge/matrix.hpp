#pragma once

// Dense exact matrices over Integer or Rational, row-major.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hforge/error.hpp"
#include "hforge/integer.hpp"

namespace hforge {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  Matrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    for (auto const& r : rows) {
      if (r.size() != cols_) {
        throw DimensionMismatch("ragged matrix literal");
      }
      for (long x : r) {
        data_.emplace_back(x);
      }
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) = 1;
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool        empty() const { return rows_ == 0 || cols_ == 0; }

  T&       operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  bool is_zero() const {
    for (auto const& x : data_) {
      if (sgn(x) != 0) {
        return false;
      }
    }
    return true;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        t(j, i) = (*this)(i, j);
      }
    }
    return t;
  }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      c[i] = (*this)(i, j);
    }
    return c;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) {
      std::swap((*this)(a, j), (*this)(b, j));
    }
  }

  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) {
      std::swap((*this)(i, a), (*this)(i, b));
    }
  }

  // row[a] += c * row[b]
  void add_row(std::size_t a, std::size_t b, const T& c) {
    for (std::size_t j = 0; j < cols_; ++j) {
      (*this)(a, j) += c * (*this)(b, j);
    }
  }

  // col[a] += c * col[b]
  void add_col(std::size_t a, std::size_t b, const T& c) {
    for (std::size_t i = 0; i < rows_; ++i) {
      (*this)(i, a) += c * (*this)(i, b);
    }
  }

  void negate_row(std::size_t a) {
    for (std::size_t j = 0; j < cols_; ++j) {
      (*this)(a, j) = -(*this)(a, j);
    }
  }

  // [A | B]
  Matrix hconcat(const Matrix& b) const {
    if (rows_ != b.rows_) {
      throw DimensionMismatch("hconcat: row counts differ");
    }
    Matrix out(rows_, cols_ + b.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, cols_ + j) = b(i, j);
    }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
      throw DimensionMismatch("matrix product " + a.shape() + " * " + b.shape());
    }
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t l = 0; l < a.cols_; ++l) {
        const T& x = a(i, l);
        if (sgn(x) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          c(i, j) += x * b(l, j);
        }
      }
    }
    return c;
  }

  friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& v) {
    if (a.cols_ != v.size()) {
      throw DimensionMismatch("matrix-vector product " + a.shape() + " * "
                              + std::to_string(v.size()));
    }
    std::vector<T> out(a.rows_, T(0));
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < a.cols_; ++j) {
        out[i] += a(i, j) * v[j];
      }
    }
    return out;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
      throw DimensionMismatch("matrix sum " + a.shape() + " + " + b.shape());
    }
    Matrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
    return c;
  }

  std::string shape() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

 private:
  std::size_t    rows_ = 0;
  std::size_t    cols_ = 0;
  std::vector<T> data_;
};

using IntegerMatrix  = Matrix<Integer>;
using RationalMatrix = Matrix<Rational>;

template <class T>
std::string to_string(const Matrix<T>& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += i == 0 ? "[" : ",[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      out += (j == 0 ? "" : ",") + m(i, j).get_str();
    }
    out += "]";
  }
  return out + "]";
}

// Rank over the fraction field, by Gaussian elimination.
template <class T>
std::size_t rank_over_field(const Matrix<T>& a) {
  Matrix<Rational> m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = Rational(a(i, j));
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(p, r);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (sgn(m(i, c)) != 0) {
        Rational f = m(i, c) / m(r, c);
        m.add_row(i, r, Rational(-f));
      }
    }
    ++r;
  }
  return r;
}

// Exact determinant by Bareiss fraction-free elimination.
inline Integer determinant(IntegerMatrix m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("determinant of non-square matrix");
  }
  std::size_t n = m.rows();
  if (n == 0) return 1;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(m(p, k)) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(p, k);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = v;
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

}  // namespace hforge
