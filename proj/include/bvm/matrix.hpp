#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bvm/rational.hpp"

namespace bvm {

// Dense row-major rational matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static Matrix identity(std::size_t n);
  // Columns given as vectors of equal length.
  static Matrix from_columns(std::size_t rows, const std::vector<std::vector<Rational>>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<Rational> column(std::size_t j) const;
  std::vector<Rational> row(std::size_t i) const;
  Matrix rows_subset(const std::vector<std::size_t>& idx) const;
  Matrix cols_subset(const std::vector<std::size_t>& idx) const;
  Matrix transposed() const;
  bool is_zero() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(const Rational& c);
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const Rational& c) { return a *= c; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  std::vector<Rational> apply(const std::vector<Rational>& v) const;
  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

  std::string to_string() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

struct RowEchelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};
RowEchelon rref(Matrix a);
std::size_t rank(const Matrix& a);
// Columns form a basis of the null space; one per free column, in column order.
Matrix nullspace(const Matrix& a);
// Some x with a x = b, or nullopt.
std::optional<std::vector<Rational>> solve(const Matrix& a, const std::vector<Rational>& b);
// Throws InternalIdentityViolation for singular input.
Matrix inverse(const Matrix& a);

}  // namespace bvm
