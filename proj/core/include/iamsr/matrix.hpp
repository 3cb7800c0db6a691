#pragma once

// Dense matrices over GF(q) with exact Gaussian elimination.

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <vector>

#include "iamsr/gf.hpp"

namespace iamsr {

/// Row-major dense matrix over a single prime field. Entries are stored as
/// canonical residues.
class Matrix {
 public:
  /// rows x cols zero matrix.
  Matrix(PrimeField field, std::size_t rows, std::size_t cols);
  /// Takes row-major residues; throws ShapeError on a length mismatch and
  /// InvalidParameterError on a residue >= q.
  Matrix(PrimeField field, std::size_t rows, std::size_t cols, std::vector<Symbol> entries);

  /// Integer literals, reduced mod q. All rows must have equal length.
  static Matrix from_rows(PrimeField field,
                          std::initializer_list<std::initializer_list<std::int64_t>> rows);
  static Matrix identity(PrimeField field, std::size_t n);
  static Matrix row_vector(PrimeField field, std::span<const Element> values);
  static Matrix column_vector(PrimeField field, std::span<const Element> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
  const PrimeField& field() const noexcept { return field_; }

  Element at(std::size_t r, std::size_t c) const { return Element(raw(r, c), field_); }
  void set(std::size_t r, std::size_t c, const Element& v);

  Symbol raw(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  Symbol& raw(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  std::span<const Symbol> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<Symbol> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  const std::vector<Symbol>& data() const noexcept { return data_; }

  Matrix transpose() const;
  Matrix block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const;
  Matrix select(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const;
  Matrix column(std::size_t c) const { return block(0, c, rows_, 1); }
  Matrix scaled(const Element& s) const;

  static Matrix hstack(std::span<const Matrix> parts);
  static Matrix vstack(std::span<const Matrix> parts);

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Symbol> data_;
};

Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

/// Rank by Gaussian elimination with first-nonzero pivoting.
std::size_t mat_rank(const Matrix& a);

/// Throws SingularMatrixError if `a` is not square and invertible.
Matrix mat_inverse(const Matrix& a);

/// Solves a * x = b for x, where b may have several columns. The system
/// must be consistent with a unique solution; otherwise throws
/// SingularMatrixError.
Matrix mat_solve(const Matrix& a, const Matrix& b);
std::vector<Element> mat_solve(const Matrix& a, std::span<const Element> b);

/// row * m for a row of raw residues; out must have m.cols() entries.
void multiply_row(const Matrix& m, std::span<const Symbol> row, std::span<Symbol> out);

std::vector<Element> to_elements(PrimeField field, std::span<const Symbol> raw);
std::vector<Symbol> to_symbols(std::span<const Element> values);

std::ostream& operator<<(std::ostream& os, const Matrix& m);

}  // namespace iamsr
