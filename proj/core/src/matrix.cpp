#include "iamsr/matrix.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace iamsr {

namespace {

void require_same_field(const Matrix& a, const Matrix& b) {
  if (!(a.field() == b.field())) {
    throw FieldMismatchError("matrices over GF(" + std::to_string(a.field().modulus()) +
                             ") and GF(" + std::to_string(b.field().modulus()) + ")");
  }
}

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// Reduces `m` in place to reduced row echelon form over its first `ncols`
// columns and returns the pivot column of each nonzero row.
std::vector<std::size_t> rref(Matrix& m, std::size_t ncols) {
  const PrimeField& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t lead_row = 0;
  for (std::size_t c = 0; c < ncols && lead_row < m.rows(); ++c) {
    std::size_t p = lead_row;
    while (p < m.rows() && m.raw(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != lead_row) {
      auto a = m.row(p), b = m.row(lead_row);
      std::swap_ranges(a.begin(), a.end(), b.begin());
    }
    auto pivot_row = m.row(lead_row);
    Symbol inv = f.inv(pivot_row[c]);
    for (auto& v : pivot_row) v = f.mul(v, inv);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead_row) continue;
      Symbol factor = m.raw(r, c);
      if (factor == 0) continue;
      auto target = m.row(r);
      for (std::size_t j = c; j < m.cols(); ++j) {
        target[j] = f.sub(target[j], f.mul(factor, pivot_row[j]));
      }
    }
    pivots.push_back(c);
    ++lead_row;
  }
  return pivots;
}

}  // namespace

Matrix::Matrix(PrimeField field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix::Matrix(PrimeField field, std::size_t rows, std::size_t cols, std::vector<Symbol> entries)
    : field_(field), rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw ShapeError("matrix " + std::to_string(rows) + "x" + std::to_string(cols) + " given " +
                     std::to_string(data_.size()) + " entries");
  }
  for (Symbol v : data_) {
    if (v >= field_.modulus()) {
      throw InvalidParameterError("entry " + std::to_string(v) + " is not a residue mod " +
                                  std::to_string(field_.modulus()));
    }
  }
}

Matrix Matrix::from_rows(PrimeField field,
                         std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  std::size_t nrows = rows.size();
  std::size_t ncols = nrows == 0 ? 0 : rows.begin()->size();
  std::vector<Symbol> data;
  data.reserve(nrows * ncols);
  for (const auto& r : rows) {
    if (r.size() != ncols) throw ShapeError("ragged matrix literal");
    for (std::int64_t v : r) data.push_back(field.reduce(v));
  }
  return Matrix(field, nrows, ncols, std::move(data));
}

Matrix Matrix::identity(PrimeField field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.raw(i, i) = 1;
  return m;
}

Matrix Matrix::row_vector(PrimeField field, std::span<const Element> values) {
  Matrix m(field, 1, values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m.set(0, i, values[i]);
  return m;
}

Matrix Matrix::column_vector(PrimeField field, std::span<const Element> values) {
  Matrix m(field, values.size(), 1);
  for (std::size_t i = 0; i < values.size(); ++i) m.set(i, 0, values[i]);
  return m;
}

void Matrix::set(std::size_t r, std::size_t c, const Element& v) {
  if (v.modulus() != field_.modulus()) {
    throw FieldMismatchError("element of GF(" + std::to_string(v.modulus()) +
                             ") stored into matrix over GF(" + std::to_string(field_.modulus()) +
                             ")");
  }
  raw(r, c) = v.value();
}

Matrix Matrix::transpose() const {
  Matrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.raw(c, r) = raw(r, c);
  return t;
}

Matrix Matrix::block(std::size_t row0, std::size_t col0, std::size_t nrows,
                     std::size_t ncols) const {
  if (row0 + nrows > rows_ || col0 + ncols > cols_) {
    throw ShapeError("block out of range of " + shape(*this) + " matrix");
  }
  Matrix b(field_, nrows, ncols);
  for (std::size_t r = 0; r < nrows; ++r)
    for (std::size_t c = 0; c < ncols; ++c) b.raw(r, c) = raw(row0 + r, col0 + c);
  return b;
}

Matrix Matrix::select(std::span<const std::size_t> row_idx,
                      std::span<const std::size_t> col_idx) const {
  Matrix s(field_, row_idx.size(), col_idx.size());
  for (std::size_t r = 0; r < row_idx.size(); ++r) {
    for (std::size_t c = 0; c < col_idx.size(); ++c) {
      if (row_idx[r] >= rows_ || col_idx[c] >= cols_) {
        throw ShapeError("index out of range of " + shape(*this) + " matrix");
      }
      s.raw(r, c) = raw(row_idx[r], col_idx[c]);
    }
  }
  return s;
}

Matrix Matrix::scaled(const Element& s) const {
  if (s.modulus() != field_.modulus()) throw FieldMismatchError("scalar from a different field");
  Matrix out = *this;
  for (auto& v : out.data_) v = field_.mul(v, s.value());
  return out;
}

Matrix Matrix::hstack(std::span<const Matrix> parts) {
  if (parts.empty()) throw ShapeError("hstack of no matrices");
  std::size_t nrows = parts.front().rows(), ncols = 0;
  for (const auto& p : parts) {
    require_same_field(parts.front(), p);
    if (p.rows() != nrows) throw ShapeError("hstack row count mismatch");
    ncols += p.cols();
  }
  Matrix out(parts.front().field(), nrows, ncols);
  std::size_t offset = 0;
  for (const auto& p : parts) {
    for (std::size_t r = 0; r < nrows; ++r)
      for (std::size_t c = 0; c < p.cols(); ++c) out.raw(r, offset + c) = p.raw(r, c);
    offset += p.cols();
  }
  return out;
}

Matrix Matrix::vstack(std::span<const Matrix> parts) {
  if (parts.empty()) throw ShapeError("vstack of no matrices");
  std::size_t ncols = parts.front().cols(), nrows = 0;
  for (const auto& p : parts) {
    require_same_field(parts.front(), p);
    if (p.cols() != ncols) throw ShapeError("vstack column count mismatch");
    nrows += p.rows();
  }
  std::vector<Symbol> data;
  data.reserve(nrows * ncols);
  for (const auto& p : parts) data.insert(data.end(), p.data().begin(), p.data().end());
  return Matrix(parts.front().field(), nrows, ncols, std::move(data));
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.cols() != b.rows()) {
    throw ShapeError("cannot multiply " + shape(a) + " by " + shape(b));
  }
  const PrimeField& f = a.field();
  const std::uint64_t q = f.modulus();
  Matrix out(f, a.rows(), b.cols());
  std::vector<std::uint64_t> acc(b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      std::uint64_t x = a.raw(r, k);
      if (x == 0) continue;
      auto brow = b.row(k);
      for (std::size_t c = 0; c < b.cols(); ++c) acc[c] += x * brow[c];
    }
    for (std::size_t c = 0; c < b.cols(); ++c) out.raw(r, c) = static_cast<Symbol>(acc[c] % q);
  }
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) { return mat_mul(a, b); }

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("sum shape mismatch");
  Matrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      out.raw(r, c) = a.field().add(a.raw(r, c), b.raw(r, c));
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("difference shape mismatch");
  Matrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      out.raw(r, c) = a.field().sub(a.raw(r, c), b.raw(r, c));
  return out;
}

std::size_t mat_rank(const Matrix& a) {
  Matrix work = a;
  return rref(work, work.cols()).size();
}

Matrix mat_inverse(const Matrix& a) {
  if (a.rows() != a.cols()) throw SingularMatrixError("cannot invert " + shape(a) + " matrix");
  const std::size_t n = a.rows();
  Matrix id = Matrix::identity(a.field(), n);
  Matrix parts[] = {a, id};
  Matrix aug = Matrix::hstack(parts);
  if (rref(aug, n).size() != n) throw SingularMatrixError("matrix is singular");
  return aug.block(0, n, n, n);
}

Matrix mat_solve(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows()) throw ShapeError("solve: " + shape(a) + " system with " + shape(b) + " rhs");
  const std::size_t n = a.cols();
  Matrix parts[] = {a, b};
  Matrix aug = Matrix::hstack(parts);
  auto pivots = rref(aug, n);
  for (std::size_t r = pivots.size(); r < aug.rows(); ++r) {
    for (std::size_t c = n; c < aug.cols(); ++c) {
      if (aug.raw(r, c) != 0) throw SingularMatrixError("inconsistent linear system");
    }
  }
  if (pivots.size() != n) throw SingularMatrixError("linear system has no unique solution");
  return aug.block(0, n, n, b.cols());
}

std::vector<Element> mat_solve(const Matrix& a, std::span<const Element> b) {
  Matrix x = mat_solve(a, Matrix::column_vector(a.field(), b));
  std::vector<Element> out;
  out.reserve(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out.push_back(x.at(i, 0));
  return out;
}

void multiply_row(const Matrix& m, std::span<const Symbol> row, std::span<Symbol> out) {
  if (row.size() != m.rows() || out.size() != m.cols()) {
    throw ShapeError("row of length " + std::to_string(row.size()) + " against " + shape(m));
  }
  const std::uint64_t q = m.field().modulus();
  std::fill(out.begin(), out.end(), Symbol{0});
  for (std::size_t c = 0; c < m.cols(); ++c) {
    std::uint64_t acc = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) acc += std::uint64_t{row[r]} * m.raw(r, c);
    out[c] = static_cast<Symbol>(acc % q);
  }
}

std::vector<Element> to_elements(PrimeField field, std::span<const Symbol> raw) {
  std::vector<Element> out;
  out.reserve(raw.size());
  for (Symbol s : raw) out.emplace_back(s, field);
  return out;
}

std::vector<Symbol> to_symbols(std::span<const Element> values) {
  std::vector<Symbol> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v.value());
  return out;
}

std::ostream& operator<<(std::ostream& os, const Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << '[';
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m.raw(r, c);
    os << "]\n";
  }
  return os;
}

}  // namespace iamsr
