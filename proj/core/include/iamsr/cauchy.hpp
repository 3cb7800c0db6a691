#pragma once

// Cauchy matrices and total-nonsingularity checks.

#include <cstddef>
#include <vector>

#include "iamsr/matrix.hpp"

namespace iamsr {

/// Row points xs and column points ys of a Cauchy matrix. Together they
/// must form a sequence without repeated elements.
struct CauchySequence {
  std::vector<Symbol> xs;
  std::vector<Symbol> ys;

  /// Throws InvalidParameterError on a repeat, a value >= q, or s + t > q.
  void validate(const PrimeField& field) const;

  /// xs = (0, ..., s-1), ys = (s, ..., s+t-1).
  static CauchySequence canonical(std::size_t s, std::size_t t);

  friend bool operator==(const CauchySequence&, const CauchySequence&) = default;
};

/// Entry (i, j) is 1 / (x_i - y_j).
Matrix cauchy_build(const PrimeField& field, const CauchySequence& seq);

Matrix cauchy_canonical(const PrimeField& field, std::size_t s, std::size_t t);

/// Largest order verify_total_nonsingularity will enumerate.
inline constexpr std::size_t kMaxNonsingularityOrder = 8;

/// True iff every square submatrix of order <= max_order is nonsingular.
/// Exhaustive over row and column subsets; throws InvalidParameterError
/// when max_order exceeds kMaxNonsingularityOrder.
bool verify_total_nonsingularity(const Matrix& m, std::size_t max_order);

}  // namespace iamsr
