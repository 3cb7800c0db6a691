#include "iamsr/cauchy.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "iamsr/subsets.hpp"

namespace iamsr {

void CauchySequence::validate(const PrimeField& field) const {
  const std::uint32_t q = field.modulus();
  if (xs.size() + ys.size() > q) {
    throw InvalidParameterError("Cauchy sequence of length " +
                                std::to_string(xs.size() + ys.size()) + " exceeds field size " +
                                std::to_string(q));
  }
  std::unordered_set<Symbol> seen;
  for (const auto* part : {&xs, &ys}) {
    for (Symbol v : *part) {
      if (v >= q) {
        throw InvalidParameterError("Cauchy point " + std::to_string(v) + " is not in GF(" +
                                    std::to_string(q) + ")");
      }
      if (!seen.insert(v).second) {
        throw InvalidParameterError("Cauchy sequence repeats element " + std::to_string(v));
      }
    }
  }
}

CauchySequence CauchySequence::canonical(std::size_t s, std::size_t t) {
  CauchySequence seq;
  for (std::size_t i = 0; i < s; ++i) seq.xs.push_back(static_cast<Symbol>(i));
  for (std::size_t j = 0; j < t; ++j) seq.ys.push_back(static_cast<Symbol>(s + j));
  return seq;
}

Matrix cauchy_build(const PrimeField& field, const CauchySequence& seq) {
  seq.validate(field);
  Matrix m(field, seq.xs.size(), seq.ys.size());
  for (std::size_t i = 0; i < seq.xs.size(); ++i) {
    for (std::size_t j = 0; j < seq.ys.size(); ++j) {
      m.raw(i, j) = field.inv(field.sub(seq.xs[i], seq.ys[j]));
    }
  }
  return m;
}

Matrix cauchy_canonical(const PrimeField& field, std::size_t s, std::size_t t) {
  if (s + t > field.modulus()) {
    throw InvalidParameterError("Cauchy matrix " + std::to_string(s) + "x" + std::to_string(t) +
                                " needs a field of size >= " + std::to_string(s + t));
  }
  return cauchy_build(field, CauchySequence::canonical(s, t));
}

bool verify_total_nonsingularity(const Matrix& m, std::size_t max_order) {
  if (max_order > kMaxNonsingularityOrder) {
    throw InvalidParameterError("total-nonsingularity enumeration capped at order " +
                                std::to_string(kMaxNonsingularityOrder) + ", asked for " +
                                std::to_string(max_order));
  }
  const std::size_t top = std::min({max_order, m.rows(), m.cols()});
  for (std::size_t order = 1; order <= top; ++order) {
    bool ok = for_each_subset(m.rows(), order, [&](const std::vector<std::size_t>& rows) {
      return for_each_subset(m.cols(), order, [&](const std::vector<std::size_t>& cols) {
        return mat_rank(m.select(rows, cols)) == order;
      });
    });
    if (!ok) return false;
  }
  return true;
}

}  // namespace iamsr
