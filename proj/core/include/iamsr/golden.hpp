#pragma once

// The worked [6, 3, 5] example over GF(7): Psi from xs = (0, 1, 2),
// ys = (4, 5, 6), epsilon = 2, message (r1..r7, a8, a9). Holds the coded
// symbol table as printed and as corrected, and checks an encoder against it.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "iamsr/code.hpp"

namespace iamsr::golden {

inline constexpr std::size_t kVariables = 9;

/// "r1".."r7", "a8", "a9".
const std::vector<std::string>& variable_names();

/// One coded symbol as a linear form over the nine message variables.
struct SymbolicSymbol {
  NodeId node;
  std::size_t index;  // 1-based symbol position within the node
  std::vector<Symbol> coeffs;
};

CodeParams example_params();
CauchySequence example_sequence();
GeneratorSet example_generators();

/// The 18 coded symbols exactly as printed, nodes 1..6 in order.
std::vector<SymbolicSymbol> printed_table();
/// The printed table with its single transcription slip fixed: node 4,
/// symbol 2 carries 6 r6, not 5 r6.
std::vector<SymbolicSymbol> corrected_table();

/// The encoder's symbols as linear forms, obtained by encoding each unit
/// message vector.
std::vector<SymbolicSymbol> encoder_table(const GeneratorSet& gens);

struct Mismatch {
  NodeId node;
  std::size_t index;
  std::size_t variable;  // 0-based into variable_names()
  Symbol expected;
  Symbol actual;

  std::string describe() const;
};

/// Coefficient-by-coefficient differences between two tables of equal shape.
std::vector<Mismatch> compare_tables(const std::vector<SymbolicSymbol>& expected,
                                     const std::vector<SymbolicSymbol>& actual);

/// Encodes `assignments` seeded random messages and evaluates `table` at the
/// same messages; returns the number of symbols that disagree.
std::size_t numeric_disagreements(const GeneratorSet& gens,
                                  const std::vector<SymbolicSymbol>& table,
                                  std::size_t assignments, std::uint64_t seed);

}  // namespace iamsr::golden
