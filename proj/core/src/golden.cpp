#include "iamsr/golden.hpp"

#include <random>

namespace iamsr::golden {

namespace {

struct Row {
  NodeId node;
  std::size_t index;
  Symbol c[kVariables];
};

// Columns: r1 r2 r3 r4 r5 r6 r7 a8 a9.
constexpr Row kPrinted[] = {
    {1, 1, {1, 0, 0, 0, 0, 0, 0, 0, 0}}, {1, 2, {0, 1, 0, 0, 0, 0, 0, 0, 0}},
    {1, 3, {0, 0, 1, 0, 0, 0, 0, 0, 0}}, {2, 1, {0, 0, 0, 1, 0, 0, 0, 0, 0}},
    {2, 2, {0, 0, 0, 0, 1, 0, 0, 0, 0}}, {2, 3, {0, 0, 0, 0, 0, 1, 0, 0, 0}},
    {3, 1, {0, 0, 0, 0, 0, 0, 1, 0, 0}}, {3, 2, {0, 0, 0, 0, 0, 0, 0, 1, 0}},
    {3, 3, {0, 0, 0, 0, 0, 0, 0, 0, 1}}, {4, 1, {3, 4, 6, 2, 0, 0, 3, 0, 0}},
    {4, 2, {0, 5, 0, 3, 4, 5, 0, 3, 0}}, {4, 3, {0, 0, 5, 0, 0, 2, 3, 4, 6}},
    {5, 1, {1, 3, 4, 5, 0, 0, 2, 0, 0}}, {5, 2, {0, 4, 0, 1, 3, 4, 0, 2, 0}},
    {5, 3, {0, 0, 4, 0, 0, 5, 1, 3, 4}}, {6, 1, {2, 1, 3, 4, 0, 0, 5, 0, 0}},
    {6, 2, {0, 1, 0, 2, 1, 3, 0, 5, 0}}, {6, 3, {0, 0, 1, 0, 0, 4, 2, 1, 3}},
};

}  // namespace

const std::vector<std::string>& variable_names() {
  static const std::vector<std::string> names = {"r1", "r2", "r3", "r4", "r5",
                                                 "r6", "r7", "a8", "a9"};
  return names;
}

CodeParams example_params() { return CodeParams::make(3, 7, 2); }

CauchySequence example_sequence() { return CauchySequence{{0, 1, 2}, {4, 5, 6}}; }

GeneratorSet example_generators() { return GeneratorSet::build(example_params(), example_sequence()); }

std::vector<SymbolicSymbol> printed_table() {
  std::vector<SymbolicSymbol> out;
  for (const auto& row : kPrinted) {
    out.push_back(SymbolicSymbol{row.node, row.index, {std::begin(row.c), std::end(row.c)}});
  }
  return out;
}

std::vector<SymbolicSymbol> corrected_table() {
  auto table = printed_table();
  for (auto& s : table) {
    if (s.node == 4 && s.index == 2) s.coeffs[5] = 6;
  }
  return table;
}

std::vector<SymbolicSymbol> encoder_table(const GeneratorSet& gens) {
  const auto& p = gens.params();
  std::vector<SymbolicSymbol> out;
  for (std::size_t id = 1; id <= p.n; ++id) {
    for (std::size_t j = 1; j <= p.alpha; ++j) {
      out.push_back(SymbolicSymbol{static_cast<NodeId>(id), j, std::vector<Symbol>(p.B, 0)});
    }
  }
  std::vector<Symbol> unit(p.B, 0);
  std::vector<Symbol> coded(p.alpha);
  for (std::size_t v = 0; v < p.B; ++v) {
    unit.assign(p.B, 0);
    unit[v] = 1;
    for (std::size_t id = 1; id <= p.n; ++id) {
      encode_node_raw(gens, unit, static_cast<NodeId>(id), coded);
      for (std::size_t j = 0; j < p.alpha; ++j) out[(id - 1) * p.alpha + j].coeffs[v] = coded[j];
    }
  }
  return out;
}

std::string Mismatch::describe() const {
  return "node " + std::to_string(node) + " symbol " + std::to_string(index) + " " +
         variable_names().at(variable) + ": expected " + std::to_string(expected) + ", got " +
         std::to_string(actual);
}

std::vector<Mismatch> compare_tables(const std::vector<SymbolicSymbol>& expected,
                                     const std::vector<SymbolicSymbol>& actual) {
  if (expected.size() != actual.size()) throw ShapeError("symbol tables differ in length");
  std::vector<Mismatch> out;
  for (std::size_t s = 0; s < expected.size(); ++s) {
    const auto& e = expected[s];
    const auto& a = actual[s];
    if (e.node != a.node || e.index != a.index || e.coeffs.size() != a.coeffs.size()) {
      throw ShapeError("symbol tables are not aligned at entry " + std::to_string(s));
    }
    for (std::size_t v = 0; v < e.coeffs.size(); ++v) {
      if (e.coeffs[v] != a.coeffs[v]) out.push_back({e.node, e.index, v, e.coeffs[v], a.coeffs[v]});
    }
  }
  return out;
}

std::size_t numeric_disagreements(const GeneratorSet& gens,
                                  const std::vector<SymbolicSymbol>& table,
                                  std::size_t assignments, std::uint64_t seed) {
  const auto& p = gens.params();
  const auto& f = p.field;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> dist(0, f.modulus() - 1);
  std::vector<Symbol> message(p.B);
  std::vector<Symbol> coded(p.alpha);
  std::size_t bad = 0;
  for (std::size_t t = 0; t < assignments; ++t) {
    for (auto& m : message) m = static_cast<Symbol>(dist(rng));
    for (const auto& s : table) {
      encode_node_raw(gens, message, s.node, coded);
      Symbol expected = 0;
      for (std::size_t v = 0; v < s.coeffs.size(); ++v) {
        expected = f.add(expected, f.mul(f.reduce(s.coeffs[v]), message[v]));
      }
      if (coded.at(s.index - 1) != expected) ++bad;
    }
  }
  return bad;
}

}  // namespace iamsr::golden
