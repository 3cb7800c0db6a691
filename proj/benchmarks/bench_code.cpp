#include <cstdint>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "iamsr/code.hpp"
#include "iamsr/matrix.hpp"

namespace {

using namespace iamsr;

std::vector<Symbol> random_symbols(const PrimeField& f, std::size_t len, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> dist(0, f.modulus() - 1);
  std::vector<Symbol> out(len);
  for (auto& s : out) s = static_cast<Symbol>(dist(rng));
  return out;
}

std::vector<Element> to_elements(const PrimeField& f, const std::vector<Symbol>& raw) {
  std::vector<Element> out;
  for (Symbol s : raw) out.push_back(f.element(s));
  return out;
}

void BM_EncodeStripe(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto gens = GeneratorSet::build(CodeParams::make(k, 257));
  const auto& p = gens.params();
  const auto message = random_symbols(p.field, p.B, 1);
  std::vector<Symbol> out(p.alpha);
  for (auto _ : state) {
    for (NodeId id = 1; id <= static_cast<NodeId>(p.n); ++id) {
      encode_node_raw(gens, message, id, out);
      benchmark::DoNotOptimize(out.data());
    }
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * p.B));
}
BENCHMARK(BM_EncodeStripe)->DenseRange(2, 8, 2);

void BM_DecodeParityOnly(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto gens = GeneratorSet::build(CodeParams::make(k, 257));
  const auto& p = gens.params();
  std::vector<NodeId> ids;
  for (NodeId id = static_cast<NodeId>(p.k) + 1; id <= static_cast<NodeId>(p.n); ++id) ids.push_back(id);
  const Decoder decoder(gens, ids);
  const auto message = random_symbols(p.field, p.B, 2);
  std::vector<Symbol> stacked(p.B);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    encode_node_raw(gens, message, ids[i], std::span(stacked).subspan(i * p.alpha, p.alpha));
  }
  std::vector<Symbol> decoded(p.B);
  for (auto _ : state) {
    decoder.decode_raw(stacked, decoded);
    benchmark::DoNotOptimize(decoded.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * p.B));
}
BENCHMARK(BM_DecodeParityOnly)->DenseRange(2, 8, 2);

void BM_DecoderSetup(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto gens = GeneratorSet::build(CodeParams::make(k, 257));
  std::vector<NodeId> ids;
  for (NodeId id = static_cast<NodeId>(k) + 1; id <= static_cast<NodeId>(2 * k); ++id) ids.push_back(id);
  for (auto _ : state) {
    Decoder decoder(gens, ids);
    benchmark::DoNotOptimize(&decoder);
  }
}
BENCHMARK(BM_DecoderSetup)->DenseRange(2, 8, 2);

void BM_RepairSystematic(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto gens = GeneratorSet::build(CodeParams::make(k, 257));
  const auto& p = gens.params();
  const auto nodes = encode(gens, to_elements(p.field, random_symbols(p.field, p.B, 3)));
  std::vector<NodeContent> survivors(nodes.begin() + 1, nodes.end());
  const auto downloads = gather_repair_downloads(p, survivors, 1);
  const SystematicRepairer repairer(gens);
  for (auto _ : state) {
    auto result = repairer.repair(1, downloads);
    benchmark::DoNotOptimize(result.node.symbols.data());
  }
}
BENCHMARK(BM_RepairSystematic)->DenseRange(2, 8, 2);

void BM_MatRank(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const PrimeField f(257);
  const auto raw = random_symbols(f, n * n, 4);
  Matrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.raw(i, j) = raw[i * n + j];
  for (auto _ : state) benchmark::DoNotOptimize(mat_rank(m));
}
BENCHMARK(BM_MatRank)->RangeMultiplier(2)->Range(8, 64);

}  // namespace
