#include <benchmark/benchmark.h>

#include "iamsr/code.hpp"
#include "iamsr/secrecy.hpp"

namespace {

using namespace iamsr;

void BM_DesignPad(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto l1 = static_cast<std::size_t>(state.range(1));
  const auto l2 = static_cast<std::size_t>(state.range(2));
  const auto gens = GeneratorSet::build(CodeParams::make(k, static_cast<std::uint32_t>(state.range(3))));
  for (auto _ : state) {
    auto scheme = secrecy::SecureScheme::design(gens, l1, l2);
    benchmark::DoNotOptimize(scheme.pad().rows());
  }
}
BENCHMARK(BM_DesignPad)->Args({2, 1, 0, 5})->Args({3, 1, 1, 7})->Args({4, 1, 1, 11})->Unit(benchmark::kMillisecond);

void BM_VerifyRank(benchmark::State& state) {
  const auto gens = GeneratorSet::build(CodeParams::make(3, 7));
  const auto scheme = secrecy::SecureScheme::design(gens, 1, 1);
  const auto taps = secrecy::enumerate_tap_sets(gens.params(), 1, 1);
  for (auto _ : state) {
    for (const auto& eve : taps) benchmark::DoNotOptimize(secrecy::verify_secrecy_rank(scheme, eve).perfect);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * taps.size()));
}
BENCHMARK(BM_VerifyRank);

}  // namespace
