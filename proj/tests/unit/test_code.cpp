#include <doctest.h>

#include <map>
#include <random>

#include "iamsr/code.hpp"
#include "test_util.hpp"

using namespace iamsr;
using testutil::node_subsets;
using testutil::pick;
using testutil::random_message;

TEST_CASE("parameters of the family") {
  auto p = CodeParams::make(3);
  CHECK(p.n == 6);
  CHECK(p.d == 5);
  CHECK(p.alpha == 3);
  CHECK(p.beta == 1);
  CHECK(p.B == 9);
  CHECK(p.field.modulus() == 7);
  CHECK(p.epsilon.value() == 2);
  CHECK(CodeParams::make(2).field.modulus() == 5);
  CHECK(CodeParams::make(4).field.modulus() == 11);
  CHECK(CodeParams::make(6).field.modulus() == 13);
  CHECK(params_new(3, 257).field.modulus() == 257);
  CHECK(p.role(1) == NodeRole::systematic);
  CHECK(p.role(4) == NodeRole::parity);
  CHECK_THROWS_AS(p.role(7), InvalidParameterError);
  CHECK_THROWS_AS(p.role(0), InvalidParameterError);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(CodeParams::make(1), InvalidParameterError);
  CHECK_THROWS_AS(CodeParams::make(3, 5), InvalidParameterError);
  CHECK_THROWS_AS(CodeParams::make(3, 9), InvalidParameterError);
  CHECK_THROWS_AS(CodeParams::make(3, 7, 0), InvalidParameterError);
  CHECK_THROWS_AS(CodeParams::make(3, 7, 1), InvalidParameterError);
  CHECK_THROWS_AS(CodeParams::make(3, 7, 6), InvalidParameterError);
  CHECK_THROWS_AS(CodeParams::make(3, 11, 10), InvalidParameterError);
  CHECK_NOTHROW(CodeParams::make(3, 7, 3));
}

TEST_CASE("cut-set condition") {
  CHECK(cutset_validate(CodeParams::make(3)));
  CHECK(cutset_validate(CodeParams::make(2)));
  auto broken = CodeParams::make(3);
  broken.B = 10;
  CHECK_FALSE(cutset_validate(broken));
  for (std::size_t k = 2; k <= 10; ++k) {
    auto p = CodeParams::make(k);
    std::size_t sum = 0;
    for (std::size_t i = 0; i < k; ++i) sum += std::min(p.alpha, (p.d - i) * p.beta);
    CHECK(sum == p.B);
    CHECK(cutset_validate(p));
  }
}

TEST_CASE("generator build checks psi") {
  auto p = CodeParams::make(3);
  PrimeField f = p.field;
  CHECK_THROWS_AS(GeneratorSet::build(p, Matrix::from_rows(f, {{1, 2, 3}, {2, 4, 6}, {1, 1, 1}})),
                  InvalidParameterError);
  CHECK_THROWS_AS(GeneratorSet::build(p, Matrix::from_rows(f, {{5, 4, 1}, {2, 5, 4}})), ShapeError);
  CHECK_THROWS_AS(GeneratorSet::build(p, Matrix::from_rows(f, {{0, 4, 1}, {2, 5, 4}, {3, 2, 5}})),
                  InvalidParameterError);
  auto g = GeneratorSet::build(p);
  CHECK(g.generator(1).rows() == 9);
  CHECK(g.generator(1).cols() == 3);
  CHECK_THROWS_AS(g.generator(7), InvalidParameterError);
}

TEST_CASE("systematic generators place the identity in their block") {
  auto g = GeneratorSet::build(CodeParams::make(3));
  for (NodeId m = 1; m <= 3; ++m) {
    const auto& G = g.generator(m);
    for (std::size_t r = 0; r < 9; ++r)
      for (std::size_t c = 0; c < 3; ++c) {
        const bool one = r / 3 == static_cast<std::size_t>(m - 1) && r % 3 == c;
        CHECK(G.raw(r, c) == (one ? 1 : 0));
      }
  }
}

TEST_CASE("encoding matches the block definition evaluated directly") {
  std::mt19937_64 rng(21);
  for (std::size_t k : {2u, 3u, 4u, 5u}) {
    auto p = CodeParams::make(k);
    auto g = GeneratorSet::build(p);
    auto psi = testutil::to_grid(g.psi());
    const auto q = p.field.modulus();
    for (int t = 0; t < 20; ++t) {
      auto u = random_message(p.field, p.B, rng);
      auto nodes = encode(g, u);
      REQUIRE(nodes.size() == p.n);
      for (std::size_t m = 1; m <= p.n; ++m) {
        CHECK(nodes[m - 1].node_id == static_cast<NodeId>(m));
        CHECK(testutil::to_ints(nodes[m - 1].symbols) ==
              oracle::encode_node(testutil::to_ints(u), k, psi, p.epsilon.value(), m, q));
      }
    }
  }
}

TEST_CASE("encode rejects a message of the wrong length or field") {
  auto g = GeneratorSet::build(CodeParams::make(2));
  std::vector<Element> shortmsg(3, g.field().zero());
  CHECK_THROWS_AS(encode(g, shortmsg), InvalidParameterError);
  std::vector<Element> other(4, PrimeField(7).zero());
  CHECK_THROWS_AS(encode(g, other), FieldMismatchError);
}

TEST_CASE("k = 2, q = 5: reconstruction equals the unique preimage found by brute force") {
  auto p = CodeParams::make(2, 5);
  auto g = GeneratorSet::build(p);
  auto psi = testutil::to_grid(g.psi());
  // Index every message by the contents of each node pair.
  std::map<std::vector<NodeId>, std::map<std::vector<std::int64_t>, std::vector<std::vector<std::int64_t>>>>
      preimages;
  const auto subsets = node_subsets(4, 2);
  oracle::for_each_vector(4, 5, [&](const std::vector<std::int64_t>& u) {
    for (const auto& ids : subsets) {
      std::vector<std::int64_t> key;
      for (NodeId id : ids) {
        auto part = oracle::encode_node(u, 2, psi, 2, static_cast<std::size_t>(id), 5);
        key.insert(key.end(), part.begin(), part.end());
      }
      preimages[ids][key].push_back(u);
    }
  });
  for (const auto& ids : subsets) {
    CHECK(preimages[ids].size() == 625);
  }
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    auto u = random_message(p.field, 4, rng);
    auto nodes = encode(g, u);
    for (const auto& ids : subsets) {
      auto chosen = pick(nodes, ids);
      std::vector<std::int64_t> key;
      for (const auto& n : chosen) {
        auto v = testutil::to_ints(n.symbols);
        key.insert(key.end(), v.begin(), v.end());
      }
      const auto& candidates = preimages[ids][key];
      REQUIRE(candidates.size() == 1);
      CHECK(testutil::to_ints(reconstruct(g, chosen)) == candidates[0]);
    }
  }
}

TEST_CASE("reconstruction from every k-subset, both solvers") {
  std::mt19937_64 rng(8);
  for (std::size_t k : {2u, 3u, 4u}) {
    auto p = CodeParams::make(k);
    auto g = GeneratorSet::build(p);
    const auto subsets = node_subsets(p.n, k);
    for (int t = 0; t < 100; ++t) {
      auto u = random_message(p.field, p.B, rng);
      auto nodes = encode(g, u);
      for (const auto& ids : subsets) {
        auto chosen = pick(nodes, ids);
        CHECK(reconstruct(g, chosen) == u);
        if (t < 5) CHECK(reconstruct_systematic_first(g, chosen) == u);
      }
    }
  }
}

TEST_CASE("reconstruction input errors") {
  auto p = CodeParams::make(3);
  auto g = GeneratorSet::build(p);
  std::vector<Element> u(9, p.field.one());
  auto nodes = encode(g, u);
  CHECK_THROWS_AS(reconstruct(g, pick(nodes, {1, 2})), InvalidParameterError);
  CHECK_THROWS_AS(reconstruct(g, pick(nodes, {1, 1, 2})), InvalidParameterError);
  auto bad = pick(nodes, {1, 2, 3});
  bad[0].symbols.pop_back();
  CHECK_THROWS_AS(reconstruct(g, bad), InvalidParameterError);
}

TEST_CASE("decoder is reusable and order-insensitive") {
  auto p = CodeParams::make(3);
  auto g = GeneratorSet::build(p);
  std::vector<NodeId> ids{6, 2, 4};
  Decoder dec(g, ids);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    auto u = random_message(p.field, p.B, rng);
    auto nodes = encode(g, u);
    CHECK(dec.decode(pick(nodes, {4, 6, 2})) == u);
  }
}

TEST_CASE("repair plan asks every survivor for symbol l") {
  auto p = CodeParams::make(3);
  auto plan = repair_plan(p, 2);
  CHECK(plan.size() == 5);
  for (const auto& [source, index] : plan) {
    CHECK(source != 2);
    CHECK(index == 2);
  }
  CHECK_THROWS_AS(repair_plan(p, 4), InvalidParameterError);
}

TEST_CASE("systematic repair is exact with d downloads") {
  std::mt19937_64 rng(4);
  for (std::size_t k : {2u, 3u, 4u, 5u}) {
    auto p = CodeParams::make(k);
    auto g = GeneratorSet::build(p);
    SystematicRepairer repairer(g);
    for (int t = 0; t < 25; ++t) {
      auto u = random_message(p.field, p.B, rng);
      auto nodes = encode(g, u);
      for (NodeId l = 1; l <= static_cast<NodeId>(k); ++l) {
        std::vector<NodeContent> survivors;
        for (const auto& n : nodes)
          if (n.node_id != l) survivors.push_back(n);
        auto downloads = gather_repair_downloads(p, survivors, l);
        CHECK(downloads.size() == 2 * k - 1);
        auto result = repairer.repair(l, downloads);
        CHECK(result.node == nodes[static_cast<std::size_t>(l - 1)]);
        CHECK(result.downloaded_symbols == 2 * k - 1);
        CHECK(result.bandwidth_optimal);
        CHECK(repair_systematic(g, l, downloads).node == result.node);
      }
    }
  }
}

TEST_CASE("systematic repair rejects malformed downloads") {
  auto p = CodeParams::make(3);
  auto g = GeneratorSet::build(p);
  std::vector<Element> u(9, p.field.one());
  auto nodes = encode(g, u);
  std::vector<NodeContent> survivors(nodes.begin() + 1, nodes.end());
  auto downloads = gather_repair_downloads(p, survivors, 1);
  auto fewer = downloads;
  fewer.pop_back();
  CHECK_THROWS_AS(repair_systematic(g, 1, fewer), InvalidParameterError);
  auto wrong_index = downloads;
  wrong_index[0].symbol_index = 2;
  CHECK_THROWS_AS(repair_systematic(g, 1, wrong_index), InvalidParameterError);
  auto stranger = downloads;
  stranger[0].source_id = 1;
  CHECK_THROWS_AS(repair_systematic(g, 1, stranger), InvalidParameterError);
  CHECK_THROWS_AS(gather_repair_downloads(p, pick(nodes, {2, 3}), 1), InvalidParameterError);
}

TEST_CASE("interference aligns to one direction per block") {
  for (std::size_t k : {2u, 3u, 4u, 5u}) {
    auto g = GeneratorSet::build(CodeParams::make(k));
    for (NodeId l = 1; l <= static_cast<NodeId>(k); ++l) {
      auto K = repair_download_kernels(g, l);
      CHECK(K.rows() == k * k);
      CHECK(K.cols() == 2 * k - 1);
      auto ranks = interference_block_ranks(g, l);
      CHECK(ranks.size() == k - 1);
      for (const auto& [block, rank] : ranks) {
        CHECK(block != static_cast<std::size_t>(l));
        CHECK(rank == 1);
      }
      CHECK(mat_rank(K.block((l - 1) * k, 0, k, K.cols())) == k);
    }
  }
}

TEST_CASE("parity fallback regenerates from any k survivors") {
  auto p = CodeParams::make(2);
  auto g = GeneratorSet::build(p);
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    auto u = random_message(p.field, p.B, rng);
    auto nodes = encode(g, u);
    for (NodeId m : {3, 4}) {
      for (const auto& ids : node_subsets(4, 2)) {
        if (std::find(ids.begin(), ids.end(), m) != ids.end()) continue;
        auto result = repair_parity_fallback(g, m, pick(nodes, ids));
        CHECK(result.node == nodes[static_cast<std::size_t>(m - 1)]);
        CHECK(result.downloaded_symbols == p.k * p.alpha);
        CHECK_FALSE(result.bandwidth_optimal);
      }
    }
  }
  std::vector<Element> zero(p.B, p.field.zero());
  auto zn = encode(g, zero);
  auto r = repair_parity_fallback(g, 3, pick(zn, {1, 2}));
  for (const auto& s : r.node.symbols) CHECK(s.is_zero());
  CHECK_THROWS_AS(repair_parity_fallback(g, 3, pick(zn, {3, 1})), InvalidParameterError);
}
