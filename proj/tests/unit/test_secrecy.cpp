#include <doctest.h>

#include <map>
#include <random>

#include "iamsr/golden.hpp"
#include "iamsr/secrecy.hpp"
#include "test_util.hpp"

using namespace iamsr;
using namespace iamsr::secrecy;
using testutil::random_message;

namespace {

EveModel eve(std::set<NodeId> e1, std::set<NodeId> e2) { return EveModel{std::move(e1), std::move(e2)}; }

}  // namespace

TEST_CASE("capacity and random-symbol counts for k = 3, (1, 1)") {
  auto p = CodeParams::make(3);
  CHECK(secrecy_capacity(p, 1, 1) == 2);
  CHECK(random_symbol_count(p, 1, 1) == 7);
  CHECK(observed_symbol_count(p, 1, 1) == 7);
  CHECK(capacity_identity_check(p, 1, 1));
  CHECK_THROWS_AS(secrecy_capacity(p, 2, 1), InvalidParameterError);
  CHECK_THROWS_AS(random_symbol_count(p, 3, 0), InvalidParameterError);
}

TEST_CASE("capacity identity and closed forms for k up to 10") {
  for (std::size_t k = 2; k <= 10; ++k) {
    auto p = CodeParams::make(k);
    for (std::size_t l1 = 0; l1 < k; ++l1)
      for (std::size_t l2 = 0; l1 + l2 < k; ++l2) {
        CHECK(capacity_identity_check(p, l1, l2));
        CHECK(secrecy_capacity(p, l1, l2) + random_symbol_count(p, l1, l2) == p.B);
        CHECK(secrecy_capacity(p, l1, l2) <= upper_bounds(p, l1 + l2).general);
        CHECK(upper_bounds(p, l1 + l2).general <= upper_bounds(p, l1 + l2).msr);
      }
  }
}

TEST_CASE("upper bounds by direct summation") {
  auto p = CodeParams::make(3);
  CHECK(upper_bounds(p, 0).general == 9);
  CHECK(upper_bounds(p, 1).general == 6);
  CHECK(upper_bounds(p, 2).general == 3);
  CHECK(upper_bounds(p, 2).msr == 3);
  CHECK_THROWS_AS(upper_bounds(p, 3), InvalidParameterError);
}

TEST_CASE("eve model validation") {
  auto p = CodeParams::make(3);
  CHECK_NOTHROW(eve({1}, {3}).validate(p));
  CHECK_NOTHROW(eve({5}, {2}).validate(p));
  CHECK_THROWS_AS(eve({1}, {4}).validate(p), InvalidParameterError);
  CHECK_THROWS_AS(eve({1}, {1}).validate(p), InvalidParameterError);
  CHECK_THROWS_AS(eve({1, 2}, {3}).validate(p), InvalidParameterError);
  CHECK_THROWS_AS(eve({7}, {}).validate(p), InvalidParameterError);
  CHECK(eve({1, 4}, {2}).describe() == "e1={1,4} e2={2}");
}

TEST_CASE("tap set enumeration counts") {
  for (std::size_t k : {2u, 3u, 4u}) {
    auto p = CodeParams::make(k);
    for (std::size_t l1 = 0; l1 < k; ++l1)
      for (std::size_t l2 = 0; l1 + l2 < k; ++l2) {
        std::uint64_t expected = 0;
        for (std::size_t j = 0; j <= l1; ++j)
          expected += oracle::binomial(k, j) * oracle::binomial(k, l1 - j) *
                      oracle::binomial(k - j, l2);
        auto sets = enumerate_tap_sets(p, l1, l2);
        CHECK(sets.size() == expected);
        std::set<std::pair<std::set<NodeId>, std::set<NodeId>>> unique;
        for (const auto& e : sets) {
          CHECK_NOTHROW(e.validate(p));
          CHECK(e.l1() == l1);
          CHECK(e.l2() == l2);
          unique.emplace(e.e1, e.e2);
        }
        CHECK(unique.size() == sets.size());
      }
  }
}

TEST_CASE("observation structure of the worked example") {
  auto gens = golden::example_generators();
  auto scheme = SecureScheme::design(gens, 1, 1);
  auto obs = observation_matrix(scheme, eve({1}, {3}));
  CHECK(obs.raw_rows == 8);
  CHECK(obs.distinct_rows == 7);
  CHECK(obs.duplicate_rows == 1);
  CHECK(obs.independent_rows == 7);
  auto report = verify_secrecy_rank(scheme, eve({1}, {3}));
  CHECK(report.random_count == 7);
  CHECK(report.rank_rand == 7);
  CHECK(report.rank_full == 7);
  CHECK(report.step1);
  CHECK(report.step2);
  CHECK(report.perfect);
}

TEST_CASE("the literal (r, s) layout leaks in the worked example") {
  auto gens = golden::example_generators();
  auto plain = SecureScheme::plain_layout(gens, 1, 1);
  auto report = verify_secrecy_rank(plain, eve({1}, {3}));
  CHECK(report.rank_full == 7);
  CHECK(report.rank_rand == 5);
  CHECK(report.leakage_dims == 2);
  CHECK_FALSE(report.step1);
  CHECK_FALSE(report.perfect);
}

TEST_CASE("observed values equal H times (r, s)") {
  auto p = CodeParams::make(3);
  auto gens = GeneratorSet::build(p);
  auto scheme = SecureScheme::design(gens, 1, 1);
  auto rng = RandomSource::seeded(5);
  std::mt19937_64 mt(5);
  for (const auto& e : enumerate_tap_sets(p, 1, 1)) {
    auto secret = random_message(p.field, scheme.secret_count(), mt);
    auto enc = secure_encode(scheme, secret, rng);
    auto seen = eavesdrop(gens, e, enc.nodes);
    auto H = observation_matrix(scheme, e).H;
    auto expected = H * Matrix::column_vector(p.field, enc.message.combined);
    CHECK(to_symbols(seen) == expected.data());
  }
}

TEST_CASE("secure encode and decode round trip from every k-subset") {
  std::mt19937_64 mt(3);
  for (std::size_t k : {2u, 3u, 4u}) {
    auto p = CodeParams::make(k);
    auto gens = GeneratorSet::build(p);
    for (std::size_t l1 = 0; l1 < k; ++l1)
      for (std::size_t l2 = 0; l1 + l2 < k; ++l2) {
        auto scheme = SecureScheme::design(gens, l1, l2);
        CHECK(scheme.secret_count() == secrecy_capacity(p, l1, l2));
        auto rng = RandomSource::seeded(l1 * 10 + l2);
        auto secret = random_message(p.field, scheme.secret_count(), mt);
        auto enc = secure_encode(scheme, secret, rng);
        CHECK(enc.message.secret == secret);
        CHECK(enc.message.rand.size() == scheme.random_count());
        for (const auto& ids : testutil::node_subsets(p.n, k)) {
          CHECK(secure_decode(scheme, testutil::pick(enc.nodes, ids)) == secret);
        }
      }
  }
}

TEST_CASE("precode is invertible and matches the matrix form") {
  auto p = CodeParams::make(3);
  auto gens = GeneratorSet::build(p);
  auto scheme = SecureScheme::design(gens, 1, 1);
  std::mt19937_64 mt(1);
  auto r = to_symbols(random_message(p.field, 7, mt));
  auto s = to_symbols(random_message(p.field, 2, mt));
  auto u = scheme.precode(r, s);
  CHECK(std::vector<Symbol>(u.begin(), u.begin() + 7) == r);
  CHECK(scheme.extract_secret(u) == s);
  std::vector<Symbol> rs(r);
  rs.insert(rs.end(), s.begin(), s.end());
  auto row = Matrix(p.field, 1, 9, rs) * scheme.precode_matrix();
  CHECK(row.data() == u);
  CHECK_THROWS_AS(scheme.precode(s, r), InvalidParameterError);
}

TEST_CASE("rank verifier agrees with the exhaustive verifier on k = 2, q = 5") {
  auto p = CodeParams::make(2, 5);
  auto gens = GeneratorSet::build(p);
  std::mt19937_64 mt(17);
  int leaky = 0;
  int perfect = 0;
  for (std::size_t l1 = 0; l1 < 2; ++l1)
    for (std::size_t l2 = 0; l1 + l2 < 2; ++l2) {
      const std::size_t R = random_symbol_count(p, l1, l2);
      std::vector<SecureScheme> schemes{SecureScheme::design(gens, l1, l2),
                                        SecureScheme::plain_layout(gens, l1, l2),
                                        SecureScheme::unpadded(gens)};
      for (int t = 0; t < 4; ++t) {
        schemes.push_back(SecureScheme::with_pad(gens, l1, l2,
                                                 testutil::random_matrix(p.field, R, p.B - R, mt)));
      }
      for (const auto& scheme : schemes) {
        for (const auto& e : enumerate_tap_sets(p, l1, l2)) {
          const bool rank = verify_secrecy_rank(scheme, e).perfect;
          const bool exact = verify_secrecy_exhaustive(scheme, e, 625);
          CHECK(rank == exact);
          (rank ? perfect : leaky)++;
        }
      }
    }
  CHECK(leaky > 0);
  CHECK(perfect > 0);
}

TEST_CASE("removing the padding leaks to any nonempty tap set") {
  for (std::size_t k : {2u, 3u}) {
    auto p = CodeParams::make(k);
    auto gens = GeneratorSet::build(p);
    auto bare = SecureScheme::unpadded(gens);
    CHECK(bare.random_count() == 0);
    CHECK(bare.secret_count() == p.B);
    for (const auto& e : enumerate_tap_sets(p, 1, 0)) {
      auto report = verify_secrecy_rank(bare, e);
      CHECK_FALSE(report.perfect);
      CHECK(report.leakage_dims == p.alpha);
    }
  }
  auto p2 = CodeParams::make(2, 5);
  auto bare2 = SecureScheme::unpadded(GeneratorSet::build(p2));
  CHECK_FALSE(verify_secrecy_exhaustive(bare2, eve({3}, {}), 625));
}

TEST_CASE("exhaustive verifier refuses oversized state spaces") {
  auto gens = golden::example_generators();
  auto scheme = SecureScheme::design(gens, 1, 1);
  CHECK_THROWS_AS(verify_secrecy_exhaustive(scheme, eve({1}, {3}), 1000), StateSpaceTooLarge);
}

TEST_CASE("pad design is deterministic and validates its result") {
  auto p = CodeParams::make(3);
  auto gens = GeneratorSet::build(p);
  auto a = SecureScheme::design(gens, 1, 1);
  auto b = SecureScheme::design(gens, 1, 1);
  CHECK(a.pad() == b.pad());
  CHECK(a.pad().rows() == 7);
  CHECK(a.pad().cols() == 2);
  CHECK_THROWS_AS(SecureScheme::design(gens, 2, 1), InvalidParameterError);
  CHECK_THROWS_AS(SecureScheme::with_pad(gens, 1, 1, Matrix(p.field, 2, 2)), ShapeError);
}

TEST_CASE("seeded randomness is reproducible and covers the field") {
  PrimeField f(7);
  auto a = RandomSource::seeded(42);
  auto b = RandomSource::seeded(42);
  std::map<Symbol, int> counts;
  for (int i = 0; i < 7000; ++i) {
    auto x = a.uniform(f);
    CHECK(x == b.uniform(f));
    counts[x]++;
  }
  CHECK(counts.size() == 7);
  for (const auto& [v, c] : counts) {
    CHECK(c > 800);
    CHECK(c < 1200);
  }
  auto e = RandomSource::entropy();
  for (int i = 0; i < 100; ++i) CHECK(e.uniform(f) < 7);
}
