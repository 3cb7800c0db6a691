#include <doctest.h>

#include <filesystem>
#include <random>

#include "iamsr/cluster.hpp"
#include "test_util.hpp"

using namespace iamsr;
using namespace iamsr::cluster;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("iamsr_cluster_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::vector<std::uint8_t> random_bytes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

std::vector<std::uint8_t> text_bytes(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("pipeline: fail any node, repair, reconstruct from every k-subset") {
  for (std::size_t k : {2u, 3u}) {
    for (bool secure : {false, true}) {
      auto dir = scratch_dir("pipeline");
      EncodeOptions opt;
      opt.k = k;
      opt.q = 257;
      opt.secure = secure;
      opt.l1 = secure ? 1 : 0;
      opt.seed = 9;
      const auto data = random_bytes(1000 + k, k);
      encode_cluster(data, opt, dir);
      auto c = Cluster::open(dir);
      for (NodeId id = 1; id <= static_cast<NodeId>(2 * k); ++id) {
        const auto before = storage::read_file(storage::node_path(dir, id));
        c.fail(id);
        CHECK_FALSE(c.has_node(id));
        auto report = c.repair(id);
        CHECK(report.bandwidth_optimal == (static_cast<std::size_t>(id) <= k));
        CHECK(report.downloaded_per_stripe == (report.bandwidth_optimal ? 2 * k - 1 : k * k));
        CHECK(storage::read_file(storage::node_path(dir, id)) == before);
      }
      for (const auto& ids : testutil::node_subsets(2 * k, k)) CHECK(c.reconstruct(ids) == data);
    }
  }
}

TEST_CASE("node files are deterministic given payload, flags and seed") {
  const auto data = random_bytes(500, 1);
  EncodeOptions opt;
  opt.k = 3;
  opt.q = 257;
  opt.secure = true;
  opt.l1 = 1;
  opt.l2 = 1;
  opt.seed = 77;
  auto a = scratch_dir("det_a");
  auto b = scratch_dir("det_b");
  encode_cluster(data, opt, a);
  encode_cluster(data, opt, b);
  for (NodeId id = 1; id <= 6; ++id) {
    CHECK(storage::read_file(storage::node_path(a, id)) ==
          storage::read_file(storage::node_path(b, id)));
  }
  CHECK(storage::read_file(storage::manifest_path(a)) == storage::read_file(storage::manifest_path(b)));
  opt.seed = 78;
  auto c = scratch_dir("det_c");
  encode_cluster(data, opt, c);
  CHECK(storage::read_file(storage::node_path(a, 1)) != storage::read_file(storage::node_path(c, 1)));
}

TEST_CASE("plain mode keeps systematic nodes readable as the payload") {
  auto dir = scratch_dir("plain");
  EncodeOptions opt;
  opt.k = 3;
  opt.q = 257;
  const auto data = text_bytes("hello, world");
  auto m = encode_cluster(data, opt, dir);
  CHECK(m.stripes == 2);
  CHECK(m.length == 12);
  auto c = Cluster::open(dir);
  auto n1 = c.read_node(1);
  CHECK(n1.symbols[0] == 'h');
  std::vector<NodeId> ids{1, 2, 3};
  CHECK(c.reconstruct(ids) == data);
}

TEST_CASE("symbolic payloads with the worked example psi") {
  auto dir = scratch_dir("symbolic");
  EncodeOptions opt;
  opt.k = 3;
  opt.secure = true;
  opt.l1 = 1;
  opt.l2 = 1;
  opt.paper_psi = true;
  opt.seed = 3;
  auto m = encode_cluster(text_bytes("3 5 1"), opt, dir);
  CHECK(m.q == 7);
  CHECK(m.payload == storage::PayloadKind::symbols);
  CHECK(m.stripes == 2);
  auto c = Cluster::open(dir);
  CHECK(c.gens().psi() == Matrix::from_rows(c.params().field, {{5, 4, 1}, {2, 5, 4}, {3, 2, 5}}));
  std::vector<NodeId> ids{4, 5, 6};
  CHECK(c.reconstruct(ids) == text_bytes("3 5 1\n"));
}

TEST_CASE("invalid options are rejected before anything is written") {
  auto dir = scratch_dir("invalid");
  const auto data = text_bytes("1 2 3");
  EncodeOptions opt;
  opt.k = 4;
  opt.paper_psi = true;
  CHECK_THROWS_AS(encode_cluster(data, opt, dir), InvalidParameterError);
  opt = EncodeOptions{};
  opt.l1 = 1;
  CHECK_THROWS_AS(encode_cluster(data, opt, dir), InvalidParameterError);
  opt = EncodeOptions{};
  opt.secure = true;
  opt.l1 = 2;
  opt.l2 = 1;
  CHECK_THROWS_AS(encode_cluster(data, opt, dir), InvalidParameterError);
  opt = EncodeOptions{};
  opt.q = 9;
  CHECK_THROWS_AS(encode_cluster(data, opt, dir), InvalidParameterError);
  opt = EncodeOptions{};
  CHECK_THROWS_AS(encode_cluster(text_bytes("1 9"), opt, dir), FormatError);
  CHECK_FALSE(std::filesystem::exists(dir));
}

TEST_CASE("tampered and missing nodes are detected") {
  auto dir = scratch_dir("tamper");
  EncodeOptions opt;
  opt.k = 2;
  opt.q = 257;
  encode_cluster(random_bytes(40, 5), opt, dir);
  auto c = Cluster::open(dir);
  auto bytes = storage::read_file(storage::node_path(dir, 3));
  const std::size_t last = bytes.size() - 2;
  const auto value = static_cast<std::uint16_t>((bytes[last] | (bytes[last + 1] << 8)) + 1) % 257;
  bytes[last] = static_cast<std::uint8_t>(value & 0xff);
  bytes[last + 1] = static_cast<std::uint8_t>(value >> 8);
  storage::write_file_atomic(storage::node_path(dir, 3), bytes);
  CHECK_THROWS_WITH_AS(c.read_node(3), "checksum mismatch for node 3", FormatError);
  std::vector<NodeId> with3{1, 3};
  CHECK_THROWS_AS(c.reconstruct(with3), FormatError);
  std::vector<NodeId> too_many{1, 2, 4};
  CHECK_THROWS_AS(c.reconstruct(too_many), InvalidParameterError);
  CHECK_THROWS_AS(c.repair(1), InvalidParameterError);
  c.fail(1);
  CHECK_THROWS_AS(c.fail(1), InvalidParameterError);
  c.fail(2);
  c.fail(4);
  CHECK_THROWS_AS(c.repair(1), InvalidParameterError);
}

TEST_CASE("stripe contents and eavesdropping on a stored cluster") {
  auto dir = scratch_dir("eve");
  EncodeOptions opt;
  opt.k = 3;
  opt.q = 257;
  opt.secure = true;
  opt.l1 = 1;
  opt.l2 = 1;
  opt.seed = 1;
  encode_cluster(random_bytes(10, 2), opt, dir);
  auto c = Cluster::open(dir);
  CHECK(c.stripe_contents(0).size() == 6);
  CHECK_THROWS_AS(c.stripe_contents(5), InvalidParameterError);
  secrecy::EveModel eve{{1}, {3}};
  CHECK(secrecy::eavesdrop(c.gens(), eve, c.stripe_contents(4)).size() == 8);
  CHECK(secrecy::verify_secrecy_rank(c.scheme(), eve).perfect);
}
