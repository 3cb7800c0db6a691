#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>

#include "iamsr/storage.hpp"

using namespace iamsr;
using namespace iamsr::storage;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("iamsr_storage_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

ClusterManifest sample_manifest() {
  ClusterManifest m;
  m.k = 3;
  m.n = 6;
  m.d = 5;
  m.alpha = 3;
  m.beta = 1;
  m.q = 257;
  m.epsilon = 2;
  m.psi = CauchySequence::canonical(3, 3);
  m.mode = Mode::plain;
  m.payload = PayloadKind::bytes;
  m.stripes = 2;
  m.length = 10;
  for (NodeId id = 1; id <= 6; ++id) m.checksums[id] = 1000u + static_cast<std::uint32_t>(id);
  return m;
}

std::vector<std::uint8_t> random_bytes(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

}  // namespace

TEST_CASE("node file layout is bit exact") {
  NodeFile node{0x0102, NodeRole::parity, 1, {0x1234, 5, 0xfff0}};
  auto bytes = serialize_node(node);
  std::vector<std::uint8_t> expected{'I', 'A', 'M', 'S', 'R', '1', 1, 0x02, 0x01, 1, 1, 0, 0, 0,
                                     0x34, 0x12, 5, 0, 0xf0, 0xff};
  CHECK(bytes == expected);
  CHECK(parse_node(bytes, 65521, 3) == node);
}

TEST_CASE("node file round trip through disk") {
  auto dir = scratch_dir("roundtrip");
  NodeFile node{4, NodeRole::parity, 2, {1, 2, 3, 4, 5, 6}};
  write_node(dir / "n.bin", node);
  CHECK(read_node(dir / "n.bin", 7, 3) == node);
  CHECK_FALSE(std::filesystem::exists(dir / "n.bin.tmp"));
  NodeFile empty{1, NodeRole::systematic, 0, {}};
  write_node(dir / "e.bin", empty);
  CHECK(read_node(dir / "e.bin", 7, 3) == empty);
}

TEST_CASE("node file errors") {
  NodeFile node{2, NodeRole::systematic, 1, {1, 2, 3}};
  auto bytes = serialize_node(node);

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_WITH_AS(parse_node(bad_magic, 7, 3), doctest::Contains("bad magic"), FormatError);

  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(parse_node(truncated, 7, 3), FormatError);
  CHECK_THROWS_AS(parse_node(std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 8), 7, 3),
                  FormatError);

  auto version = bytes;
  version[6] = 2;
  CHECK_THROWS_AS(parse_node(version, 7, 3), FormatError);

  auto role = bytes;
  role[9] = 2;
  CHECK_THROWS_AS(parse_node(role, 7, 3), FormatError);

  auto out_of_range = bytes;
  out_of_range[16] = 7;  // second symbol, at byte offset 16
  CHECK_THROWS_WITH_AS(parse_node(out_of_range, 7, 3),
                       "symbol 7 at byte offset 16 is not below q = 7", FormatError);
  CHECK_THROWS_AS(parse_node(bytes, 7, 2), FormatError);
}

TEST_CASE("checksums differ when content differs") {
  NodeFile a{1, NodeRole::systematic, 1, {1, 2, 3}};
  NodeFile b = a;
  b.symbols[2] = 4;
  CHECK(node_checksum(a) == node_checksum(a));
  CHECK(node_checksum(a) != node_checksum(b));
}

TEST_CASE("ingest examples") {
  auto p257 = CodeParams::make(3, 257);
  CHECK(ingest({}, p257, 9).empty());
  std::vector<std::uint8_t> nine{1, 2, 3, 4, 5, 6, 7, 8, 9};
  auto plain = ingest(nine, p257, 9);
  REQUIRE(plain.size() == 1);
  CHECK(plain[0].size() == 9);
  std::vector<std::uint8_t> four{10, 20, 30, 40};
  auto secure = ingest(four, p257, 2);
  REQUIRE(secure.size() == 2);
  CHECK(secure[0] == Stripe{10, 20});
  CHECK(secure[1] == Stripe{30, 40});
  auto padded = ingest(std::vector<std::uint8_t>{1, 2, 3}, p257, 2);
  CHECK(padded[1] == Stripe{3, 0});
  CHECK_THROWS_AS(ingest(nine, CodeParams::make(3), 9), InvalidParameterError);
}

TEST_CASE("egest inverts ingest for random payloads") {
  std::mt19937_64 rng(12);
  auto p = CodeParams::make(3, 257);
  auto m = sample_manifest();
  for (std::size_t len : {0u, 1u, 8u, 9u, 10u, 1000u, 65537u, 1u << 20}) {
    auto data = random_bytes(len, rng);
    auto stripes = ingest(data, p, 9);
    m.stripes = stripes.size();
    m.length = len;
    CHECK(egest(stripes, m) == data);
  }
  auto stripes = ingest(std::vector<std::uint8_t>{1, 2, 3}, p, 9);
  m.stripes = 1;
  m.length = 3;
  CHECK(egest(stripes, m) == std::vector<std::uint8_t>{1, 2, 3});
  m.stripes = 2;
  CHECK_THROWS_AS(egest(stripes, m), FormatError);
}

TEST_CASE("symbolic payloads") {
  PrimeField f(7);
  CHECK(parse_symbolic_payload("3 5\n 6\t0", f) == std::vector<Symbol>{3, 5, 6, 0});
  CHECK(parse_symbolic_payload("", f).empty());
  CHECK_THROWS_AS(parse_symbolic_payload("3 7", f), FormatError);
  CHECK_THROWS_AS(parse_symbolic_payload("3 x", f), FormatError);
  CHECK(format_symbolic_payload(std::vector<Symbol>{1, 2}) == "1 2\n");
}

TEST_CASE("manifest serializes with sorted keys and round trips") {
  auto m = sample_manifest();
  auto text = m.serialize();
  CHECK(text.rfind("alpha=3\nbeta=1\nd=5\nepsilon=2\nformat_version=1\nk=3\nl1=0\nl2=0\nlength=10\n"
                   "mode=plain\nn=6\nnode.1.crc32=1001\n",
                   0) == 0);
  std::vector<std::string> keys;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) keys.push_back(line.substr(0, line.find('=')));
  CHECK(std::is_sorted(keys.begin(), keys.end()));
  auto back = ClusterManifest::parse(text);
  CHECK(back.serialize() == text);
  CHECK_NOTHROW(back.validate());

  auto dir = scratch_dir("manifest");
  m.save(dir / "manifest.txt");
  CHECK(ClusterManifest::load(dir / "manifest.txt").serialize() == text);
}

TEST_CASE("manifest validation rejects inconsistent parameters") {
  auto m = sample_manifest();
  CHECK(m.validate().B == 9);

  auto bad = m;
  bad.epsilon = 1;
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
  bad = m;
  bad.d = 4;
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
  bad = m;
  bad.q = 256;
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
  bad = m;
  bad.q = 7;
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
  bad = m;
  bad.stripes = 1;
  CHECK_THROWS_AS(bad.validate(), FormatError);
  bad = m;
  bad.stripes = 3;
  CHECK_THROWS_AS(bad.validate(), FormatError);
  bad = m;
  bad.checksums.erase(6);
  CHECK_THROWS_AS(bad.validate(), FormatError);
  bad = m;
  bad.psi.ys = {3, 4};
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
  bad = m;
  bad.l1 = 1;
  CHECK_THROWS_AS(bad.validate(), FormatError);
  bad = m;
  bad.mode = Mode::secure;
  bad.l1 = 1;
  bad.l2 = 1;
  bad.stripes = 5;
  CHECK_THROWS_AS(bad.validate(), FormatError);
  bad.pad.assign(14, 1);
  CHECK_NOTHROW(bad.validate());
  CHECK(bad.stripe_symbols() == 2);
  bad.l2 = 2;
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
}

TEST_CASE("manifest parse errors") {
  auto text = sample_manifest().serialize();
  CHECK_THROWS_AS(ClusterManifest::parse(text + "bogus=1\n"), FormatError);
  CHECK_THROWS_AS(ClusterManifest::parse(text + "k=3\n"), FormatError);
  CHECK_THROWS_AS(ClusterManifest::parse(text + "no equals sign\n"), FormatError);
  CHECK_THROWS_AS(ClusterManifest::parse("k=3\n"), FormatError);
  auto bad_number = text;
  bad_number.replace(bad_number.find("k=3"), 3, "k=x");
  CHECK_THROWS_AS(ClusterManifest::parse(bad_number), FormatError);
}
