#include "iamsr/storage.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "iamsr/secrecy.hpp"

namespace iamsr::storage {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t off) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[off + static_cast<std::size_t>(i)];
  return v;
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw FormatError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view text, std::string_view what) {
  std::vector<T> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    out.push_back(parse_number<T>(text.substr(start, comma - start), what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
std::string join_list(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

}  // namespace

const char* to_string(Mode mode) noexcept { return mode == Mode::plain ? "plain" : "secure"; }

const char* to_string(PayloadKind kind) noexcept {
  return kind == PayloadKind::bytes ? "bytes" : "symbols";
}

std::vector<Stripe> split_stripes(std::span<const Symbol> symbols, std::size_t stripe_symbols) {
  if (stripe_symbols == 0) throw InvalidParameterError("stripe size must be positive");
  std::vector<Stripe> out;
  for (std::size_t off = 0; off < symbols.size(); off += stripe_symbols) {
    Stripe s(stripe_symbols, 0);
    const std::size_t take = std::min(stripe_symbols, symbols.size() - off);
    std::copy_n(symbols.begin() + static_cast<std::ptrdiff_t>(off), take, s.begin());
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Symbol> join_stripes(std::span<const Stripe> stripes, std::uint64_t length) {
  std::vector<Symbol> out;
  for (const auto& s : stripes) out.insert(out.end(), s.begin(), s.end());
  if (length > out.size()) {
    throw FormatError("recorded length " + std::to_string(length) + " exceeds the " +
                      std::to_string(out.size()) + " symbols held by the stripes");
  }
  out.resize(length);
  return out;
}

std::vector<Stripe> ingest(std::span<const std::uint8_t> bytes, const CodeParams& params,
                           std::size_t stripe_symbols) {
  if (params.field.modulus() < kMinByteModulus) {
    throw InvalidParameterError("byte payloads need q >= 257, got q = " +
                                std::to_string(params.field.modulus()));
  }
  std::vector<Symbol> symbols(bytes.begin(), bytes.end());
  return split_stripes(symbols, stripe_symbols);
}

std::vector<Symbol> parse_symbolic_payload(std::string_view text, const PrimeField& field) {
  std::vector<Symbol> out;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    auto v = parse_number<std::uint32_t>(token, "symbol");
    if (v >= field.modulus()) {
      throw FormatError("symbol " + token + " at position " + std::to_string(out.size()) +
                        " is not below q = " + std::to_string(field.modulus()));
    }
    out.push_back(static_cast<Symbol>(v));
  }
  return out;
}

std::string format_symbolic_payload(std::span<const Symbol> symbols) {
  std::string out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(symbols[i]);
  }
  out += '\n';
  return out;
}

std::vector<std::uint8_t> serialize_node(const NodeFile& node) {
  if (node.node_id < 0 || node.node_id > 0xffff) {
    throw InvalidParameterError("node id does not fit in 16 bits");
  }
  std::vector<std::uint8_t> out(kNodeMagic.begin(), kNodeMagic.end());
  out.reserve(kNodeHeaderSize + 2 * node.symbols.size());
  out.push_back(kNodeVersion);
  put_u16(out, static_cast<std::uint16_t>(node.node_id));
  out.push_back(static_cast<std::uint8_t>(node.role));
  put_u32(out, node.stripes);
  for (Symbol s : node.symbols) put_u16(out, s);
  return out;
}

NodeFile parse_node(std::span<const std::uint8_t> bytes, std::uint32_t q, std::size_t alpha) {
  if (bytes.size() < kNodeHeaderSize) {
    throw FormatError("truncated node file: " + std::to_string(bytes.size()) +
                      " bytes, header needs " + std::to_string(kNodeHeaderSize));
  }
  if (!std::equal(kNodeMagic.begin(), kNodeMagic.end(), bytes.begin())) {
    throw FormatError("bad magic: not an IAMSR1 node file");
  }
  if (bytes[6] != kNodeVersion) {
    throw FormatError("unsupported node file version " + std::to_string(bytes[6]));
  }
  NodeFile node;
  node.node_id = get_u16(bytes, 7);
  if (bytes[9] > 1) throw FormatError("bad role byte " + std::to_string(bytes[9]));
  node.role = static_cast<NodeRole>(bytes[9]);
  node.stripes = get_u32(bytes, 10);
  const std::uint64_t expected = kNodeHeaderSize + 2ull * node.stripes * alpha;
  if (bytes.size() != expected) {
    throw FormatError("node file is " + std::to_string(bytes.size()) + " bytes, expected " +
                      std::to_string(expected) + " for " + std::to_string(node.stripes) +
                      " stripes");
  }
  node.symbols.resize(static_cast<std::size_t>(node.stripes) * alpha);
  for (std::size_t i = 0; i < node.symbols.size(); ++i) {
    const std::size_t off = kNodeHeaderSize + 2 * i;
    const std::uint16_t v = get_u16(bytes, off);
    if (v >= q) {
      throw FormatError("symbol " + std::to_string(v) + " at byte offset " + std::to_string(off) +
                        " is not below q = " + std::to_string(q));
    }
    node.symbols[i] = v;
  }
  return node;
}

std::uint32_t node_checksum(const NodeFile& node) {
  const auto bytes = serialize_node(node);
  return static_cast<std::uint32_t>(
      crc32(crc32(0L, Z_NULL, 0), bytes.data(), static_cast<uInt>(bytes.size())));
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_node(const std::filesystem::path& path, const NodeFile& node) {
  write_file_atomic(path, serialize_node(node));
}

NodeFile read_node(const std::filesystem::path& path, std::uint32_t q, std::size_t alpha) {
  return parse_node(read_file(path), q, alpha);
}

CodeParams ClusterManifest::validate() const {
  if (format_version != 1) {
    throw FormatError("unsupported manifest format_version " + std::to_string(format_version));
  }
  CodeParams p = CodeParams::make(k, q, epsilon);
  if (p.n != n || p.d != d || p.alpha != alpha || p.beta != beta) {
    throw InvalidParameterError("manifest n, d, alpha, beta do not match k = " +
                                std::to_string(k));
  }
  if (psi.xs.size() != p.alpha || psi.ys.size() != p.n - p.k) {
    throw InvalidParameterError("psi sequence must have alpha xs and n - k ys");
  }
  psi.validate(p.field);
  if (payload == PayloadKind::bytes && q < kMinByteModulus) {
    throw InvalidParameterError("byte payloads need q >= 257");
  }
  if (mode == Mode::secure) {
    if (l1 + l2 >= k) throw InvalidParameterError("need l1 + l2 < k");
    const std::size_t R = secrecy::random_symbol_count(p, l1, l2);
    if (pad.size() != R * (p.B - R)) {
      throw FormatError("pad holds " + std::to_string(pad.size()) + " entries, expected " +
                        std::to_string(R * (p.B - R)));
    }
  } else if (l1 != 0 || l2 != 0 || !pad.empty()) {
    throw FormatError("plain mode manifest carries eavesdropper settings");
  }
  for (Symbol v : pad) {
    if (v >= q) throw FormatError("pad entry " + std::to_string(v) + " is not below q");
  }
  if (stripes * stripe_symbols() < length) {
    throw FormatError("stripe count " + std::to_string(stripes) + " cannot hold " +
                      std::to_string(length) + " payload symbols");
  }
  if (stripes > 0 && length <= (stripes - 1) * stripe_symbols()) {
    throw FormatError("stripe count " + std::to_string(stripes) + " exceeds what " +
                      std::to_string(length) + " payload symbols need");
  }
  for (std::size_t id = 1; id <= n; ++id) {
    if (!checksums.contains(static_cast<NodeId>(id))) {
      throw FormatError("manifest lacks a checksum for node " + std::to_string(id));
    }
  }
  if (checksums.size() != n) throw FormatError("manifest has checksums for unknown nodes");
  return p;
}

std::size_t ClusterManifest::stripe_symbols() const {
  if (mode == Mode::plain) return k * k;
  return (k - l1 - l2) * (k - l2);
}

std::string ClusterManifest::serialize() const {
  std::map<std::string, std::string> kv;
  kv["format_version"] = std::to_string(format_version);
  kv["k"] = std::to_string(k);
  kv["n"] = std::to_string(n);
  kv["d"] = std::to_string(d);
  kv["alpha"] = std::to_string(alpha);
  kv["beta"] = std::to_string(beta);
  kv["q"] = std::to_string(q);
  kv["epsilon"] = std::to_string(epsilon);
  kv["psi_xs"] = join_list(psi.xs);
  kv["psi_ys"] = join_list(psi.ys);
  kv["mode"] = to_string(mode);
  kv["payload"] = to_string(payload);
  kv["l1"] = std::to_string(l1);
  kv["l2"] = std::to_string(l2);
  kv["pad"] = join_list(pad);
  kv["stripes"] = std::to_string(stripes);
  kv["length"] = std::to_string(length);
  for (const auto& [id, crc] : checksums) {
    kv["node." + std::to_string(id) + ".crc32"] = std::to_string(crc);
  }
  std::string out;
  for (const auto& [key, value] : kv) out += key + "=" + value + "\n";
  return out;
}

ClusterManifest ClusterManifest::parse(std::string_view text) {
  std::map<std::string, std::string, std::less<>> kv;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError("manifest line " + std::to_string(line_no) + " has no '='");
    }
    if (!kv.emplace(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1))).second) {
      throw FormatError("duplicate manifest key '" + std::string(line.substr(0, eq)) + "'");
    }
  }
  auto take = [&](std::string_view key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError("manifest lacks key '" + std::string(key) + "'");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  ClusterManifest m;
  m.format_version = parse_number<std::uint32_t>(take("format_version"), "format_version");
  m.k = parse_number<std::size_t>(take("k"), "k");
  m.n = parse_number<std::size_t>(take("n"), "n");
  m.d = parse_number<std::size_t>(take("d"), "d");
  m.alpha = parse_number<std::size_t>(take("alpha"), "alpha");
  m.beta = parse_number<std::size_t>(take("beta"), "beta");
  m.q = parse_number<std::uint32_t>(take("q"), "q");
  m.epsilon = parse_number<std::uint32_t>(take("epsilon"), "epsilon");
  m.psi.xs = parse_list<Symbol>(take("psi_xs"), "psi_xs");
  m.psi.ys = parse_list<Symbol>(take("psi_ys"), "psi_ys");
  const auto mode = take("mode");
  if (mode == "plain") {
    m.mode = Mode::plain;
  } else if (mode == "secure") {
    m.mode = Mode::secure;
  } else {
    throw FormatError("unknown mode '" + mode + "'");
  }
  const auto payload = take("payload");
  if (payload == "bytes") {
    m.payload = PayloadKind::bytes;
  } else if (payload == "symbols") {
    m.payload = PayloadKind::symbols;
  } else {
    throw FormatError("unknown payload kind '" + payload + "'");
  }
  m.l1 = parse_number<std::size_t>(take("l1"), "l1");
  m.l2 = parse_number<std::size_t>(take("l2"), "l2");
  m.pad = parse_list<Symbol>(take("pad"), "pad");
  m.stripes = parse_number<std::uint64_t>(take("stripes"), "stripes");
  m.length = parse_number<std::uint64_t>(take("length"), "length");
  for (const auto& [key, value] : kv) {
    constexpr std::string_view prefix = "node.";
    constexpr std::string_view suffix = ".crc32";
    if (key.size() <= prefix.size() + suffix.size() || !key.starts_with(prefix) ||
        !key.ends_with(suffix)) {
      throw FormatError("unknown manifest key '" + key + "'");
    }
    auto id = parse_number<NodeId>(
        std::string_view(key).substr(prefix.size(), key.size() - prefix.size() - suffix.size()),
        "node id");
    m.checksums[id] = parse_number<std::uint32_t>(value, "checksum");
  }
  return m;
}

void ClusterManifest::save(const std::filesystem::path& path) const {
  const auto text = serialize();
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

ClusterManifest ClusterManifest::load(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  auto m = parse(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  m.validate();
  return m;
}

std::vector<std::uint8_t> egest(std::span<const Stripe> stripes, const ClusterManifest& manifest) {
  if (manifest.payload != PayloadKind::bytes) {
    throw FormatError("egest needs a byte payload manifest");
  }
  if (stripes.size() != manifest.stripes) {
    throw FormatError("got " + std::to_string(stripes.size()) + " stripes, manifest records " +
                      std::to_string(manifest.stripes));
  }
  for (const auto& s : stripes) {
    if (s.size() != manifest.stripe_symbols()) throw FormatError("stripe has the wrong size");
  }
  const auto symbols = join_stripes(stripes, manifest.length);
  std::vector<std::uint8_t> out;
  out.reserve(symbols.size());
  for (Symbol s : symbols) {
    if (s > 0xff) throw FormatError("symbol " + std::to_string(s) + " is not a byte");
    out.push_back(static_cast<std::uint8_t>(s));
  }
  return out;
}

std::filesystem::path manifest_path(const std::filesystem::path& cluster) {
  return cluster / "manifest.txt";
}

std::filesystem::path node_path(const std::filesystem::path& cluster, NodeId id) {
  return cluster / ("node" + std::to_string(id) + ".bin");
}

}  // namespace iamsr::storage
