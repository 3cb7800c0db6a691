#pragma once

// File-backed cluster layout: byte and integer payload striping, the node
// file format and the cluster manifest.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iamsr/code.hpp"

namespace iamsr::storage {

/// Smallest modulus for which every byte is its own symbol.
inline constexpr std::uint32_t kMinByteModulus = 257;

enum class Mode { plain, secure };
/// Bytes (one byte per symbol) or symbols (whitespace-separated integers).
enum class PayloadKind { bytes, symbols };

const char* to_string(Mode mode) noexcept;
const char* to_string(PayloadKind kind) noexcept;

using Stripe = std::vector<Symbol>;

/// Splits symbols into stripes of `stripe_symbols`, zero-padding the last.
std::vector<Stripe> split_stripes(std::span<const Symbol> symbols, std::size_t stripe_symbols);
/// Concatenates stripes and truncates to `length` symbols.
std::vector<Symbol> join_stripes(std::span<const Stripe> stripes, std::uint64_t length);

/// One symbol per byte. Throws InvalidParameterError when q < 257.
std::vector<Stripe> ingest(std::span<const std::uint8_t> bytes, const CodeParams& params,
                           std::size_t stripe_symbols);

/// Whitespace-separated integers, each below q.
std::vector<Symbol> parse_symbolic_payload(std::string_view text, const PrimeField& field);
std::string format_symbolic_payload(std::span<const Symbol> symbols);

/// Node file: magic "IAMSR1", version u8, node id u16 LE, role u8, stripe
/// count u32 LE, then the symbols as u16 LE.
struct NodeFile {
  NodeId node_id = 0;
  NodeRole role = NodeRole::systematic;
  std::uint32_t stripes = 0;
  std::vector<Symbol> symbols;  // stripe-major, alpha per stripe

  friend bool operator==(const NodeFile&, const NodeFile&) = default;
};

inline constexpr std::string_view kNodeMagic = "IAMSR1";
inline constexpr std::uint8_t kNodeVersion = 1;
inline constexpr std::size_t kNodeHeaderSize = 14;

std::vector<std::uint8_t> serialize_node(const NodeFile& node);
/// Throws FormatError on bad magic or version, truncation, a payload whose
/// length is not stripes * alpha, or a symbol >= q (reported with its byte
/// offset).
NodeFile parse_node(std::span<const std::uint8_t> bytes, std::uint32_t q, std::size_t alpha);

/// CRC-32 of the serialized node.
std::uint32_t node_checksum(const NodeFile& node);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

void write_node(const std::filesystem::path& path, const NodeFile& node);
NodeFile read_node(const std::filesystem::path& path, std::uint32_t q, std::size_t alpha);

struct ClusterManifest {
  std::uint32_t format_version = 1;
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t alpha = 0;
  std::size_t beta = 0;
  std::uint32_t q = 0;
  std::uint32_t epsilon = 0;
  CauchySequence psi;
  Mode mode = Mode::plain;
  PayloadKind payload = PayloadKind::bytes;
  std::size_t l1 = 0;
  std::size_t l2 = 0;
  std::vector<Symbol> pad;  // R x B^(s), row-major; empty in plain mode
  std::uint64_t stripes = 0;
  std::uint64_t length = 0;  // payload length in bytes or symbols
  std::map<NodeId, std::uint32_t> checksums;

  /// Checks every invariant and returns the code parameters. Throws
  /// InvalidParameterError or FormatError.
  CodeParams validate() const;
  /// B in plain mode, B^(s) in secure mode.
  std::size_t stripe_symbols() const;

  std::string serialize() const;
  static ClusterManifest parse(std::string_view text);

  void save(const std::filesystem::path& path) const;
  static ClusterManifest load(const std::filesystem::path& path);
};

/// Inverse of ingest: concatenates the stripes and strips the padding.
std::vector<std::uint8_t> egest(std::span<const Stripe> stripes, const ClusterManifest& manifest);

std::filesystem::path manifest_path(const std::filesystem::path& cluster);
std::filesystem::path node_path(const std::filesystem::path& cluster, NodeId id);

}  // namespace iamsr::storage
