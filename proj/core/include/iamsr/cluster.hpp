#pragma once

// A directory of node files plus a manifest, and the operations on it.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "iamsr/secrecy.hpp"
#include "iamsr/storage.hpp"

namespace iamsr::cluster {

struct EncodeOptions {
  std::size_t k = 3;
  std::optional<std::uint32_t> q;
  bool secure = false;
  std::size_t l1 = 0;
  std::size_t l2 = 0;
  /// Psi from xs = (0, 1, 2), ys = (4, 5, 6); needs k = 3, q = 7.
  bool paper_psi = false;
  /// Pins the random symbols of secure mode; entropy-seeded otherwise.
  std::optional<std::uint64_t> seed;
};

/// Validates the options, encodes every stripe of `input` and writes the
/// node files and manifest into `dir`. Nothing is written if validation
/// fails. Byte payloads need q >= 257; below that `input` is read as
/// whitespace-separated integers.
storage::ClusterManifest encode_cluster(std::span<const std::uint8_t> input,
                                        const EncodeOptions& options,
                                        const std::filesystem::path& dir);

struct RepairReport {
  NodeId node;
  std::size_t downloaded_per_stripe;
  bool bandwidth_optimal;
  std::vector<NodeId> helpers;
};

class Cluster {
 public:
  /// Loads and validates the manifest.
  static Cluster open(const std::filesystem::path& dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  const storage::ClusterManifest& manifest() const noexcept { return manifest_; }
  const CodeParams& params() const noexcept { return scheme_.params(); }
  const GeneratorSet& gens() const noexcept { return scheme_.gens(); }
  /// The stored pre-coder; with no random symbols in plain mode.
  const secrecy::SecureScheme& scheme() const noexcept { return scheme_; }

  bool has_node(NodeId id) const;
  std::vector<NodeId> present_nodes() const;
  /// Reads a node file and checks it against the manifest checksum.
  storage::NodeFile read_node(NodeId id) const;

  /// Decodes from exactly k distinct nodes and returns the original payload.
  std::vector<std::uint8_t> reconstruct(std::span<const NodeId> ids) const;

  /// Deletes a node file.
  void fail(NodeId id) const;

  /// Rebuilds a missing node. Systematic nodes with all d helpers present use
  /// exact repair; otherwise k survivors are decoded and re-encoded. The
  /// result must match the manifest checksum before it is written.
  RepairReport repair(NodeId id) const;

  /// The node contents of one stripe for every present node.
  std::vector<NodeContent> stripe_contents(std::uint64_t stripe) const;

 private:
  Cluster(std::filesystem::path dir, storage::ClusterManifest manifest,
          secrecy::SecureScheme scheme);

  std::filesystem::path dir_;
  storage::ClusterManifest manifest_;
  secrecy::SecureScheme scheme_;
};

}  // namespace iamsr::cluster
