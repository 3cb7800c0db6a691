#pragma once

// The [n = 2k, k, d = n - 1] MSR interference-alignment code: parameters,
// generator matrices, encoding, reconstruction from any k nodes and exact
// repair of systematic nodes.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "iamsr/cauchy.hpp"
#include "iamsr/matrix.hpp"

namespace iamsr {

/// 1-based node index. Ids 1..k are systematic, k+1..2k parity.
using NodeId = int;

enum class NodeRole : std::uint8_t { systematic = 0, parity = 1 };

const char* to_string(NodeRole role) noexcept;

struct CodeParams {
  std::size_t k;
  std::size_t n;
  std::size_t d;
  std::size_t alpha;
  std::size_t beta;
  std::size_t B;
  PrimeField field;
  Element epsilon;

  /// Derives the family parameters for k. q defaults to the smallest prime
  /// >= max(2k, 5) and epsilon to 2.
  static CodeParams make(std::size_t k, std::optional<std::uint32_t> q = std::nullopt,
                         std::optional<std::uint32_t> epsilon = std::nullopt);

  /// Throws InvalidParameterError if any structural or field-size invariant
  /// fails.
  void validate() const;

  bool is_systematic(NodeId id) const noexcept { return id >= 1 && static_cast<std::size_t>(id) <= k; }
  bool is_parity(NodeId id) const noexcept {
    return static_cast<std::size_t>(id) > k && static_cast<std::size_t>(id) <= n;
  }
  NodeRole role(NodeId id) const;
  void require_node(NodeId id) const;
};

inline CodeParams params_new(std::size_t k, std::optional<std::uint32_t> q_override = std::nullopt) {
  return CodeParams::make(k, q_override);
}

/// True iff B <= sum_{i=0}^{k-1} min(alpha, (d - i) beta). Does not call
/// validate(), so it can be pointed at deliberately broken parameters.
bool cutset_validate(const CodeParams& params) noexcept;

/// The n per-node B x alpha generator matrices. Immutable once built.
class GeneratorSet {
 public:
  /// psi must be alpha x (n - k) with nonzero entries and every square
  /// submatrix nonsingular; the check is exhaustive, so k is limited to
  /// kMaxNonsingularityOrder on this path.
  static GeneratorSet build(const CodeParams& params, const Matrix& psi);
  /// Builds psi as a Cauchy matrix from `seq`, which is nonsingular by
  /// construction for any k.
  static GeneratorSet build(const CodeParams& params, const CauchySequence& seq);
  /// Canonical Cauchy sequence.
  static GeneratorSet build(const CodeParams& params);

  const CodeParams& params() const noexcept { return params_; }
  const PrimeField& field() const noexcept { return params_.field; }
  const Matrix& psi() const noexcept { return psi_; }
  const Matrix& generator(NodeId id) const;
  /// psi_i^(m) for 1-based row i and parity node m.
  Element psi_entry(std::size_t i, NodeId m) const;

 private:
  GeneratorSet(CodeParams params, Matrix psi);

  CodeParams params_;
  Matrix psi_;
  std::vector<Matrix> generators_;
};

inline GeneratorSet build_generators(const CodeParams& params, const Matrix& psi) {
  return GeneratorSet::build(params, psi);
}

struct NodeContent {
  NodeId node_id;
  NodeRole role;
  std::vector<Element> symbols;

  friend bool operator==(const NodeContent&, const NodeContent&) = default;
};

/// Node m stores message * G^(m). message must hold B symbols.
std::vector<NodeContent> encode(const GeneratorSet& gens, std::span<const Element> message);
NodeContent encode_node(const GeneratorSet& gens, std::span<const Element> message, NodeId id);

/// Raw-residue encoder for one node; out receives alpha symbols.
void encode_node_raw(const GeneratorSet& gens, std::span<const Symbol> message, NodeId id,
                     std::span<Symbol> out);

/// Reusable decoder for one fixed set of k contacted nodes. Holds the
/// inverse of the stacked B x B generator system.
class Decoder {
 public:
  Decoder(const GeneratorSet& gens, std::span<const NodeId> node_ids);

  const std::vector<NodeId>& node_ids() const noexcept { return ids_; }

  /// `nodes` must carry exactly the decoder's node ids, in any order.
  std::vector<Element> decode(std::span<const NodeContent> nodes) const;
  /// `stacked` holds the contacted nodes' alpha symbols in node_ids() order.
  void decode_raw(std::span<const Symbol> stacked, std::span<Symbol> message) const;

 private:
  std::vector<NodeId> ids_;
  std::size_t alpha_;
  Matrix inverse_;
};

/// Recovers the B message symbols from any k distinct nodes by solving the
/// stacked system.
std::vector<Element> reconstruct(const GeneratorSet& gens, std::span<const NodeContent> nodes);

/// Same result, computed by reading contacted systematic blocks directly,
/// subtracting their contribution from the parity symbols and solving only
/// for the missing blocks.
std::vector<Element> reconstruct_systematic_first(const GeneratorSet& gens,
                                                  std::span<const NodeContent> nodes);

struct RepairDownload {
  NodeId source_id;
  std::size_t symbol_index;  // 1-based
  Element value;
};

/// Surviving node -> 1-based symbol index it passes when systematic node
/// `failed` is repaired. Throws for parity nodes.
std::map<NodeId, std::size_t> repair_plan(const CodeParams& params, NodeId failed);

/// The downloads the survivors send under repair_plan(failed). `nodes`
/// must contain every node other than `failed`.
std::vector<RepairDownload> gather_repair_downloads(const CodeParams& params,
                                                    std::span<const NodeContent> nodes,
                                                    NodeId failed);

struct RepairResult {
  NodeContent node;
  std::size_t downloaded_symbols;
  bool bandwidth_optimal;
};

/// Exact repair of a systematic node from d single-symbol downloads.
/// Interference from the other systematic blocks is cancelled with the
/// systematic downloads, then eps * Psi^T x = residual is solved.
class SystematicRepairer {
 public:
  /// Keeps a reference to `gens`, which must outlive the repairer.
  explicit SystematicRepairer(const GeneratorSet& gens);
  RepairResult repair(NodeId failed, std::span<const RepairDownload> downloads) const;

 private:
  const GeneratorSet* gens_;
  Matrix solve_matrix_;  // ((eps * Psi^T)^-1)^T, applied to residual rows
};

RepairResult repair_systematic(const GeneratorSet& gens, NodeId failed,
                               std::span<const RepairDownload> downloads);

/// Reconstruct-and-re-encode for a parity node (or any node when the full
/// set of d helpers is unavailable). Downloads k * alpha symbols.
RepairResult repair_parity_fallback(const GeneratorSet& gens, NodeId failed,
                                    std::span<const NodeContent> survivors);

/// B x d matrix whose columns are the global kernels of the symbols sent
/// when `failed` is repaired, in increasing source-id order.
Matrix repair_download_kernels(const GeneratorSet& gens, NodeId failed);

/// For each systematic block i != failed, the rank of the alpha x d
/// restriction of repair_download_kernels to block i. Alignment means 1.
std::map<std::size_t, std::size_t> interference_block_ranks(const GeneratorSet& gens,
                                                            NodeId failed);

}  // namespace iamsr
