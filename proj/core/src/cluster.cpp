#include "iamsr/cluster.hpp"

#include <algorithm>
#include <set>
#include <string_view>

namespace iamsr::cluster {

namespace {

using storage::ClusterManifest;
using storage::NodeFile;
using storage::Stripe;

const CauchySequence kPresetSequence{{0, 1, 2}, {4, 5, 6}};

secrecy::SecureScheme scheme_from_manifest(const ClusterManifest& m) {
  const CodeParams params = m.validate();
  auto gens = GeneratorSet::build(params, m.psi);
  if (m.mode == storage::Mode::plain) return secrecy::SecureScheme::unpadded(gens);
  const std::size_t R = secrecy::random_symbol_count(params, m.l1, m.l2);
  return secrecy::SecureScheme::with_pad(gens, m.l1, m.l2,
                                         Matrix(params.field, R, params.B - R, m.pad));
}

std::span<const Symbol> stripe_slice(const NodeFile& node, std::uint64_t stripe,
                                     std::size_t alpha) {
  return std::span<const Symbol>(node.symbols).subspan(stripe * alpha, alpha);
}

}  // namespace

ClusterManifest encode_cluster(std::span<const std::uint8_t> input, const EncodeOptions& options,
                               const std::filesystem::path& dir) {
  if (options.paper_psi && (options.k != 3 || options.q.value_or(7) != 7)) {
    throw InvalidParameterError("--paper-psi needs k = 3 and q = 7");
  }
  if (!options.secure && (options.l1 != 0 || options.l2 != 0)) {
    throw InvalidParameterError("l1 and l2 apply to secure mode only");
  }
  const auto q = options.paper_psi ? std::optional<std::uint32_t>(7) : options.q;
  const CodeParams params = CodeParams::make(options.k, q);
  const CauchySequence seq =
      options.paper_psi ? kPresetSequence : CauchySequence::canonical(params.alpha, params.n - params.k);
  const auto gens = GeneratorSet::build(params, seq);
  const auto scheme = options.secure ? secrecy::SecureScheme::design(gens, options.l1, options.l2)
                                     : secrecy::SecureScheme::unpadded(gens);

  const bool bytes = params.field.modulus() >= storage::kMinByteModulus;
  const std::vector<Symbol> symbols =
      bytes ? std::vector<Symbol>(input.begin(), input.end())
            : storage::parse_symbolic_payload(
                  std::string_view(reinterpret_cast<const char*>(input.data()), input.size()),
                  params.field);
  const auto stripes = storage::split_stripes(symbols, scheme.secret_count());

  auto rng = options.seed ? secrecy::RandomSource::seeded(*options.seed)
                          : secrecy::RandomSource::entropy();
  std::vector<NodeFile> nodes(params.n);
  for (std::size_t id = 1; id <= params.n; ++id) {
    auto& node = nodes[id - 1];
    node.node_id = static_cast<NodeId>(id);
    node.role = params.role(node.node_id);
    node.stripes = static_cast<std::uint32_t>(stripes.size());
    node.symbols.resize(stripes.size() * params.alpha);
  }
  std::vector<Symbol> rand(scheme.random_count());
  for (std::size_t s = 0; s < stripes.size(); ++s) {
    for (auto& r : rand) r = rng.uniform(params.field);
    const auto message = scheme.precode(rand, stripes[s]);
    for (auto& node : nodes) {
      encode_node_raw(gens, message, node.node_id,
                      std::span<Symbol>(node.symbols).subspan(s * params.alpha, params.alpha));
    }
  }

  ClusterManifest m;
  m.k = params.k;
  m.n = params.n;
  m.d = params.d;
  m.alpha = params.alpha;
  m.beta = params.beta;
  m.q = params.field.modulus();
  m.epsilon = params.epsilon.value();
  m.psi = seq;
  m.mode = options.secure ? storage::Mode::secure : storage::Mode::plain;
  m.payload = bytes ? storage::PayloadKind::bytes : storage::PayloadKind::symbols;
  m.l1 = options.l1;
  m.l2 = options.l2;
  if (options.secure) m.pad = scheme.pad().data();
  m.stripes = stripes.size();
  m.length = symbols.size();
  for (const auto& node : nodes) m.checksums[node.node_id] = storage::node_checksum(node);
  m.validate();

  std::filesystem::create_directories(dir);
  for (const auto& node : nodes) storage::write_node(storage::node_path(dir, node.node_id), node);
  m.save(storage::manifest_path(dir));
  return m;
}

Cluster::Cluster(std::filesystem::path dir, ClusterManifest manifest, secrecy::SecureScheme scheme)
    : dir_(std::move(dir)), manifest_(std::move(manifest)), scheme_(std::move(scheme)) {}

Cluster Cluster::open(const std::filesystem::path& dir) {
  auto m = ClusterManifest::load(storage::manifest_path(dir));
  auto scheme = scheme_from_manifest(m);
  return Cluster(dir, std::move(m), std::move(scheme));
}

bool Cluster::has_node(NodeId id) const {
  params().require_node(id);
  return std::filesystem::exists(storage::node_path(dir_, id));
}

std::vector<NodeId> Cluster::present_nodes() const {
  std::vector<NodeId> out;
  for (std::size_t id = 1; id <= params().n; ++id) {
    if (has_node(static_cast<NodeId>(id))) out.push_back(static_cast<NodeId>(id));
  }
  return out;
}

NodeFile Cluster::read_node(NodeId id) const {
  params().require_node(id);
  auto node = storage::read_node(storage::node_path(dir_, id), manifest_.q, manifest_.alpha);
  if (node.node_id != id || node.role != params().role(id) || node.stripes != manifest_.stripes) {
    throw FormatError("node file " + storage::node_path(dir_, id).string() +
                      " does not match the manifest header fields");
  }
  if (storage::node_checksum(node) != manifest_.checksums.at(id)) {
    throw FormatError("checksum mismatch for node " + std::to_string(id));
  }
  return node;
}

std::vector<std::uint8_t> Cluster::reconstruct(std::span<const NodeId> ids) const {
  const auto& p = params();
  if (ids.size() != p.k) {
    throw InvalidParameterError("reconstruction needs exactly k = " + std::to_string(p.k) +
                                " nodes, got " + std::to_string(ids.size()));
  }
  Decoder decoder(gens(), ids);
  std::vector<NodeFile> nodes;
  for (NodeId id : decoder.node_ids()) nodes.push_back(read_node(id));

  std::vector<Stripe> secrets(manifest_.stripes);
  std::vector<Symbol> stacked(p.B);
  std::vector<Symbol> message(p.B);
  for (std::uint64_t s = 0; s < manifest_.stripes; ++s) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      auto part = stripe_slice(nodes[i], s, p.alpha);
      std::copy(part.begin(), part.end(), stacked.begin() + static_cast<std::ptrdiff_t>(i * p.alpha));
    }
    decoder.decode_raw(stacked, message);
    secrets[s] = scheme_.extract_secret(message);
  }
  if (manifest_.payload == storage::PayloadKind::bytes) return storage::egest(secrets, manifest_);
  const auto text = storage::format_symbolic_payload(storage::join_stripes(secrets, manifest_.length));
  return {text.begin(), text.end()};
}

void Cluster::fail(NodeId id) const {
  if (!has_node(id)) throw InvalidParameterError("node " + std::to_string(id) + " is already missing");
  std::filesystem::remove(storage::node_path(dir_, id));
}

RepairReport Cluster::repair(NodeId id) const {
  const auto& p = params();
  if (has_node(id)) throw InvalidParameterError("node " + std::to_string(id) + " is present");
  const auto present = present_nodes();
  std::map<NodeId, NodeFile> files;
  NodeFile rebuilt{id, p.role(id), static_cast<std::uint32_t>(manifest_.stripes),
                   std::vector<Symbol>(manifest_.stripes * p.alpha)};
  RepairReport report{id, 0, false, {}};

  if (p.is_systematic(id) && present.size() == p.n - 1) {
    const auto plan = repair_plan(p, id);
    for (const auto& [source, index] : plan) files.emplace(source, read_node(source));
    SystematicRepairer repairer(gens());
    std::vector<RepairDownload> downloads;
    for (std::uint64_t s = 0; s < manifest_.stripes; ++s) {
      downloads.clear();
      for (const auto& [source, index] : plan) {
        Symbol v = stripe_slice(files.at(source), s, p.alpha)[index - 1];
        downloads.push_back(RepairDownload{source, index, Element(v, p.field)});
      }
      auto result = repairer.repair(id, downloads);
      for (std::size_t j = 0; j < p.alpha; ++j) {
        rebuilt.symbols[s * p.alpha + j] = result.node.symbols[j].value();
      }
    }
    report.downloaded_per_stripe = plan.size();
    report.bandwidth_optimal = true;
    for (const auto& [source, index] : plan) report.helpers.push_back(source);
  } else {
    if (present.size() < p.k) {
      throw InvalidParameterError("repair needs at least k = " + std::to_string(p.k) +
                                  " surviving nodes, found " + std::to_string(present.size()));
    }
    const std::vector<NodeId> helpers(present.begin(), present.begin() + static_cast<std::ptrdiff_t>(p.k));
    Decoder decoder(gens(), helpers);
    for (NodeId h : decoder.node_ids()) files.emplace(h, read_node(h));
    std::vector<Symbol> stacked(p.B);
    std::vector<Symbol> message(p.B);
    for (std::uint64_t s = 0; s < manifest_.stripes; ++s) {
      std::size_t off = 0;
      for (NodeId h : decoder.node_ids()) {
        auto part = stripe_slice(files.at(h), s, p.alpha);
        std::copy(part.begin(), part.end(), stacked.begin() + static_cast<std::ptrdiff_t>(off));
        off += p.alpha;
      }
      decoder.decode_raw(stacked, message);
      encode_node_raw(gens(), message, id,
                      std::span<Symbol>(rebuilt.symbols).subspan(s * p.alpha, p.alpha));
    }
    report.downloaded_per_stripe = p.k * p.alpha;
    report.helpers = decoder.node_ids();
  }

  if (storage::node_checksum(rebuilt) != manifest_.checksums.at(id)) {
    throw FormatError("repaired node " + std::to_string(id) + " does not match its checksum");
  }
  storage::write_node(storage::node_path(dir_, id), rebuilt);
  return report;
}

std::vector<NodeContent> Cluster::stripe_contents(std::uint64_t stripe) const {
  if (stripe >= manifest_.stripes) {
    throw InvalidParameterError("stripe " + std::to_string(stripe) + " out of range; cluster has " +
                                std::to_string(manifest_.stripes));
  }
  std::vector<NodeContent> out;
  for (NodeId id : present_nodes()) {
    const auto node = read_node(id);
    out.push_back(NodeContent{id, node.role,
                              to_elements(params().field, stripe_slice(node, stripe, params().alpha))});
  }
  return out;
}

}  // namespace iamsr::cluster
