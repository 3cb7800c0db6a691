#include "iamsr/code.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace iamsr {

namespace {

std::string id_str(NodeId id) { return std::to_string(id); }

void check_message(const CodeParams& p, std::size_t len) {
  if (len != p.B) {
    throw InvalidParameterError("message has " + std::to_string(len) + " symbols, expected B = " +
                                std::to_string(p.B));
  }
}

void check_message(const CodeParams& p, std::span<const Element> message) {
  check_message(p, message.size());
  for (const auto& e : message) {
    if (e.modulus() != p.field.modulus()) throw FieldMismatchError("message symbol from another field");
  }
}

void check_node_symbols(const CodeParams& p, const NodeContent& node) {
  p.require_node(node.node_id);
  if (node.symbols.size() != p.alpha) {
    throw InvalidParameterError("node " + id_str(node.node_id) + " carries " +
                                std::to_string(node.symbols.size()) + " symbols, expected " +
                                std::to_string(p.alpha));
  }
  for (const auto& s : node.symbols) {
    if (s.modulus() != p.field.modulus()) {
      throw FieldMismatchError("node " + id_str(node.node_id) + " holds symbols of another field");
    }
  }
}

std::vector<NodeId> checked_contact_set(const CodeParams& p, std::span<const NodeContent> nodes) {
  if (nodes.size() != p.k) {
    throw InvalidParameterError("reconstruction needs exactly k = " + std::to_string(p.k) +
                                " nodes, got " + std::to_string(nodes.size()));
  }
  std::set<NodeId> seen;
  std::vector<NodeId> ids;
  for (const auto& node : nodes) {
    check_node_symbols(p, node);
    if (!seen.insert(node.node_id).second) {
      throw InvalidParameterError("node " + id_str(node.node_id) + " contacted twice");
    }
    ids.push_back(node.node_id);
  }
  return ids;
}

}  // namespace

const char* to_string(NodeRole role) noexcept {
  return role == NodeRole::systematic ? "systematic" : "parity";
}

CodeParams CodeParams::make(std::size_t k, std::optional<std::uint32_t> q,
                            std::optional<std::uint32_t> epsilon) {
  if (k < 2) throw InvalidParameterError("k must be at least 2, got " + std::to_string(k));
  const std::uint32_t modulus =
      q ? *q : next_prime(static_cast<std::uint32_t>(std::max<std::size_t>(2 * k, 5)));
  PrimeField field(modulus);
  CodeParams p{k, 2 * k, 2 * k - 1, k, 1, k * k, field, field.element(epsilon.value_or(2))};
  p.validate();
  return p;
}

void CodeParams::validate() const {
  if (k < 2) throw InvalidParameterError("k must be at least 2");
  if (n != 2 * k || d != n - 1 || alpha != d - k + 1 || beta != 1 || B != k * alpha) {
    throw InvalidParameterError("parameters are not of the form [n = 2k, k, d = n - 1], "
                                "alpha = k, beta = 1, B = k^2");
  }
  const std::uint32_t q = field.modulus();
  if (q < alpha + n - k) {
    throw InvalidParameterError("field size " + std::to_string(q) + " below alpha + n - k = " +
                                std::to_string(alpha + n - k));
  }
  if (q < 4) throw InvalidParameterError("field size must be at least 4");
  if (epsilon.modulus() != q) throw FieldMismatchError("epsilon is not an element of GF(q)");
  if (epsilon.is_zero()) throw InvalidParameterError("epsilon must be nonzero");
  if (epsilon * epsilon == field.one()) {
    throw InvalidParameterError("epsilon = " + std::to_string(epsilon.value()) +
                                " has epsilon^2 = 1");
  }
}

NodeRole CodeParams::role(NodeId id) const {
  require_node(id);
  return is_systematic(id) ? NodeRole::systematic : NodeRole::parity;
}

void CodeParams::require_node(NodeId id) const {
  if (id < 1 || static_cast<std::size_t>(id) > n) {
    throw InvalidParameterError("node id " + id_str(id) + " outside 1.." + std::to_string(n));
  }
}

bool cutset_validate(const CodeParams& p) noexcept {
  std::size_t flow = 0;
  for (std::size_t i = 0; i < p.k; ++i) {
    std::size_t per_node = p.d >= i ? (p.d - i) * p.beta : 0;
    flow += std::min(p.alpha, per_node);
  }
  return p.B <= flow;
}

GeneratorSet::GeneratorSet(CodeParams params, Matrix psi)
    : params_(std::move(params)), psi_(std::move(psi)) {
  const auto& p = params_;
  const PrimeField& f = p.field;
  generators_.reserve(p.n);
  for (std::size_t m = 1; m <= p.k; ++m) {
    Matrix g(f, p.B, p.alpha);
    for (std::size_t t = 0; t < p.alpha; ++t) g.raw((m - 1) * p.alpha + t, t) = 1;
    generators_.push_back(std::move(g));
  }
  const Symbol eps = p.epsilon.value();
  for (std::size_t m = p.k + 1; m <= p.n; ++m) {
    const std::size_t col = m - p.k - 1;
    Matrix g(f, p.B, p.alpha);
    for (std::size_t i = 0; i < p.k; ++i) {
      for (std::size_t j = 0; j < p.alpha; ++j) {
        if (i == j) {
          for (std::size_t t = 0; t < p.alpha; ++t) {
            g.raw(i * p.alpha + t, j) = f.mul(eps, psi_.raw(t, col));
          }
        } else {
          g.raw(i * p.alpha + j, j) = psi_.raw(i, col);
        }
      }
    }
    generators_.push_back(std::move(g));
  }
}

GeneratorSet GeneratorSet::build(const CodeParams& params, const Matrix& psi) {
  params.validate();
  if (!(psi.field() == params.field)) throw FieldMismatchError("psi is over a different field");
  if (psi.rows() != params.alpha || psi.cols() != params.n - params.k) {
    throw ShapeError("psi must be " + std::to_string(params.alpha) + "x" +
                     std::to_string(params.n - params.k));
  }
  for (Symbol v : psi.data()) {
    if (v == 0) throw InvalidParameterError("psi has a zero entry");
  }
  const std::size_t order = std::min(params.alpha, params.n - params.k);
  if (order > kMaxNonsingularityOrder) {
    throw InvalidParameterError("cannot certify an arbitrary psi for k = " +
                                std::to_string(params.k) + "; build from a Cauchy sequence");
  }
  if (!verify_total_nonsingularity(psi, order)) {
    throw InvalidParameterError("psi has a singular square submatrix");
  }
  return GeneratorSet(params, psi);
}

GeneratorSet GeneratorSet::build(const CodeParams& params, const CauchySequence& seq) {
  params.validate();
  if (seq.xs.size() != params.alpha || seq.ys.size() != params.n - params.k) {
    throw ShapeError("Cauchy sequence must have " + std::to_string(params.alpha) + " row and " +
                     std::to_string(params.n - params.k) + " column points");
  }
  return GeneratorSet(params, cauchy_build(params.field, seq));
}

GeneratorSet GeneratorSet::build(const CodeParams& params) {
  return build(params, CauchySequence::canonical(params.alpha, params.n - params.k));
}

const Matrix& GeneratorSet::generator(NodeId id) const {
  params_.require_node(id);
  return generators_[static_cast<std::size_t>(id - 1)];
}

Element GeneratorSet::psi_entry(std::size_t i, NodeId m) const {
  if (!params_.is_parity(m)) throw InvalidParameterError("node " + id_str(m) + " is not parity");
  if (i < 1 || i > params_.alpha) throw InvalidParameterError("psi row out of range");
  return psi_.at(i - 1, static_cast<std::size_t>(m) - params_.k - 1);
}

void encode_node_raw(const GeneratorSet& gens, std::span<const Symbol> message, NodeId id,
                     std::span<Symbol> out) {
  multiply_row(gens.generator(id), message, out);
}

NodeContent encode_node(const GeneratorSet& gens, std::span<const Element> message, NodeId id) {
  const auto& p = gens.params();
  check_message(p, message);
  auto raw = to_symbols(message);
  std::vector<Symbol> out(p.alpha);
  encode_node_raw(gens, raw, id, out);
  return NodeContent{id, p.role(id), to_elements(p.field, out)};
}

std::vector<NodeContent> encode(const GeneratorSet& gens, std::span<const Element> message) {
  const auto& p = gens.params();
  check_message(p, message);
  std::vector<NodeContent> nodes;
  nodes.reserve(p.n);
  for (std::size_t m = 1; m <= p.n; ++m) nodes.push_back(encode_node(gens, message, static_cast<NodeId>(m)));
  return nodes;
}

Decoder::Decoder(const GeneratorSet& gens, std::span<const NodeId> node_ids)
    : ids_(node_ids.begin(), node_ids.end()),
      alpha_(gens.params().alpha),
      inverse_(gens.field(), 0, 0) {
  const auto& p = gens.params();
  if (ids_.size() != p.k) {
    throw InvalidParameterError("decoder needs exactly k = " + std::to_string(p.k) + " nodes");
  }
  std::set<NodeId> unique(ids_.begin(), ids_.end());
  if (unique.size() != ids_.size()) throw InvalidParameterError("duplicate node ids");
  std::vector<Matrix> parts;
  for (NodeId id : ids_) parts.push_back(gens.generator(id));
  try {
    inverse_ = mat_inverse(Matrix::hstack(parts));
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError("generator system for the contacted nodes is singular; "
                              "the generator set is malformed");
  }
}

void Decoder::decode_raw(std::span<const Symbol> stacked, std::span<Symbol> message) const {
  multiply_row(inverse_, stacked, message);
}

std::vector<Element> Decoder::decode(std::span<const NodeContent> nodes) const {
  const PrimeField& f = inverse_.field();
  std::vector<Symbol> stacked;
  stacked.reserve(ids_.size() * alpha_);
  for (NodeId id : ids_) {
    auto it = std::find_if(nodes.begin(), nodes.end(),
                           [id](const NodeContent& n) { return n.node_id == id; });
    if (it == nodes.end()) throw InvalidParameterError("node " + id_str(id) + " not supplied");
    if (it->symbols.size() != alpha_) throw InvalidParameterError("wrong node symbol count");
    for (const auto& s : it->symbols) stacked.push_back(s.value());
  }
  if (nodes.size() != ids_.size()) throw InvalidParameterError("unexpected extra nodes");
  std::vector<Symbol> message(inverse_.cols());
  decode_raw(stacked, message);
  return to_elements(f, message);
}

std::vector<Element> reconstruct(const GeneratorSet& gens, std::span<const NodeContent> nodes) {
  auto ids = checked_contact_set(gens.params(), nodes);
  return Decoder(gens, ids).decode(nodes);
}

std::vector<Element> reconstruct_systematic_first(const GeneratorSet& gens,
                                                  std::span<const NodeContent> nodes) {
  const auto& p = gens.params();
  const PrimeField& f = p.field;
  checked_contact_set(p, nodes);

  std::vector<Symbol> message(p.B, 0);
  std::vector<bool> known(p.k, false);
  std::vector<const NodeContent*> parity;
  for (const auto& node : nodes) {
    if (p.is_systematic(node.node_id)) {
      std::size_t block = static_cast<std::size_t>(node.node_id) - 1;
      for (std::size_t t = 0; t < p.alpha; ++t) message[block * p.alpha + t] = node.symbols[t].value();
      known[block] = true;
    } else {
      parity.push_back(&node);
    }
  }
  if (parity.empty()) return to_elements(f, message);

  std::vector<std::size_t> unknown;
  for (std::size_t i = 0; i < p.k; ++i)
    if (!known[i]) unknown.push_back(i);

  // Unknown blocks times the stacked parity blocks equals the residual.
  const std::size_t dim = unknown.size() * p.alpha;
  Matrix system(f, dim, dim);
  std::vector<Element> residual;
  residual.reserve(dim);
  for (std::size_t pc = 0; pc < parity.size(); ++pc) {
    const Matrix& g = gens.generator(parity[pc]->node_id);
    for (std::size_t j = 0; j < p.alpha; ++j) {
      Symbol r = parity[pc]->symbols[j].value();
      for (std::size_t i = 0; i < p.k; ++i) {
        if (!known[i]) continue;
        for (std::size_t t = 0; t < p.alpha; ++t) {
          r = f.sub(r, f.mul(message[i * p.alpha + t], g.raw(i * p.alpha + t, j)));
        }
      }
      residual.emplace_back(r, f);
      for (std::size_t ub = 0; ub < unknown.size(); ++ub) {
        for (std::size_t t = 0; t < p.alpha; ++t) {
          system.raw(pc * p.alpha + j, ub * p.alpha + t) = g.raw(unknown[ub] * p.alpha + t, j);
        }
      }
    }
  }
  auto solved = mat_solve(system, residual);
  for (std::size_t ub = 0; ub < unknown.size(); ++ub)
    for (std::size_t t = 0; t < p.alpha; ++t)
      message[unknown[ub] * p.alpha + t] = solved[ub * p.alpha + t].value();
  return to_elements(f, message);
}

std::map<NodeId, std::size_t> repair_plan(const CodeParams& params, NodeId failed) {
  params.require_node(failed);
  if (!params.is_systematic(failed)) {
    throw InvalidParameterError("node " + id_str(failed) +
                                " is a parity node; use repair_parity_fallback");
  }
  std::map<NodeId, std::size_t> plan;
  for (std::size_t m = 1; m <= params.n; ++m) {
    if (static_cast<NodeId>(m) != failed) plan[static_cast<NodeId>(m)] = static_cast<std::size_t>(failed);
  }
  return plan;
}

std::vector<RepairDownload> gather_repair_downloads(const CodeParams& params,
                                                    std::span<const NodeContent> nodes,
                                                    NodeId failed) {
  std::vector<RepairDownload> downloads;
  for (const auto& [source, index] : repair_plan(params, failed)) {
    auto it = std::find_if(nodes.begin(), nodes.end(),
                           [source](const NodeContent& n) { return n.node_id == source; });
    if (it == nodes.end()) throw InvalidParameterError("helper node " + id_str(source) + " missing");
    check_node_symbols(params, *it);
    downloads.push_back(RepairDownload{source, index, it->symbols[index - 1]});
  }
  return downloads;
}

SystematicRepairer::SystematicRepairer(const GeneratorSet& gens)
    : gens_(&gens),
      solve_matrix_(mat_inverse(gens.psi().transpose().scaled(gens.params().epsilon)).transpose()) {}

RepairResult SystematicRepairer::repair(NodeId failed,
                                        std::span<const RepairDownload> downloads) const {
  const auto& p = gens_->params();
  const PrimeField& f = p.field;
  const auto plan = repair_plan(p, failed);
  if (downloads.size() != plan.size()) {
    throw InvalidParameterError("repair of node " + id_str(failed) + " needs " +
                                std::to_string(plan.size()) + " downloads, got " +
                                std::to_string(downloads.size()));
  }
  std::map<NodeId, Symbol> value_of;
  for (const auto& dl : downloads) {
    auto it = plan.find(dl.source_id);
    if (it == plan.end()) {
      throw InvalidParameterError("download from node " + id_str(dl.source_id) +
                                  " is not part of the repair plan");
    }
    if (dl.symbol_index != it->second) {
      throw InvalidParameterError("node " + id_str(dl.source_id) + " passed symbol " +
                                  std::to_string(dl.symbol_index) + ", plan asks for " +
                                  std::to_string(it->second));
    }
    if (dl.value.modulus() != f.modulus()) throw FieldMismatchError("download from another field");
    if (!value_of.emplace(dl.source_id, dl.value.value()).second) {
      throw InvalidParameterError("duplicate download from node " + id_str(dl.source_id));
    }
  }

  std::vector<Symbol> residual(p.n - p.k);
  for (std::size_t m = p.k + 1; m <= p.n; ++m) {
    const std::size_t col = m - p.k - 1;
    Symbol r = value_of.at(static_cast<NodeId>(m));
    for (std::size_t i = 1; i <= p.k; ++i) {
      if (static_cast<NodeId>(i) == failed) continue;
      r = f.sub(r, f.mul(gens_->psi().raw(i - 1, col), value_of.at(static_cast<NodeId>(i))));
    }
    residual[col] = r;
  }
  std::vector<Symbol> lost(p.alpha);
  multiply_row(solve_matrix_, residual, lost);
  return RepairResult{NodeContent{failed, NodeRole::systematic, to_elements(f, lost)},
                      downloads.size(), true};
}

RepairResult repair_systematic(const GeneratorSet& gens, NodeId failed,
                               std::span<const RepairDownload> downloads) {
  return SystematicRepairer(gens).repair(failed, downloads);
}

RepairResult repair_parity_fallback(const GeneratorSet& gens, NodeId failed,
                                    std::span<const NodeContent> survivors) {
  const auto& p = gens.params();
  p.require_node(failed);
  for (const auto& s : survivors) {
    if (s.node_id == failed) throw InvalidParameterError("failed node listed as a survivor");
  }
  auto message = reconstruct(gens, survivors);
  return RepairResult{encode_node(gens, message, failed), p.k * p.alpha, false};
}

Matrix repair_download_kernels(const GeneratorSet& gens, NodeId failed) {
  const auto& p = gens.params();
  std::vector<Matrix> columns;
  for (const auto& [source, index] : repair_plan(p, failed)) {
    columns.push_back(gens.generator(source).column(index - 1));
  }
  return Matrix::hstack(columns);
}

std::map<std::size_t, std::size_t> interference_block_ranks(const GeneratorSet& gens,
                                                            NodeId failed) {
  const auto& p = gens.params();
  Matrix kernels = repair_download_kernels(gens, failed);
  std::map<std::size_t, std::size_t> ranks;
  for (std::size_t i = 1; i <= p.k; ++i) {
    if (static_cast<NodeId>(i) == failed) continue;
    ranks[i] = mat_rank(kernels.block((i - 1) * p.alpha, 0, p.alpha, kernels.cols()));
  }
  return ranks;
}

}  // namespace iamsr
