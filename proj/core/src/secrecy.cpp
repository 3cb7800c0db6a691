#include "iamsr/secrecy.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "iamsr/subsets.hpp"

namespace iamsr::secrecy {

namespace {

void require_budget(const CodeParams& p, std::size_t l1, std::size_t l2) {
  if (l1 + l2 >= p.k) {
    throw InvalidParameterError("eavesdropper budget l1 + l2 = " + std::to_string(l1 + l2) +
                                " must be below k = " + std::to_string(p.k));
  }
}

std::vector<Symbol> raw_of(std::span<const Element> v) { return to_symbols(v); }

// Advances `digits` as a base-q counter; false once it wraps to zero.
bool next_counter(std::vector<Symbol>& digits, std::uint32_t q) {
  for (auto& d : digits) {
    if (++d < q) return true;
    d = 0;
  }
  return false;
}

std::uint64_t checked_pow(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t acc = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (acc > cap / base) return cap + 1;
    acc *= base;
  }
  return acc;
}

}  // namespace

std::size_t secrecy_capacity(const CodeParams& p, std::size_t l1, std::size_t l2) {
  require_budget(p, l1, l2);
  return (p.k - l1 - l2) * (p.alpha - l2);
}

std::size_t random_symbol_count(const CodeParams& p, std::size_t l1, std::size_t l2) {
  require_budget(p, l1, l2);
  const std::size_t by_difference = p.B - secrecy_capacity(p, l1, l2);
  const std::size_t by_formula = (l1 + l2) * p.alpha + (p.k - l1 - l2) * l2;
  if (by_difference != by_formula) {
    throw Error("random symbol count disagrees: B - B^(s) = " + std::to_string(by_difference) +
                ", closed form = " + std::to_string(by_formula));
  }
  return by_formula;
}

std::size_t observed_symbol_count(const CodeParams& p, std::size_t l1, std::size_t l2) {
  require_budget(p, l1, l2);
  return l1 * p.alpha + (p.n - l2) * p.beta * l2 - p.beta * l1 * l2;
}

bool capacity_identity_check(const CodeParams& p, std::size_t l1, std::size_t l2) {
  return p.alpha * p.k - observed_symbol_count(p, l1, l2) == secrecy_capacity(p, l1, l2);
}

UpperBounds upper_bounds(const CodeParams& p, std::size_t l) {
  if (l >= p.k) {
    throw InvalidParameterError("l = " + std::to_string(l) + " must be below k = " +
                                std::to_string(p.k));
  }
  UpperBounds b{0, (p.k - l) * p.alpha};
  for (std::size_t i = l; i < p.k; ++i) b.general += std::min(p.alpha, (p.d - i) * p.beta);
  return b;
}

void EveModel::validate(const CodeParams& p) const {
  for (NodeId id : e1) p.require_node(id);
  for (NodeId id : e2) {
    p.require_node(id);
    if (!p.is_systematic(id)) {
      throw InvalidParameterError("repair taps are only modelled on systematic nodes; node " +
                                  std::to_string(id) + " is parity");
    }
    if (e1.count(id) != 0) {
      throw InvalidParameterError("node " + std::to_string(id) + " appears in both e1 and e2");
    }
  }
  require_budget(p, l1(), l2());
}

std::string EveModel::describe() const {
  std::ostringstream os;
  auto list = [&os](const std::set<NodeId>& s) {
    os << '{';
    bool first = true;
    for (NodeId id : s) {
      os << (first ? "" : ",") << id;
      first = false;
    }
    os << '}';
  };
  os << "e1=";
  list(e1);
  os << " e2=";
  list(e2);
  return os.str();
}

std::vector<EveModel> enumerate_tap_sets(const CodeParams& p, std::size_t l1, std::size_t l2) {
  require_budget(p, l1, l2);
  std::vector<EveModel> out;
  for_each_subset(p.n, l1, [&](const std::vector<std::size_t>& a) {
    std::set<NodeId> e1;
    for (auto i : a) e1.insert(static_cast<NodeId>(i + 1));
    std::vector<NodeId> free_systematic;
    for (std::size_t i = 1; i <= p.k; ++i)
      if (!e1.count(static_cast<NodeId>(i))) free_systematic.push_back(static_cast<NodeId>(i));
    for_each_subset(free_systematic.size(), l2, [&](const std::vector<std::size_t>& b) {
      EveModel eve{e1, {}};
      for (auto j : b) eve.e2.insert(free_systematic[j]);
      out.push_back(std::move(eve));
      return true;
    });
    return true;
  });
  return out;
}

RandomSource RandomSource::seeded(std::uint64_t seed) {
  return RandomSource(Engine(std::in_place_type<std::mt19937_64>, seed));
}

RandomSource RandomSource::entropy() {
  return RandomSource(Engine(std::make_unique<std::random_device>()));
}

Symbol RandomSource::uniform(const PrimeField& field) {
  std::uniform_int_distribution<std::uint32_t> dist(0, field.modulus() - 1);
  return std::visit(
      [&dist](auto& e) -> Symbol {
        if constexpr (std::is_same_v<std::decay_t<decltype(e)>, std::mt19937_64>) {
          return static_cast<Symbol>(dist(e));
        } else {
          return static_cast<Symbol>(dist(*e));
        }
      },
      engine_);
}

std::vector<Element> RandomSource::uniform_vector(const PrimeField& field, std::size_t count) {
  std::vector<Element> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(uniform(field), field);
  return out;
}

SecureScheme::SecureScheme(GeneratorSet gens, std::size_t l1, std::size_t l2,
                           std::size_t random_count, Matrix pad)
    : gens_(std::move(gens)), l1_(l1), l2_(l2), random_count_(random_count), pad_(std::move(pad)) {
  const std::size_t secret = gens_.params().B - random_count_;
  if (pad_.rows() != random_count_ || pad_.cols() != secret) {
    throw ShapeError("pad must be " + std::to_string(random_count_) + "x" +
                     std::to_string(secret));
  }
  if (!(pad_.field() == gens_.field())) throw FieldMismatchError("pad over a different field");
}

SecureScheme SecureScheme::with_pad(const GeneratorSet& gens, std::size_t l1, std::size_t l2,
                                    Matrix pad) {
  return SecureScheme(gens, l1, l2, random_symbol_count(gens.params(), l1, l2), std::move(pad));
}

SecureScheme SecureScheme::plain_layout(const GeneratorSet& gens, std::size_t l1, std::size_t l2) {
  const auto& p = gens.params();
  const std::size_t r = random_symbol_count(p, l1, l2);
  return SecureScheme(gens, l1, l2, r, Matrix(p.field, r, p.B - r));
}

SecureScheme SecureScheme::unpadded(const GeneratorSet& gens) {
  const auto& p = gens.params();
  return SecureScheme(gens, 0, 0, 0, Matrix(p.field, 0, p.B));
}

SecureScheme SecureScheme::design(const GeneratorSet& gens, std::size_t l1, std::size_t l2,
                                  std::uint64_t seed, std::size_t max_attempts) {
  const auto& p = gens.params();
  const PrimeField& f = p.field;
  const std::size_t r = random_symbol_count(p, l1, l2);
  const std::size_t s = p.B - r;
  if (r == 0) return SecureScheme(gens, l1, l2, 0, Matrix(f, 0, s));

  struct Tap {
    Matrix rand_part;    // observed functionals restricted to r
    Matrix secret_part;  // ... and to the masked positions
    std::size_t rank;
  };
  std::vector<Tap> taps;
  for (const auto& eve : enumerate_tap_sets(p, l1, l2)) {
    Matrix k = observation_kernels(gens, eve).transpose();
    std::size_t rank = mat_rank(k);
    if (rank > r) {
      throw InvalidParameterError("tap set " + eve.describe() + " observes " +
                                  std::to_string(rank) + " dimensions, more than R = " +
                                  std::to_string(r));
    }
    taps.push_back(Tap{k.block(0, 0, k.rows(), r), k.block(0, r, k.rows(), s), rank});
  }

  auto rng = RandomSource::seeded(seed);
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    Matrix pad(f, r, s);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < s; ++j) pad.raw(i, j) = rng.uniform(f);
    const Matrix pad_t = pad.transpose();
    bool ok = true;
    for (std::size_t t = 0; t < taps.size(); ++t) {
      const Tap& tap = taps[t];
      if (mat_rank(tap.rand_part + tap.secret_part * pad_t) != tap.rank) {
        // Check the rejecting tap set first next time.
        std::rotate(taps.begin(), taps.begin() + static_cast<std::ptrdiff_t>(t),
                    taps.begin() + static_cast<std::ptrdiff_t>(t) + 1);
        ok = false;
        break;
      }
    }
    if (ok) return SecureScheme(gens, l1, l2, r, std::move(pad));
  }
  throw InvalidParameterError("no leak-free pad found for (l1, l2) = (" + std::to_string(l1) +
                              ", " + std::to_string(l2) + ") over GF(" +
                              std::to_string(f.modulus()) + ") in " +
                              std::to_string(max_attempts) + " attempts; use a larger field");
}

std::vector<Symbol> SecureScheme::precode(std::span<const Symbol> rand,
                                          std::span<const Symbol> secret) const {
  if (rand.size() != random_count_ || secret.size() != secret_count()) {
    throw InvalidParameterError("pre-coder expects " + std::to_string(random_count_) +
                                " random and " + std::to_string(secret_count()) +
                                " secret symbols");
  }
  std::vector<Symbol> u(rand.begin(), rand.end());
  std::vector<Symbol> mask(secret_count(), 0);
  if (random_count_ != 0) multiply_row(pad_, rand, mask);
  const PrimeField& f = params().field;
  for (std::size_t j = 0; j < secret.size(); ++j) u.push_back(f.add(mask[j], secret[j]));
  return u;
}

std::vector<Symbol> SecureScheme::extract_secret(std::span<const Symbol> u) const {
  if (u.size() != params().B) throw InvalidParameterError("code message must hold B symbols");
  std::vector<Symbol> mask(secret_count(), 0);
  if (random_count_ != 0) multiply_row(pad_, u.first(random_count_), mask);
  const PrimeField& f = params().field;
  std::vector<Symbol> secret(secret_count());
  for (std::size_t j = 0; j < secret.size(); ++j) secret[j] = f.sub(u[random_count_ + j], mask[j]);
  return secret;
}

Matrix SecureScheme::precode_matrix() const {
  const std::size_t b = params().B;
  Matrix t = Matrix::identity(params().field, b);
  for (std::size_t i = 0; i < random_count_; ++i)
    for (std::size_t j = 0; j < secret_count(); ++j) t.raw(i, random_count_ + j) = pad_.raw(i, j);
  return t;
}

SecureEncoding secure_encode_with(const SecureScheme& scheme, std::span<const Element> secret,
                                  std::span<const Element> rand) {
  if (secret.size() != scheme.secret_count()) {
    throw InvalidParameterError("secret has " + std::to_string(secret.size()) +
                                " symbols, capacity is " + std::to_string(scheme.secret_count()));
  }
  if (rand.size() != scheme.random_count()) {
    throw InvalidParameterError("expected " + std::to_string(scheme.random_count()) +
                                " random symbols");
  }
  const PrimeField& f = scheme.params().field;
  auto u = to_elements(f, scheme.precode(raw_of(rand), raw_of(secret)));
  SecureMessage msg{{secret.begin(), secret.end()}, {rand.begin(), rand.end()}, {}};
  msg.combined = msg.rand;
  msg.combined.insert(msg.combined.end(), msg.secret.begin(), msg.secret.end());
  return SecureEncoding{encode(scheme.gens(), u), std::move(msg)};
}

SecureEncoding secure_encode(const SecureScheme& scheme, std::span<const Element> secret,
                             RandomSource& randomness) {
  if (secret.size() != scheme.secret_count()) {
    throw InvalidParameterError("secret has " + std::to_string(secret.size()) +
                                " symbols, capacity is " + std::to_string(scheme.secret_count()));
  }
  auto rand = randomness.uniform_vector(scheme.params().field, scheme.random_count());
  return secure_encode_with(scheme, secret, rand);
}

std::vector<Element> secure_decode(const SecureScheme& scheme, std::span<const NodeContent> nodes) {
  auto u = reconstruct(scheme.gens(), nodes);
  return to_elements(scheme.params().field, scheme.extract_secret(raw_of(u)));
}

std::vector<Element> eavesdrop(const GeneratorSet& gens, const EveModel& eve,
                               std::span<const NodeContent> nodes) {
  const auto& p = gens.params();
  eve.validate(p);
  auto find = [&](NodeId id) -> const NodeContent& {
    auto it = std::find_if(nodes.begin(), nodes.end(),
                           [id](const NodeContent& n) { return n.node_id == id; });
    if (it == nodes.end()) throw InvalidParameterError("tapped node " + std::to_string(id) + " missing");
    return *it;
  };
  std::vector<Element> seen;
  for (NodeId id : eve.e1) {
    const auto& node = find(id);
    seen.insert(seen.end(), node.symbols.begin(), node.symbols.end());
  }
  for (NodeId failed : eve.e2) {
    std::vector<NodeContent> helpers;
    for (const auto& [source, index] : repair_plan(p, failed)) helpers.push_back(find(source));
    for (const auto& dl : gather_repair_downloads(p, helpers, failed)) seen.push_back(dl.value);
  }
  return seen;
}

Matrix observation_kernels(const GeneratorSet& gens, const EveModel& eve) {
  const auto& p = gens.params();
  eve.validate(p);
  std::vector<Matrix> parts;
  for (NodeId id : eve.e1) parts.push_back(gens.generator(id));
  for (NodeId failed : eve.e2) parts.push_back(repair_download_kernels(gens, failed));
  if (parts.empty()) return Matrix(p.field, p.B, 0);
  return Matrix::hstack(parts);
}

ObservationMatrix observation_matrix(const SecureScheme& scheme, const EveModel& eve) {
  // observation = u * K = (r, s) * T * K, so H = (T K)^T.
  Matrix kernels = observation_kernels(scheme.gens(), eve);
  Matrix h = (scheme.precode_matrix() * kernels).transpose();
  std::set<std::vector<Symbol>> distinct;
  for (std::size_t r = 0; r < h.rows(); ++r) {
    auto row = h.row(r);
    distinct.emplace(row.begin(), row.end());
  }
  const std::size_t rank = mat_rank(h);
  const std::size_t raw = h.rows();
  return ObservationMatrix{std::move(h), scheme.random_count(), raw, distinct.size(),
                           raw - distinct.size(), rank};
}

std::string SecrecyReport::to_string() const {
  std::ostringstream os;
  os << "R: " << random_count << "\n"
     << "rank_full: " << rank_full << "\n"
     << "rank_rand: " << rank_rand << "\n"
     << "step1: " << (step1 ? "true" : "false") << "\n"
     << "step2: " << (step2 ? "true" : "false") << "\n"
     << "leakage_dims: " << leakage_dims << "\n"
     << "perfect: " << (perfect ? "true" : "false") << "\n";
  return os.str();
}

SecrecyReport verify_secrecy_rank(const SecureScheme& scheme, const EveModel& eve) {
  auto obs = observation_matrix(scheme, eve);
  const std::size_t r = scheme.random_count();
  const std::size_t rank_full = obs.independent_rows;
  const std::size_t rank_rand = r == 0 ? 0 : mat_rank(obs.rand_block());
  SecrecyReport rep{};
  rep.random_count = r;
  rep.rank_full = rank_full;
  rep.rank_rand = rank_rand;
  rep.step1 = rank_rand == r;
  rep.step2 = rank_full <= r;
  rep.leakage_dims = rank_full - rank_rand;
  rep.perfect = rep.leakage_dims == 0;
  return rep;
}

bool verify_secrecy_exhaustive(const SecureScheme& scheme, const EveModel& eve,
                               std::uint64_t max_states) {
  const auto& p = scheme.params();
  eve.validate(p);
  const std::uint32_t q = p.field.modulus();
  const std::uint64_t states = checked_pow(q, p.B, max_states);
  if (states > max_states) {
    throw StateSpaceTooLarge("enumeration needs q^B = " + std::to_string(q) + "^" +
                             std::to_string(p.B) + " states, above the limit of " +
                             std::to_string(max_states));
  }
  using Histogram = std::map<std::vector<Symbol>, std::uint64_t>;
  std::vector<Symbol> secret(scheme.secret_count(), 0);
  std::optional<Histogram> reference;
  do {
    Histogram hist;
    std::vector<Symbol> rand(scheme.random_count(), 0);
    do {
      auto enc = secure_encode_with(scheme, to_elements(p.field, secret), to_elements(p.field, rand));
      ++hist[raw_of(eavesdrop(scheme.gens(), eve, enc.nodes))];
    } while (next_counter(rand, q));
    if (!reference) {
      reference = std::move(hist);
    } else if (hist != *reference) {
      return false;
    }
  } while (next_counter(secret, q));
  return true;
}

}  // namespace iamsr::secrecy
