#pragma once

// Security layer against a passive (l1, l2) eavesdropper: capacity counts,
// coset pre-coding with uniform random symbols, eavesdropper simulation and
// two independent perfect-secrecy verifiers.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "iamsr/code.hpp"

namespace iamsr::secrecy {

/// (k - l1 - l2)(alpha - l2). Requires l1 + l2 < k.
std::size_t secrecy_capacity(const CodeParams& params, std::size_t l1, std::size_t l2);

/// R = B - B^(s), cross-checked against (l1 + l2) alpha + (k - l1 - l2) l2.
std::size_t random_symbol_count(const CodeParams& params, std::size_t l1, std::size_t l2);

/// Most independent symbols an (l1, l2) eavesdropper can see:
/// l1 alpha + (n - l2) beta l2 - beta l1 l2.
std::size_t observed_symbol_count(const CodeParams& params, std::size_t l1, std::size_t l2);

/// alpha k - observed_symbol_count == secrecy_capacity.
bool capacity_identity_check(const CodeParams& params, std::size_t l1, std::size_t l2);

struct UpperBounds {
  std::size_t general;  // sum_{i=l}^{k-1} min(alpha, (d - i) beta)
  std::size_t msr;      // (k - l) alpha
};

UpperBounds upper_bounds(const CodeParams& params, std::size_t l);

/// Storage taps e1 and repair-download taps e2.
struct EveModel {
  std::set<NodeId> e1;
  std::set<NodeId> e2;

  std::size_t l1() const noexcept { return e1.size(); }
  std::size_t l2() const noexcept { return e2.size(); }

  /// e1 within 1..n, e2 within the systematic ids, disjoint, l1 + l2 < k.
  void validate(const CodeParams& params) const;

  std::string describe() const;
};

/// Every tap set with |e1| = l1 (any node) and |e2| = l2 (systematic nodes
/// outside e1).
std::vector<EveModel> enumerate_tap_sets(const CodeParams& params, std::size_t l1, std::size_t l2);

/// Uniform symbols over GF(q). Seeded mode is reproducible; entropy mode
/// draws every symbol from std::random_device.
class RandomSource {
 public:
  static RandomSource seeded(std::uint64_t seed);
  static RandomSource entropy();

  Symbol uniform(const PrimeField& field);
  std::vector<Element> uniform_vector(const PrimeField& field, std::size_t count);

 private:
  using Engine = std::variant<std::mt19937_64, std::unique_ptr<std::random_device>>;
  explicit RandomSource(Engine engine) : engine_(std::move(engine)) {}

  Engine engine_;
};

/// The secret of B^(s) symbols padded with R = B - B^(s) random symbols.
/// combined = (rand, secret).
struct SecureMessage {
  std::vector<Element> secret;
  std::vector<Element> rand;
  std::vector<Element> combined;
};

/// A code plus a coset pre-coder. The combined message (r, s) is mapped to
/// the code message u = (r, r * pad + s), so every secret is masked by a
/// fixed linear function of the random symbols. A zero pad leaves the
/// secret in the clear in the last B^(s) positions.
class SecureScheme {
 public:
  /// Searches (seeded, deterministic) for a pad that leaks nothing to any
  /// tap set of sizes (l1, l2). Throws InvalidParameterError if none is found
  /// within max_attempts; a larger field makes success more likely.
  static SecureScheme design(const GeneratorSet& gens, std::size_t l1, std::size_t l2,
                             std::uint64_t seed = kDefaultDesignSeed,
                             std::size_t max_attempts = 20000);
  /// Explicit pad of shape R x B^(s).
  static SecureScheme with_pad(const GeneratorSet& gens, std::size_t l1, std::size_t l2,
                               Matrix pad);
  /// Zero pad: u = (r, s) verbatim.
  static SecureScheme plain_layout(const GeneratorSet& gens, std::size_t l1, std::size_t l2);
  /// No random symbols at all (R = 0, the whole message is secret).
  static SecureScheme unpadded(const GeneratorSet& gens);

  static constexpr std::uint64_t kDefaultDesignSeed = 0x1a3e5c7b9d2f4068ULL;

  const GeneratorSet& gens() const noexcept { return gens_; }
  const CodeParams& params() const noexcept { return gens_.params(); }
  std::size_t l1() const noexcept { return l1_; }
  std::size_t l2() const noexcept { return l2_; }
  std::size_t random_count() const noexcept { return random_count_; }
  std::size_t secret_count() const noexcept { return params().B - random_count_; }
  const Matrix& pad() const noexcept { return pad_; }

  /// u = (r, r * pad + s).
  std::vector<Symbol> precode(std::span<const Symbol> rand, std::span<const Symbol> secret) const;
  /// Inverse of precode; returns the secret part.
  std::vector<Symbol> extract_secret(std::span<const Symbol> code_message) const;
  /// B x B matrix T with u = (r, s) T.
  Matrix precode_matrix() const;

 private:
  SecureScheme(GeneratorSet gens, std::size_t l1, std::size_t l2, std::size_t random_count,
               Matrix pad);

  GeneratorSet gens_;
  std::size_t l1_;
  std::size_t l2_;
  std::size_t random_count_;
  Matrix pad_;
};

struct SecureEncoding {
  std::vector<NodeContent> nodes;
  SecureMessage message;
};

/// Draws R fresh random symbols, pre-codes and encodes.
SecureEncoding secure_encode(const SecureScheme& scheme, std::span<const Element> secret,
                             RandomSource& randomness);
/// Same with caller-fixed random symbols.
SecureEncoding secure_encode_with(const SecureScheme& scheme, std::span<const Element> secret,
                                  std::span<const Element> rand);

/// Reconstructs from any k nodes and returns the B^(s) secret symbols.
std::vector<Element> secure_decode(const SecureScheme& scheme, std::span<const NodeContent> nodes);

/// What the eavesdropper records: the alpha symbols of each e1 node (ascending
/// id), then for each l in e2 (ascending) the d repair downloads of node l in
/// ascending source order. `nodes` must hold every node the taps touch.
std::vector<Element> eavesdrop(const GeneratorSet& gens, const EveModel& eve,
                               std::span<const NodeContent> nodes);

/// B x (#observed) matrix of the global kernels of the observed symbols, in
/// the eavesdrop order: observation = u * kernels.
Matrix observation_kernels(const GeneratorSet& gens, const EveModel& eve);

/// Observed symbols as linear functionals of the combined message
/// (r, s): observation = H * (r, s)^T.
struct ObservationMatrix {
  Matrix H;
  std::size_t random_count;
  std::size_t raw_rows;
  std::size_t distinct_rows;     // after removing exact duplicate functionals
  std::size_t duplicate_rows;    // raw_rows - distinct_rows
  std::size_t independent_rows;  // rank(H)

  Matrix rand_block() const { return H.block(0, 0, H.rows(), random_count); }
  Matrix secret_block() const {
    return H.block(0, random_count, H.rows(), H.cols() - random_count);
  }
};

ObservationMatrix observation_matrix(const SecureScheme& scheme, const EveModel& eve);

struct SecrecyReport {
  std::size_t random_count;
  std::size_t rank_full;
  std::size_t rank_rand;
  bool step1;  // rank_rand == R: the secret plus the observations determine r
  bool step2;  // rank_full <= R: no more observed dimensions than random ones
  std::size_t leakage_dims;  // rank(H) - rank(H_r)
  bool perfect;              // leakage_dims == 0

  std::string to_string() const;
};

/// Perfect secrecy iff the secret block's column space lies inside the
/// random block's column space.
SecrecyReport verify_secrecy_rank(const SecureScheme& scheme, const EveModel& eve);

class StateSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

/// Definitional check: for every secret, enumerate all q^R random vectors
/// and compare the multisets of observation tuples. Throws
/// StateSpaceTooLarge when q^B exceeds max_states.
bool verify_secrecy_exhaustive(const SecureScheme& scheme, const EveModel& eve,
                               std::uint64_t max_states);

}  // namespace iamsr::secrecy
