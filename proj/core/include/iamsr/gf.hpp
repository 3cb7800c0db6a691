#pragma once

// Prime-field arithmetic GF(q), q < 2^16.

#include <compare>
#include <cstdint>
#include <ostream>

#include "iamsr/error.hpp"

namespace iamsr {

using Symbol = std::uint16_t;

class Element;

/// GF(q) for a prime q in [2, 65536). Cheap to copy; two fields compare
/// equal iff their moduli do.
class PrimeField {
 public:
  static constexpr std::uint32_t kMaxModulus = 1u << 16;

  /// Throws InvalidParameterError unless q is a prime below 2^16.
  explicit PrimeField(std::uint32_t q);

  std::uint32_t modulus() const noexcept { return q_; }

  Element element(std::int64_t value) const;
  Element zero() const;
  Element one() const;

  // Raw-residue kernels. Inputs must already be canonical (< q).
  Symbol add(Symbol a, Symbol b) const noexcept {
    std::uint32_t s = std::uint32_t{a} + b;
    return static_cast<Symbol>(s >= q_ ? s - q_ : s);
  }
  Symbol sub(Symbol a, Symbol b) const noexcept {
    return static_cast<Symbol>(a >= b ? a - b : a + q_ - b);
  }
  Symbol neg(Symbol a) const noexcept { return static_cast<Symbol>(a == 0 ? 0 : q_ - a); }
  Symbol mul(Symbol a, Symbol b) const noexcept {
    return static_cast<Symbol>((std::uint32_t{a} * b) % q_);
  }
  /// Multiplicative inverse by extended Euclid; throws on zero.
  Symbol inv(Symbol a) const;
  Symbol reduce(std::int64_t v) const noexcept;

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  friend class Element;
  struct Trusted {};
  PrimeField(std::uint32_t q, Trusted) noexcept : q_(q) {}

  std::uint32_t q_;
};

bool is_prime(std::uint32_t n) noexcept;

/// Smallest prime >= n.
std::uint32_t next_prime(std::uint32_t n);

/// A canonical residue together with the modulus of its field.
class Element {
 public:
  /// `value` is reduced mod q.
  Element(Symbol value, PrimeField field) noexcept
      : value_(static_cast<Symbol>(value % field.modulus())), q_(field.modulus()) {}

  Symbol value() const noexcept { return value_; }
  PrimeField field() const noexcept { return PrimeField(q_, PrimeField::Trusted{}); }
  std::uint32_t modulus() const noexcept { return q_; }
  bool is_zero() const noexcept { return value_ == 0; }

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator*(const Element& o) const;
  Element operator/(const Element& o) const;
  Element operator-() const noexcept;
  Element& operator+=(const Element& o) { return *this = *this + o; }
  Element& operator-=(const Element& o) { return *this = *this - o; }
  Element& operator*=(const Element& o) { return *this = *this * o; }

  Element inverse() const;
  Element pow(std::uint64_t e) const;

  friend bool operator==(const Element&, const Element&) = default;

 private:
  Element(Symbol value, std::uint32_t q) noexcept : value_(value), q_(q) {}
  void check_same_field(const Element& o) const;

  Symbol value_;
  std::uint32_t q_;
};

Element fe_add(const Element& a, const Element& b);
Element fe_mul(const Element& a, const Element& b);
Element fe_inv(const Element& a);

std::ostream& operator<<(std::ostream& os, const Element& e);

}  // namespace iamsr
