#include "iamsr/gf.hpp"

#include <string>

namespace iamsr {

bool is_prime(std::uint32_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint32_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint32_t next_prime(std::uint32_t n) {
  if (n <= 2) return 2;
  for (std::uint32_t c = n; c < PrimeField::kMaxModulus; ++c) {
    if (is_prime(c)) return c;
  }
  throw InvalidParameterError("no prime below 2^16 that is >= " + std::to_string(n));
}

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
  if (q >= kMaxModulus) {
    throw InvalidParameterError("field modulus " + std::to_string(q) + " must be < 65536");
  }
  if (!is_prime(q)) {
    throw InvalidParameterError("field modulus " + std::to_string(q) + " is not prime");
  }
}

Element PrimeField::element(std::int64_t value) const { return Element(reduce(value), *this); }
Element PrimeField::zero() const { return Element(0, *this); }
Element PrimeField::one() const { return Element(static_cast<Symbol>(1 % q_), *this); }

Symbol PrimeField::reduce(std::int64_t v) const noexcept {
  std::int64_t r = v % static_cast<std::int64_t>(q_);
  if (r < 0) r += q_;
  return static_cast<Symbol>(r);
}

Symbol PrimeField::inv(Symbol a) const {
  if (a == 0) throw DivisionByZeroError("inverse of zero in GF(" + std::to_string(q_) + ")");
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = q_, new_r = a;
  while (new_r != 0) {
    std::int64_t quot = r / new_r;
    std::int64_t tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  return reduce(t);
}

void Element::check_same_field(const Element& o) const {
  if (q_ != o.q_) {
    throw FieldMismatchError("operands live in GF(" + std::to_string(q_) + ") and GF(" +
                             std::to_string(o.q_) + ")");
  }
}

Element Element::operator+(const Element& o) const {
  check_same_field(o);
  std::uint32_t s = std::uint32_t{value_} + o.value_;
  return Element(static_cast<Symbol>(s >= q_ ? s - q_ : s), q_);
}

Element Element::operator-(const Element& o) const {
  check_same_field(o);
  return Element(static_cast<Symbol>(value_ >= o.value_ ? value_ - o.value_ : value_ + q_ - o.value_), q_);
}

Element Element::operator*(const Element& o) const {
  check_same_field(o);
  return Element(static_cast<Symbol>((std::uint32_t{value_} * o.value_) % q_), q_);
}

Element Element::operator/(const Element& o) const { return *this * o.inverse(); }

Element Element::operator-() const noexcept {
  Element r = *this;
  r.value_ = static_cast<Symbol>(value_ == 0 ? 0 : q_ - value_);
  return r;
}

Element Element::inverse() const {
  PrimeField f = field();
  return Element(f.inv(value_), f);
}

Element Element::pow(std::uint64_t e) const {
  PrimeField f = field();
  Symbol base = value_, acc = f.one().value();
  while (e != 0) {
    if (e & 1u) acc = f.mul(acc, base);
    base = f.mul(base, base);
    e >>= 1;
  }
  return Element(acc, f);
}

Element fe_add(const Element& a, const Element& b) { return a + b; }
Element fe_mul(const Element& a, const Element& b) { return a * b; }
Element fe_inv(const Element& a) { return a.inverse(); }

std::ostream& operator<<(std::ostream& os, const Element& e) { return os << e.value(); }

}  // namespace iamsr
