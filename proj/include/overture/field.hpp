#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace ovt {

bool is_prime(std::uint32_t n);

// An element of the prime field F_p. Values are always reduced into [0, p).
class FieldElem {
 public:
  FieldElem(std::int64_t value, std::uint32_t modulus);

  static FieldElem zero(std::uint32_t modulus) { return {0, modulus}; }
  static FieldElem one(std::uint32_t modulus) { return {1, modulus}; }
  static FieldElem bit(bool b) { return {b ? 1 : 0, 2}; }

  std::uint32_t value() const { return value_; }
  std::uint32_t modulus() const { return modulus_; }
  bool is_one() const { return value_ == 1; }

  friend bool operator==(const FieldElem&, const FieldElem&) = default;
  friend auto operator<=>(const FieldElem&, const FieldElem&) = default;

  std::string to_string() const { return std::to_string(value_); }

 private:
  std::uint32_t value_;
  std::uint32_t modulus_;
};

FieldElem add(const FieldElem& a, const FieldElem& b);
FieldElem sub(const FieldElem& a, const FieldElem& b);
FieldElem mul(const FieldElem& a, const FieldElem& b);

// Boolean connectives. Only defined over F2; any other modulus throws
// UnsupportedOperation.
FieldElem logical_and(const FieldElem& a, const FieldElem& b);
FieldElem logical_xor(const FieldElem& a, const FieldElem& b);
FieldElem logical_or(const FieldElem& a, const FieldElem& b);
FieldElem logical_not(const FieldElem& a);

}  // namespace ovt
