#include "overture/field.hpp"

#include "overture/error.hpp"

namespace ovt {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

FieldElem::FieldElem(std::int64_t value, std::uint32_t modulus) : modulus_(modulus) {
  if (!is_prime(modulus)) {
    throw UsageError("field modulus " + std::to_string(modulus) + " is not prime");
  }
  const auto p = static_cast<std::int64_t>(modulus);
  value_ = static_cast<std::uint32_t>(((value % p) + p) % p);
}

namespace {

void require_same_field(const FieldElem& a, const FieldElem& b) {
  if (a.modulus() != b.modulus()) {
    throw UsageError("field modulus mismatch: F" + std::to_string(a.modulus()) + " vs F" +
                     std::to_string(b.modulus()));
  }
}

void require_f2(const FieldElem& a, const char* op) {
  if (a.modulus() != 2) {
    throw UnsupportedOperation(std::string("boolean '") + op + "' requires F2, got F" +
                               std::to_string(a.modulus()));
  }
}

}  // namespace

FieldElem add(const FieldElem& a, const FieldElem& b) {
  require_same_field(a, b);
  return {static_cast<std::int64_t>(a.value()) + b.value(), a.modulus()};
}

FieldElem sub(const FieldElem& a, const FieldElem& b) {
  require_same_field(a, b);
  return {static_cast<std::int64_t>(a.value()) - b.value(), a.modulus()};
}

FieldElem mul(const FieldElem& a, const FieldElem& b) {
  require_same_field(a, b);
  const std::uint64_t product = static_cast<std::uint64_t>(a.value()) * b.value();
  return {static_cast<std::int64_t>(product % a.modulus()), a.modulus()};
}

FieldElem logical_and(const FieldElem& a, const FieldElem& b) {
  require_f2(a, "and");
  require_same_field(a, b);
  return mul(a, b);
}

FieldElem logical_xor(const FieldElem& a, const FieldElem& b) {
  require_f2(a, "xor");
  require_same_field(a, b);
  return add(a, b);
}

FieldElem logical_not(const FieldElem& a) {
  require_f2(a, "not");
  return add(a, FieldElem::one(2));
}

FieldElem logical_or(const FieldElem& a, const FieldElem& b) {
  require_f2(a, "or");
  require_same_field(a, b);
  return logical_not(logical_and(logical_not(a), logical_not(b)));
}

}  // namespace ovt
