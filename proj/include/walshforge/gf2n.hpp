#pragma once

// Exact arithmetic in GF(2^n), n <= 20, over a polynomial basis.
//
// Elements are encoded as little-endian coefficient bits packed into one
// uint32_t: bit i is the coefficient of x^i. Element bits double as the
// truth-table index of Boolean functions on the field.

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "walshforge/error.hpp"

namespace walshforge {

class FiniteField;
class FieldElement;

/// Shared, immutable field context.
using Field = std::shared_ptr<const FiniteField>;

class FiniteField {
 public:
  static constexpr unsigned kMaxDegree = 20;
  /// Degrees up to this use log/antilog tables; above it, carry-less multiply.
  static constexpr unsigned kTableDegree = 16;

  /// Builds and validates a field. Without a modulus the canonical primitive
  /// polynomial for n is used (see canonical_modulus).
  static Field create(unsigned n, std::optional<std::uint32_t> modulus = std::nullopt);

  /// Lowest-weight primitive polynomial of degree n, lexicographically
  /// smallest among those of that weight. Bit pattern includes x^n.
  static std::uint32_t canonical_modulus(unsigned n);

  static bool is_irreducible(std::uint32_t modulus, unsigned n);

  unsigned degree() const noexcept { return n_; }
  std::uint32_t modulus() const noexcept { return modulus_; }
  std::uint32_t size() const noexcept { return std::uint32_t{1} << n_; }
  std::uint32_t group_order() const noexcept { return size() - 1; }
  bool has_tables() const noexcept { return !exp_.empty(); }

  // Raw bit-level arithmetic. Callers guarantee operands are < size().
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t sqr(std::uint32_t a) const noexcept { return mul(a, a); }
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t div(std::uint32_t a, std::uint32_t b) const { return mul(a, inv(b)); }
  /// Any integer exponent; nonzero bases reduce it modulo 2^n - 1.
  /// 0^0 = 1, 0^e = 0 for e > 0, 0^e for e < 0 throws DivisionByZero.
  std::uint32_t pow(std::uint32_t a, std::int64_t e) const;
  /// a^(2^k), k taken modulo n.
  std::uint32_t frobenius(std::uint32_t a, unsigned k) const noexcept;
  std::uint32_t alpha_pow(std::int64_t e) const noexcept;
  /// Discrete logarithm base alpha; a must be nonzero.
  std::uint32_t log(std::uint32_t a) const;

  /// Absolute trace Tr_n(a) in {0, 1}.
  unsigned abs_trace(std::uint32_t a) const noexcept {
    return static_cast<unsigned>(__builtin_parity(a & trace_mask_));
  }
  /// Relative trace Tr_m^n(a); m must divide n.
  std::uint32_t trace(std::uint32_t a, unsigned m) const;
  /// Trace from the subfield GF(2^from) down to GF(2^to), for a in GF(2^from).
  std::uint32_t subfield_trace(std::uint32_t a, unsigned from, unsigned to) const;
  bool in_subfield(std::uint32_t a, unsigned d) const noexcept { return frobenius(a, d) == a; }

  /// Bit k of the result is Tr_n(gamma * x^k); so Tr_n(gamma * y) equals the
  /// parity of (trace_form_mask(gamma) & y) for every y.
  std::uint32_t trace_form_mask(std::uint32_t gamma) const noexcept;

  FieldElement element(std::uint32_t bits) const;
  FieldElement zero() const;
  FieldElement one() const;
  /// The class of x modulo the modulus.
  FieldElement generator() const;
  FieldElement alpha(std::int64_t e) const;

 private:
  FiniteField(unsigned n, std::uint32_t modulus);
  std::uint32_t clmul_reduce(std::uint32_t a, std::uint32_t b) const noexcept;

  unsigned n_;
  std::uint32_t modulus_;
  std::uint32_t trace_mask_ = 0;
  std::vector<std::uint32_t> exp_;  // length 2 * (2^n - 1)
  std::vector<std::uint32_t> log_;  // length 2^n, log_[0] unused
  std::vector<std::uint32_t> trace_rows_;
};

class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(const FiniteField* field, std::uint32_t bits) : field_(field), bits_(bits) {}

  std::uint32_t bits() const noexcept { return bits_; }
  const FiniteField& field() const { return *field_; }
  const FiniteField* field_ptr() const noexcept { return field_; }
  bool is_zero() const noexcept { return bits_ == 0; }
  bool is_one() const noexcept { return bits_ == 1; }

  FieldElement inv() const;
  FieldElement pow(std::int64_t e) const { return {field_, field_->pow(bits_, e)}; }
  FieldElement frobenius(unsigned k) const { return {field_, field_->frobenius(bits_, k)}; }
  /// x-bar = x^(2^m) for the split n = 2m.
  FieldElement conj(unsigned m) const { return frobenius(m); }
  FieldElement trace(unsigned m) const { return {field_, field_->trace(bits_, m)}; }
  unsigned abs_trace() const noexcept { return field_->abs_trace(bits_); }
  bool in_subfield(unsigned d) const { return field_->in_subfield(bits_, d); }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    return {a.field_, a.bits_ ^ b.bits_};
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + b; }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    return {a.field_, a.field_->mul(a.bits_, b.bits_)};
  }
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    check_same(a, b);
    return {a.field_, a.field_->div(a.bits_, b.bits_)};
  }
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) noexcept {
    return a.field_ == b.field_ && a.bits_ == b.bits_;
  }

 private:
  static void check_same(const FieldElement& a, const FieldElement& b) {
    if (a.field_ != b.field_ || a.field_ == nullptr) {
      fail(ErrorCode::FieldMismatch, "operands belong to different fields");
    }
  }

  const FiniteField* field_ = nullptr;
  std::uint32_t bits_ = 0;
};

/// The (2^m + 1)-element subgroup {z : z^(2^m+1) = 1} of GF(2^2m)*,
/// listed as successive powers of alpha^(2^m - 1).
struct UnitCircle {
  unsigned m = 0;
  std::vector<FieldElement> elements;
};

UnitCircle unit_circle(const Field& field, unsigned m);

/// x = y * z with y in GF(2^m)* and z in U_m; requires n = 2m, x != 0.
std::pair<FieldElement, FieldElement> polar_decompose(const FieldElement& x, unsigned m);

/// (t + omega) / (t + omega-bar); t in GF(2^m), omega outside GF(2^m).
FieldElement mobius_param(const FieldElement& t, const FieldElement& omega, unsigned m);

/// alpha^((2^n - 1) / (2^d - 1)), a generator of GF(2^d)*.
FieldElement subfield_embed(const Field& field, unsigned d);

/// Inverse of a modulo M in [1, M).
std::uint64_t modular_inverse(std::int64_t a, std::uint64_t M);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

/// Parses the `n=<int> modulus=0x<hex>` field text format.
Field parse_field_spec(const std::string& text);
std::string format_field_spec(const FiniteField& field);

}  // namespace walshforge
