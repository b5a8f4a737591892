#include "walshforge/gf2n.hpp"

#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <numeric>
#include <sstream>
#include <string>

namespace walshforge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::ReducibleModulus: return "ReducibleModulus";
    case ErrorCode::NonPrimitiveModulus: return "NonPrimitiveModulus";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::NonDivisorSubfield: return "NonDivisorSubfield";
    case ErrorCode::OddDegree: return "OddDegree";
    case ErrorCode::EvenDegree: return "EvenDegree";
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::OmegaInSubfield: return "OmegaInSubfield";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::ElementOutOfRange: return "ElementOutOfRange";
    case ErrorCode::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorCode::GcdConditionViolated: return "GcdConditionViolated";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::NotTwoToOne: return "NotTwoToOne";
    case ErrorCode::Eps1Zero: return "Eps1Zero";
    case ErrorCode::ZeroPoint: return "ZeroPoint";
    case ErrorCode::PatternMismatch: return "PatternMismatch";
    case ErrorCode::OddAmbientDegree: return "OddAmbientDegree";
    case ErrorCode::NotQuadratic: return "NotQuadratic";
    case ErrorCode::ZeroB: return "ZeroB";
    case ErrorCode::GcdViolation: return "GcdViolation";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

// Canonical primitive polynomials, lowest weight then smallest pattern.
constexpr std::array<std::uint32_t, 21> kCanonicalModuli = {
    0x0,     0x3,     0x7,     0xb,     0x13,     0x25,    0x43,
    0x83,    0x11d,   0x211,   0x409,   0x805,    0x1053,  0x201b,
    0x402b,  0x8003,  0x1002d, 0x20009, 0x40081,  0x80027, 0x100009,
};

unsigned poly_degree(std::uint64_t p) { return p == 0 ? 0 : 63 - std::countl_zero(p); }

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t b) {
  const unsigned db = poly_degree(b);
  while (a != 0 && poly_degree(a) >= db) a ^= b << (poly_degree(a) - db);
  return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= v; ++p) {
    if (v % p == 0) {
      out.push_back(p);
      while (v % p == 0) v /= p;
    }
  }
  if (v > 1) out.push_back(v);
  return out;
}

}  // namespace

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint32_t FiniteField::canonical_modulus(unsigned n) {
  if (n < 1 || n > kMaxDegree) {
    fail(ErrorCode::UnsupportedDegree, "degree " + std::to_string(n) + " outside [1, 20]");
  }
  return kCanonicalModuli[n];
}

bool FiniteField::is_irreducible(std::uint32_t modulus, unsigned n) {
  if (poly_degree(modulus) != n) return false;
  // Trial division by every polynomial of degree 1..n/2.
  for (unsigned d = 1; d <= n / 2; ++d) {
    for (std::uint64_t q = std::uint64_t{1} << d; q < (std::uint64_t{1} << (d + 1)); ++q) {
      if (poly_mod(modulus, q) == 0) return false;
    }
  }
  return true;
}

FiniteField::FiniteField(unsigned n, std::uint32_t modulus) : n_(n), modulus_(modulus) {}

Field FiniteField::create(unsigned n, std::optional<std::uint32_t> modulus) {
  if (n < 1 || n > kMaxDegree) {
    fail(ErrorCode::UnsupportedDegree, "degree " + std::to_string(n) + " outside [1, 20]");
  }
  const std::uint32_t mod = modulus.value_or(canonical_modulus(n));
  if (poly_degree(mod) != n) {
    fail(ErrorCode::UnsupportedDegree, "modulus degree does not match n=" + std::to_string(n));
  }
  if (!is_irreducible(mod, n)) {
    std::ostringstream os;
    os << "modulus 0x" << std::hex << mod << " is reducible";
    fail(ErrorCode::ReducibleModulus, os.str());
  }

  // Private constructor; make_shared cannot reach it.
  std::shared_ptr<FiniteField> f(new FiniteField(n, mod));
  const std::uint32_t order = f->group_order();
  const std::uint32_t gen = static_cast<std::uint32_t>(poly_mod(2, mod));

  for (std::uint64_t p : prime_factors(order)) {
    std::uint32_t r = 1;
    std::uint32_t b = gen;
    for (std::uint64_t e = order / p; e != 0; e >>= 1) {
      if (e & 1) r = f->clmul_reduce(r, b);
      b = f->clmul_reduce(b, b);
    }
    if (r == 1 && order > 1) {
      std::ostringstream os;
      os << "x has order dividing " << order / p << " modulo 0x" << std::hex << mod;
      fail(ErrorCode::NonPrimitiveModulus, os.str());
    }
  }

  if (n <= kTableDegree) {
    f->exp_.resize(2 * std::size_t{order});
    f->log_.assign(f->size(), 0);
    std::uint32_t v = 1;
    for (std::uint32_t i = 0; i < order; ++i) {
      f->exp_[i] = v;
      f->exp_[i + order] = v;
      f->log_[v] = i;
      v = f->clmul_reduce(v, gen);
    }
  }

  // Tr is linear: record Tr(x^i) for the basis, then Tr(a) = parity(a & mask).
  for (unsigned i = 0; i < n; ++i) {
    const std::uint32_t basis = std::uint32_t{1} << i;
    std::uint32_t acc = 0;
    std::uint32_t t = basis;
    for (unsigned j = 0; j < n; ++j) {
      acc ^= t;
      t = f->clmul_reduce(t, t);
    }
    if (acc & 1) f->trace_mask_ |= basis;
  }
  f->trace_rows_.resize(n);
  for (unsigned j = 0; j < n; ++j) {
    std::uint32_t row = 0;
    for (unsigned k = 0; k < n; ++k) {
      const std::uint32_t prod = f->clmul_reduce(std::uint32_t{1} << j, std::uint32_t{1} << k);
      if (f->abs_trace(prod)) row |= std::uint32_t{1} << k;
    }
    f->trace_rows_[j] = row;
  }
  return f;
}

std::uint32_t FiniteField::clmul_reduce(std::uint32_t a, std::uint32_t b) const noexcept {
  std::uint32_t r = 0;
  const std::uint32_t top = std::uint32_t{1} << n_;
  while (b != 0) {
    if (b & 1) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a & top) a ^= modulus_;
  }
  return r;
}

std::uint32_t FiniteField::mul(std::uint32_t a, std::uint32_t b) const noexcept {
  if (a == 0 || b == 0) return 0;
  if (!exp_.empty()) return exp_[log_[a] + log_[b]];
  return clmul_reduce(a, b);
}

std::uint32_t FiniteField::inv(std::uint32_t a) const {
  if (a == 0) fail(ErrorCode::DivisionByZero, "inverse of zero");
  if (!exp_.empty()) return exp_[(group_order() - log_[a]) % group_order()];
  return pow(a, static_cast<std::int64_t>(group_order()) - 1);
}

std::uint32_t FiniteField::pow(std::uint32_t a, std::int64_t e) const {
  if (a == 0) {
    if (e == 0) return 1;
    if (e < 0) fail(ErrorCode::DivisionByZero, "zero raised to a negative power");
    return 0;
  }
  const std::int64_t order = group_order();
  std::int64_t r = e % order;
  if (r < 0) r += order;
  if (!exp_.empty()) {
    return exp_[static_cast<std::uint64_t>(log_[a]) * static_cast<std::uint64_t>(r) % order];
  }
  std::uint32_t acc = 1;
  std::uint32_t base = a;
  for (auto u = static_cast<std::uint64_t>(r); u != 0; u >>= 1) {
    if (u & 1) acc = clmul_reduce(acc, base);
    base = clmul_reduce(base, base);
  }
  return acc;
}

std::uint32_t FiniteField::frobenius(std::uint32_t a, unsigned k) const noexcept {
  k %= n_;
  if (a == 0 || k == 0) return a;
  if (!exp_.empty()) {
    return exp_[(static_cast<std::uint64_t>(log_[a]) << k) % group_order()];
  }
  for (unsigned i = 0; i < k; ++i) a = clmul_reduce(a, a);
  return a;
}

std::uint32_t FiniteField::alpha_pow(std::int64_t e) const noexcept {
  const std::int64_t order = group_order();
  std::int64_t r = e % order;
  if (r < 0) r += order;
  if (!exp_.empty()) return exp_[r];
  const auto gen = static_cast<std::uint32_t>(poly_mod(2, modulus_));
  std::uint32_t acc = 1;
  std::uint32_t base = gen;
  for (auto u = static_cast<std::uint64_t>(r); u != 0; u >>= 1) {
    if (u & 1) acc = clmul_reduce(acc, base);
    base = clmul_reduce(base, base);
  }
  return acc;
}

std::uint32_t FiniteField::log(std::uint32_t a) const {
  if (a == 0) fail(ErrorCode::ZeroInput, "logarithm of zero");
  if (!exp_.empty()) return log_[a];
  const auto gen = static_cast<std::uint32_t>(poly_mod(2, modulus_));
  std::uint32_t v = 1;
  for (std::uint32_t i = 0; i < group_order(); ++i) {
    if (v == a) return i;
    v = clmul_reduce(v, gen);
  }
  fail(ErrorCode::ElementOutOfRange, "element not in the multiplicative group");
}

std::uint32_t FiniteField::trace(std::uint32_t a, unsigned m) const {
  if (m == 0 || n_ % m != 0) {
    fail(ErrorCode::NonDivisorSubfield, std::to_string(m) + " does not divide " + std::to_string(n_));
  }
  if (m == 1) return abs_trace(a);
  std::uint32_t acc = 0;
  std::uint32_t t = a;
  for (unsigned j = 0; j < n_ / m; ++j) {
    acc ^= t;
    t = frobenius(t, m);
  }
  return acc;
}

std::uint32_t FiniteField::subfield_trace(std::uint32_t a, unsigned from, unsigned to) const {
  if (to == 0 || from == 0 || from % to != 0 || n_ % from != 0) {
    fail(ErrorCode::NonDivisorSubfield, "trace GF(2^" + std::to_string(from) + ") -> GF(2^" +
                                            std::to_string(to) + ") undefined");
  }
  std::uint32_t acc = 0;
  std::uint32_t t = a;
  for (unsigned j = 0; j < from / to; ++j) {
    acc ^= t;
    t = frobenius(t, to);
  }
  return acc;
}

std::uint32_t FiniteField::trace_form_mask(std::uint32_t gamma) const noexcept {
  std::uint32_t mask = 0;
  while (gamma != 0) {
    mask ^= trace_rows_[std::countr_zero(gamma)];
    gamma &= gamma - 1;
  }
  return mask;
}

FieldElement FiniteField::element(std::uint32_t bits) const {
  if (bits >= size()) {
    fail(ErrorCode::ElementOutOfRange,
         std::to_string(bits) + " is not below 2^" + std::to_string(n_));
  }
  return {this, bits};
}

FieldElement FiniteField::zero() const { return {this, 0}; }
FieldElement FiniteField::one() const { return {this, 1}; }
FieldElement FiniteField::generator() const { return {this, alpha_pow(1)}; }
FieldElement FiniteField::alpha(std::int64_t e) const { return {this, alpha_pow(e)}; }

FieldElement FieldElement::inv() const { return {field_, field_->inv(bits_)}; }

UnitCircle unit_circle(const Field& field, unsigned m) {
  if (field->degree() != 2 * m) {
    fail(ErrorCode::OddDegree, "unit circle needs n = 2m, got n=" + std::to_string(field->degree()) +
                                   ", m=" + std::to_string(m));
  }
  UnitCircle circle;
  circle.m = m;
  const std::uint32_t count = (std::uint32_t{1} << m) + 1;
  const FieldElement step = field->alpha((std::int64_t{1} << m) - 1);
  FieldElement z = field->one();
  circle.elements.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    circle.elements.push_back(z);
    z = z * step;
  }
  return circle;
}

std::pair<FieldElement, FieldElement> polar_decompose(const FieldElement& x, unsigned m) {
  const FiniteField& f = x.field();
  if (f.degree() != 2 * m) fail(ErrorCode::OddDegree, "polar decomposition needs n = 2m");
  if (x.is_zero()) fail(ErrorCode::ZeroInput, "polar decomposition of zero");
  // x^(2^m - 1) = z^(2^m - 1) = z^(-2), so z = (x^(2^m - 1))^(-1/2).
  const FieldElement zsq_inv = x.pow((std::int64_t{1} << m) - 1);
  const FieldElement z = zsq_inv.inv().frobenius(f.degree() - 1);
  return {x / z, z};
}

FieldElement mobius_param(const FieldElement& t, const FieldElement& omega, unsigned m) {
  const FiniteField& f = t.field();
  if (f.degree() != 2 * m) fail(ErrorCode::OddDegree, "Mobius parameterization needs n = 2m");
  if (omega.in_subfield(m)) fail(ErrorCode::OmegaInSubfield, "omega lies in GF(2^m)");
  if (!t.in_subfield(m)) fail(ErrorCode::ElementOutOfRange, "t must lie in GF(2^m)");
  return (t + omega) / (t + omega.conj(m));
}

FieldElement subfield_embed(const Field& field, unsigned d) {
  const unsigned n = field->degree();
  if (d == 0 || n % d != 0) {
    fail(ErrorCode::NonDivisorSubfield, std::to_string(d) + " does not divide " + std::to_string(n));
  }
  const std::int64_t e = static_cast<std::int64_t>(field->group_order()) /
                         ((std::int64_t{1} << d) - 1);
  return field->alpha(e);
}

std::uint64_t modular_inverse(std::int64_t a, std::uint64_t M) {
  if (M < 2) fail(ErrorCode::NotCoprime, "modulus must be at least 2");
  const auto m = static_cast<std::int64_t>(M);
  std::int64_t r0 = ((a % m) + m) % m;
  std::int64_t r1 = m;
  std::int64_t s0 = 1;
  std::int64_t s1 = 0;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
  }
  if (r0 != 1) {
    fail(ErrorCode::NotCoprime, std::to_string(a) + " is not invertible modulo " + std::to_string(M));
  }
  return static_cast<std::uint64_t>(((s0 % m) + m) % m);
}

Field parse_field_spec(const std::string& text) {
  std::istringstream in(text);
  std::string token;
  std::optional<unsigned> n;
  std::optional<std::uint32_t> modulus;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) fail(ErrorCode::ParseError, "field token without '=': " + token);
    const std::string key = token.substr(0, eq);
    std::string value = token.substr(eq + 1);
    if (key == "n") {
      unsigned v = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc{} || p != value.data() + value.size()) {
        fail(ErrorCode::ParseError, "bad field degree: " + value);
      }
      n = v;
    } else if (key == "modulus") {
      if (value.rfind("0x", 0) == 0 || value.rfind("0X", 0) == 0) value = value.substr(2);
      std::uint32_t v = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v, 16);
      if (ec != std::errc{} || p != value.data() + value.size() || value.empty()) {
        fail(ErrorCode::ParseError, "bad modulus: " + value);
      }
      modulus = v;
    } else {
      fail(ErrorCode::ParseError, "unknown field key: " + key);
    }
  }
  if (!n) fail(ErrorCode::ParseError, "field spec missing n=");
  return FiniteField::create(*n, modulus);
}

std::string format_field_spec(const FiniteField& field) {
  std::ostringstream os;
  os << "n=" << field.degree() << " modulus=0x" << std::hex << field.modulus();
  return os.str();
}

}  // namespace walshforge
