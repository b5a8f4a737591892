#pragma once

// Permutation families P over GF(2^n) and the balanced functions whose
// support is the image of x -> P(x^2 + x).
//
// Coefficients are element bits in the field the construction is bound to (by default
// the canonical field of the ambient degree).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "walshforge/boolfun.hpp"
#include "walshforge/gf2n.hpp"

namespace walshforge {

struct NihoVariant {
  enum class Kind { OneFifth, Plus, Minus };
  Kind kind = Kind::OneFifth;
  unsigned k = 0;  // plus/minus only
};

/// P = c x + Tr_m^{2m}(x^s), s a normalized Niho exponent.
struct NihoTrinomial {
  unsigned m = 0;
  NihoVariant variant;
  std::uint32_t c = 0;
};

/// P = x^(3*2^m) + a x^(2*2^m+1) + b x^(2^m+2) + c x^3 over GF(2^2m).
struct Quadrinomial {
  unsigned m = 0;
  std::uint32_t a = 0, b = 0, c = 0;
};

/// P = x L(x). shape 1: L = x^(2^m); shape 2: L = x^(2^m) + a x^(2^(n-m));
/// shape 3 (n = 3m): L = x^(2^2m) + a^(2^m+1) x^(2^m) + a x.
struct DOProduct {
  unsigned n = 0;
  unsigned m = 0;
  unsigned shape = 1;
  std::uint32_t a = 0;
};

struct TraceShape {
  enum class Kind { Gold, Halved, Double };
  Kind kind = Kind::Gold;
  unsigned i = 0;  // gold/double only
};

/// P = c x + Tr_m^{km}(x^s) over GF(2^km).
/// gold(i): s = 2^i (2^m + 1); halved: s = (2^2m + 2^m) / 2; double(i): s = 2 (2^im + 1).
struct TraceLinear {
  unsigned m = 0;
  unsigned k = 0;
  TraceShape shape;
  std::uint32_t c = 0;
};

/// P = x^d; a permutation iff gcd(d, 2^n - 1) = 1.
struct Monomial {
  unsigned n = 0;
  std::uint64_t d = 1;
};

using Family = std::variant<NihoTrinomial, Quadrinomial, DOProduct, TraceLinear, Monomial>;

struct ConstructionSpec {
  Family family;

  /// Degree n of GF(2^n) the polynomial lives in.
  unsigned ambient_degree() const;
  /// "niho-trinomial", "quadrinomial", "do", "trace-linear" or "monomial".
  std::string tag() const;
};

/// Integer exponent s for the Niho variants; the fractions are taken modulo 2^m + 1.
std::uint64_t build_niho_exponent(unsigned m, const NihoVariant& variant);

/// s for a trace-linear shape (an integer, not reduced).
std::uint64_t trace_linear_exponent(unsigned m, const TraceShape& shape);

struct Validity {
  bool valid = false;
  std::string clause;                // the failed clause, or the one that holds
  std::vector<unsigned> conditions;  // quadrinomial: conditions (1)-(3) that hold

  explicit operator bool() const noexcept { return valid; }
};

/// Checks every stated side condition of the family. Plus/minus Niho variants
/// carry no sufficient condition for c, so their permutation property is
/// checked exhaustively.
Validity validate(const ConstructionSpec& spec, const Field& field);
Validity validate(const ConstructionSpec& spec);

/// One monomial coeff * x^exponent, exponent in [1, 2^n - 1].
struct Term {
  std::uint32_t coeff = 0;
  std::uint64_t exponent = 0;
};

class Permutation {
 public:
  /// Validates first; throws InvalidSpec naming the violated clause.
  static Permutation create(const ConstructionSpec& spec, Field field = nullptr);
  /// No validation; for negative tests.
  static Permutation create_unchecked(const ConstructionSpec& spec, Field field = nullptr);

  const ConstructionSpec& spec() const noexcept { return spec_; }
  const Field& field() const noexcept { return field_; }

  /// Evaluates the family formula (traces and all) at x.
  std::uint32_t operator()(std::uint32_t x) const;
  FieldElement eval(const FieldElement& x) const;

  /// The polynomial expanded into monomials with like exponents merged.
  std::vector<Term> terms() const;
  std::uint32_t eval_terms(std::uint32_t x) const;

  /// Value table over the whole field.
  std::vector<std::uint32_t> table() const;

 private:
  Permutation(ConstructionSpec spec, Field field);

  ConstructionSpec spec_;
  Field field_;
  std::uint64_t s_ = 0;      // trace exponent for niho / trace-linear
  unsigned sub_ = 0;         // relative trace target degree
  std::uint32_t a_pow_ = 0;  // DO shape 3: a^(2^m+1)
};

/// True iff eval hits all 2^n field elements.
bool verify_permutation(const Permutation& p);

/// x -> P(x^2 + x).
class TwoToOne {
 public:
  explicit TwoToOne(Permutation p) : p_(std::move(p)) {}

  const Permutation& permutation() const noexcept { return p_; }
  std::uint32_t operator()(std::uint32_t x) const;

  /// preimage count -> number of field elements with that many preimages.
  std::map<unsigned, std::uint64_t> preimage_histogram() const;
  /// Image set as a truth table; throws NotTwoToOne unless every point has 0 or 2 preimages.
  BooleanFunction image() const;

 private:
  Permutation p_;
};

TwoToOne two_to_one_compose(const Permutation& p);

/// f_P: support Im(P(x^2 + x)).
BooleanFunction parameterize(const Permutation& p);

/// Niho-form view G(x) = x^r h(x^(2^m - 1)) over GF(2^2m); h is stored by
/// its exponents taken modulo 2^m + 1.
struct NihoPolynomial {
  unsigned m = 0;
  std::uint64_t r = 1;
  std::vector<Term> h;  // exponent field holds e mod 2^m + 1

  std::vector<Term> expand(const FiniteField& field) const;
};

/// h for a NihoTrinomial: c + x^e + x^(1 - e) where s = e (2^m - 1) + 1.
NihoPolynomial niho_form(const NihoTrinomial& spec);

struct EpsilonVector {
  FieldElement eps[4];
  FieldElement veps[4];
  unsigned m = 0;

  /// Tr_m((eps2^2 + eps1 eps3)^3 / ((eps1 eps4 + eps2 eps3)^2 eps1^2)).
  /// Throws Eps1Zero when eps1 = 0 and DivisionByZero when the other factor vanishes.
  unsigned trace_quantity() const;
};

/// The four eps parameters and their shifted forms for a quadrinomial, at gamma.
EpsilonVector epsilon_params(const FieldElement& gamma, const FieldElement& a, const FieldElement& b,
                             const FieldElement& c, const FieldElement& omega, unsigned m);

/// Text form: `family=<tag> m=<int> k=<int> i=<int> n=<int> shape=<..> variant=<..>
/// a=<coef> b=<coef> c=<coef> d=<int>`. Coefficients are 0x<hex>, a decimal
/// bit pattern, alpha^e, subfield:d (generator of GF(2^d)) or subfield:d^j.
/// A missing c defaults to subfield:2 for the one-fifth trinomial and to the
/// first alpha^j making the construction valid elsewhere; quadrinomial coefficients
/// are required. Throws InvalidSpec naming the offending key.
ConstructionSpec parse_spec(const std::string& text, const Field& field = nullptr);
std::string format_spec(const ConstructionSpec& spec);

nlohmann::ordered_json to_json(const ConstructionSpec& spec);
ConstructionSpec spec_from_json(const nlohmann::json& j, const Field& field = nullptr);

/// Elements of GF(2^d) inside the field, 0 first then increasing powers of a subfield generator.
std::vector<std::uint32_t> subfield_elements(const Field& field, unsigned d);

}  // namespace walshforge
