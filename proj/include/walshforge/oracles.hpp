#pragma once

// Exponential sums and root counts by brute force, the closed forms they are
// checked against, and a harness that confirms spectral claims on concrete
// parameters.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "walshforge/constructions.hpp"

namespace walshforge {

using FieldMap = std::function<std::uint32_t(std::uint32_t)>;

/// S(F, n) = sum over x of (-1)^Tr(F(x)), by direct summation.
std::int64_t weil_sum(const FiniteField& field, const FieldMap& F);

/// W_fP(a) == -S(a P(x) + x). Throws ZeroPoint for a = 0.
bool relation_check(const Permutation& p, const WalshSpectrum& spectrum, std::uint32_t a);
bool relation_check(const Permutation& p, std::uint32_t a);

/// S(x^3 + a x) over GF(2^n), n odd, from the closed form.
std::int64_t cubic_sum(const FiniteField& field, std::uint32_t a);

/// q(z) = c3 z^(2^k+1) + c2 z^(2^k) + c1 z + c0 over GF(2^2m).
struct CirclePoly {
  unsigned k = 1;
  std::uint32_t c3 = 0, c2 = 0, c1 = 0, c0 = 0;
};

enum class CirclePattern { Q1, Q2, FourValued };

/// Which admissible shape q has: Q1 = (u, 1, 1, conj u), Q2 = (1, u, conj u, 1)
/// with u != 0, or the four-valued proof shape (1, w, w, v) with v in U_m.
/// Throws PatternMismatch.
CirclePattern circle_pattern(const FiniteField& field, const CirclePoly& q, unsigned m);

/// Distinct roots of q on U_m, by enumeration.
unsigned circle_root_count(const FiniteField& field, const CirclePoly& q, unsigned m);

/// Some root on U_m is also a root of q'(z) = c3 z^(2^k) + c1.
bool has_repeated_circle_root(const FiniteField& field, const CirclePoly& q, unsigned m);

/// W_G(a, b) = S(b G(x) + a x) through the unit-circle reductions; r = 1 uses
/// the root-count form, any r the double sum over U_m x GF(2^m).
std::int64_t niho_walsh(const FiniteField& field, const NihoPolynomial& g, std::uint32_t a,
                        std::uint32_t b);
std::int64_t niho_walsh_double_sum(const FiniteField& field, const NihoPolynomial& g, std::uint32_t a,
                                   std::uint32_t b);

/// Q(x) = sum c x^(2^i + 2^j) + sum l x^(2^i), i != j.
struct QuadraticForm {
  struct Quad {
    std::uint32_t coeff;
    unsigned i, j;
  };
  struct Lin {
    std::uint32_t coeff;
    unsigned i;
  };
  unsigned n = 0;
  std::vector<Quad> quadratic;
  std::vector<Lin> linear;

  /// Throws NotQuadratic for an exponent of binary weight above 2.
  static QuadraticForm from_terms(const FiniteField& field, const std::vector<Term>& terms);
  std::uint32_t operator()(const FiniteField& field, std::uint32_t x) const;

  /// Basis of {y : Tr(b (Q(x+y) + Q(x) + Q(y))) = 0 for all x}.
  std::vector<std::uint32_t> kernel(const FiniteField& field, std::uint32_t b) const;
};

struct QuadraticWalsh {
  std::int64_t value = 0;
  unsigned kernel_dimension = 0;
  bool vanishes = false;
};

/// S(b Q(x) + a x) from the kernel: 0, or +-2^((n+d)/2) with the sign taken
/// from a sum over a complement of the kernel. Throws ZeroB.
QuadraticWalsh quadratic_walsh(const FiniteField& field, const QuadraticForm& q, std::uint32_t a,
                               std::uint32_t b);

/// Nonzero x with a^(2^m) x^(2^2m) + a x = 0.
std::uint64_t binomial_root_count(const FiniteField& field, unsigned m, std::uint32_t a);
std::uint64_t binomial_root_count_formula(const FiniteField& field, unsigned m, std::uint32_t a);

/// counts[a] = #{x : x^(2^k+1) + b x = a}, i.e. the root count of x^(2^k+1) + b x + a.
std::vector<std::uint32_t> projective_root_counts(const FiniteField& field, unsigned k, std::uint32_t b);

/// L(x) = sum_t coeffs[t] x^(2^(t k)).
struct LinearizedPoly {
  unsigned k = 1;
  std::vector<std::uint32_t> coeffs;
};

std::uint64_t linearized_root_count(const FiniteField& field, const LinearizedPoly& L);
/// Root count is at most 2^d, d the top nonzero index. Throws GcdViolation unless gcd(k, n) = 1.
bool linear_root_bound_check(const FiniteField& field, const LinearizedPoly& L);

/// Delta^8 y^(4^3) + D^2 y^(4^2) + D y^4 + Delta y with D = 1 + Delta + Delta^2 + Delta^4.
LinearizedPoly plateaued_kernel_poly(const FiniteField& field, std::uint32_t delta);

// ---------------------------------------------------------------------------
// Theorem harness

enum class TheoremId { FourValuedDist, PlateauedQuadrinomial, DoEx1, DoEx2, Pl2, Pl3, Pl4, PropFourbe };

std::string to_string(TheoremId id);
std::optional<TheoremId> parse_theorem_id(const std::string& text);

struct Promise {
  std::vector<std::int64_t> values;                        // allowed spectrum values
  std::optional<std::map<std::int64_t, std::uint64_t>> histogram;
  std::optional<unsigned> plateau;                         // r
};

struct TheoremCase {
  TheoremId id = TheoremId::FourValuedDist;
  ConstructionSpec spec;

  /// Derived from id and the construction alone.
  Promise promise() const;
};

struct Counterexample {
  std::uint32_t gamma = 0;
  std::int64_t value = 0;
  std::string reason;
};

struct Verdict {
  TheoremCase theorem;
  Promise promise;
  std::map<std::int64_t, std::uint64_t> measured;
  std::string classification;
  bool pass = false;
  std::vector<std::string> notes;
  std::optional<Counterexample> counterexample;
};

/// Builds f_P for the case and checks it against the promise. Throws
/// HypothesisViolated when the construction fails the theorem's hypotheses.
Verdict verify_theorem(const TheoremCase& c);

/// Runs cases on up to `threads` workers; results keep the input order.
std::vector<Verdict> verify_theorems(const std::vector<TheoremCase>& cases, unsigned threads);

struct CaseParams {
  unsigned m = 0, k = 0, i = 0, n = 0;
  unsigned shape = 1;       // DO shape
  unsigned condition = 0;   // quadrinomial condition 1..3, 0 = (2)
  NihoVariant::Kind variant = NihoVariant::Kind::Plus;
  unsigned count = 1;       // how many distinct coefficient choices
};

/// Cases with coefficients chosen automatically: the first valid alpha^j in
/// power order (both GF(4) \ GF(2) elements for the one-fifth trinomial).
std::vector<TheoremCase> sample_cases(TheoremId id, const CaseParams& params);

nlohmann::ordered_json to_json(const Promise& p);
nlohmann::ordered_json to_json(const Verdict& v);

}  // namespace walshforge
