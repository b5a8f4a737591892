#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "walshforge/gf2n.hpp"

namespace walshforge {

/// Truth table of a function GF(2^n) -> GF(2), indexed by element bits.
class BooleanFunction {
 public:
  BooleanFunction(Field field);
  BooleanFunction(Field field, std::vector<std::uint64_t> words);

  static BooleanFunction from_support(const Field& field, std::span<const std::uint32_t> support);
  static BooleanFunction from_predicate(const Field& field, auto&& pred) {
    BooleanFunction f(field);
    for (std::uint32_t x = 0; x < field->size(); ++x) {
      if (pred(x)) f.set(x, true);
    }
    return f;
  }

  const Field& field() const noexcept { return field_; }
  unsigned n() const noexcept { return field_->degree(); }
  std::uint32_t size() const noexcept { return field_->size(); }

  bool operator()(std::uint32_t x) const noexcept { return (words_[x >> 6] >> (x & 63)) & 1; }
  void set(std::uint32_t x, bool value) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (x & 63);
    if (value) words_[x >> 6] |= bit; else words_[x >> 6] &= ~bit;
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::uint64_t weight() const noexcept;
  std::vector<std::uint32_t> support() const;
  BooleanFunction complement() const;

  friend bool operator==(const BooleanFunction& a, const BooleanFunction& b) {
    return a.field_->degree() == b.field_->degree() && a.words_ == b.words_;
  }

 private:
  Field field_;
  std::vector<std::uint64_t> words_;
};

struct WalshSpectrum {
  unsigned n = 0;
  std::vector<std::int32_t> values;              // values[gamma] = W_f(gamma)
  std::map<std::int32_t, std::uint64_t> histogram;

  std::int32_t max_abs() const;
};

/// Fast transform: O(n 2^n).
WalshSpectrum walsh_spectrum(const BooleanFunction& f);
/// Straight from the definition, O(4^n); reference for small fields.
WalshSpectrum walsh_spectrum_direct(const BooleanFunction& f);

bool is_balanced(const BooleanFunction& f);
bool is_balanced(const WalshSpectrum& s);
std::int64_t nonlinearity(const WalshSpectrum& s);
std::int64_t nonlinearity(const BooleanFunction& f);

struct AnfPolynomial {
  unsigned n = 0;
  std::vector<std::uint64_t> coefficients;  // bit u set: monomial prod_{i in u} x_i
  unsigned degree = 0;

  bool coefficient(std::uint32_t u) const noexcept { return (coefficients[u >> 6] >> (u & 63)) & 1; }
  /// Truth table bits obtained by evaluating the ANF everywhere.
  std::vector<std::uint64_t> evaluate_all() const;
};

AnfPolynomial anf(const BooleanFunction& f);
unsigned algebraic_degree(const BooleanFunction& f);

/// Least degree of a nonzero h with h = 0 on `points`.
unsigned annihilator_degree(std::span<const std::uint32_t> points, unsigned n);

constexpr unsigned kMaxAiDegree = 14;
/// min over g in {f, f+1} of the least degree of a nonzero annihilator of g.
unsigned algebraic_immunity(const BooleanFunction& f);

/// Coefficients a_0 .. a_{2^n - 1} (element bits) of f(x) = sum a_i x^i.
std::vector<std::uint32_t> univariate_representation(const BooleanFunction& f);
std::uint32_t evaluate_univariate(const FiniteField& field, std::span<const std::uint32_t> coeffs,
                                  std::uint32_t x);

struct SpectrumClass {
  enum class Tag { Bent, Plateaued, FourValued, Other };
  Tag tag = Tag::Other;
  unsigned r = 0;                      // plateaued order
  std::vector<std::int32_t> values;    // sorted distinct values

  bool is_near_bent() const { return tag == Tag::Plateaued && r == 1; }
  bool is_semi_bent() const { return tag == Tag::Plateaued && r == 2; }
  /// "bent", "near-bent", "semi-bent", "3-plateaued", "four-valued", "other".
  std::string name() const;
};

SpectrumClass classify(const WalshSpectrum& s);

/// Truth-table text file: `n=<int>` then 2^n characters of {0,1}.
void write_truth_table(std::ostream& out, const BooleanFunction& f);
BooleanFunction read_truth_table(std::istream& in);

/// CSV `gamma,value` rows.
void write_spectrum_csv(std::ostream& out, const WalshSpectrum& s);

}  // namespace walshforge
