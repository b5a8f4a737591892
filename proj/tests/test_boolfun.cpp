#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "reference.hpp"
#include "walshforge/boolfun.hpp"

using namespace walshforge;

namespace {

ref::Table table_of(const BooleanFunction& f) {
  ref::Table t(f.size());
  for (std::uint32_t x = 0; x < f.size(); ++x) t[x] = f(x);
  return t;
}

BooleanFunction random_function(const Field& field, std::mt19937& rng, bool balanced = false) {
  BooleanFunction f(field);
  if (!balanced) {
    for (std::uint32_t x = 0; x < field->size(); ++x) f.set(x, rng() & 1);
    return f;
  }
  std::vector<std::uint32_t> pts(field->size());
  for (std::uint32_t x = 0; x < field->size(); ++x) pts[x] = x;
  std::shuffle(pts.begin(), pts.end(), rng);
  for (std::uint32_t i = 0; i < field->size() / 2; ++i) f.set(pts[i], true);
  return f;
}

// Tr(c x^d) + e as a truth table.
BooleanFunction trace_monomial(const Field& field, std::uint32_t c, std::int64_t d, bool e = false) {
  return BooleanFunction::from_predicate(
      field, [&](std::uint32_t x) { return (field->abs_trace(field->mul(c, field->pow(x, d))) ^ e) != 0; });
}

}  // namespace

TEST_CASE("fast and direct Walsh transforms agree with the definition") {
  std::mt19937 rng(11);
  for (unsigned n = 1; n <= 8; ++n) {
    const Field field = FiniteField::create(n);
    const BooleanFunction f = random_function(field, rng);
    const auto want = ref::walsh(ref::Field{n, field->modulus()}, table_of(f));
    const WalshSpectrum fast = walsh_spectrum(f), direct = walsh_spectrum_direct(f);
    for (std::uint32_t g = 0; g < field->size(); ++g) {
      REQUIRE(fast.values[g] == want[g]);
      REQUIRE(direct.values[g] == want[g]);
    }
    CHECK(ref::moments_hold(n, fast.histogram, f(0)));
  }
}

TEST_CASE("spectrum under a non-canonical modulus") {
  std::mt19937 rng(12);
  const Field field = FiniteField::create(6, 0x5b);
  const BooleanFunction f = random_function(field, rng);
  const auto want = ref::walsh(ref::Field{6, 0x5b}, table_of(f));
  const WalshSpectrum s = walsh_spectrum(f);
  for (std::uint32_t g = 0; g < 64; ++g) CHECK(s.values[g] == want[g]);
}

TEST_CASE("Parseval and moments on larger random functions") {
  std::mt19937 rng(13);
  for (unsigned n : {10u, 14u, 18u}) {
    const Field field = FiniteField::create(n);
    const BooleanFunction f = random_function(field, rng, true);
    const WalshSpectrum s = walsh_spectrum(f);
    CHECK(is_balanced(s));
    CHECK(is_balanced(f));
    CHECK(ref::moments_hold(n, s.histogram, f(0)));
  }
}

TEST_CASE("nonlinearity") {
  const Field field = FiniteField::create(6);
  // Affine: NL 0. Tr(x^3) over GF(64) is quadratic with a 2-dimensional radical: semi-bent, NL 24.
  CHECK(nonlinearity(trace_monomial(field, 1, 1)) == 0);
  CHECK(nonlinearity(trace_monomial(field, 1, 3)) == 24);
  // Tr(alpha x^3) is bent on GF(64) (alpha not a cube): NL 28.
  const BooleanFunction bent = trace_monomial(field, 2, 3);
  CHECK(nonlinearity(bent) == 28);
  CHECK(classify(walsh_spectrum(bent)).name() == "bent");
}

TEST_CASE("ANF and degree match subset sums") {
  std::mt19937 rng(14);
  for (unsigned n = 1; n <= 10; ++n) {
    const Field field = FiniteField::create(n);
    const BooleanFunction f = random_function(field, rng);
    const ref::Table want = ref::anf(n, table_of(f));
    const AnfPolynomial p = anf(f);
    for (std::uint32_t u = 0; u < field->size(); ++u) REQUIRE(p.coefficient(u) == (want[u] != 0));
    CHECK(p.degree == ref::degree(n, table_of(f)));
    CHECK(std::vector<std::uint64_t>(f.words().begin(), f.words().end()) == p.evaluate_all());
  }
  // Tr(x^d) has degree wt(d) when the trace term survives.
  const Field field = FiniteField::create(8);
  CHECK(algebraic_degree(trace_monomial(field, 1, 7)) == 3);
  CHECK(algebraic_degree(trace_monomial(field, 1, 127)) == 7);
}

TEST_CASE("algebraic immunity matches exhaustive search") {
  std::mt19937 rng(15);
  for (unsigned n = 1; n <= 4; ++n) {
    const Field field = FiniteField::create(n);
    for (int t = 0; t < 60; ++t) {
      const BooleanFunction f = random_function(field, rng);
      CAPTURE(n);
      REQUIRE(algebraic_immunity(f) == ref::algebraic_immunity(n, table_of(f)));
    }
  }
}

TEST_CASE("algebraic immunity bounds and special cases") {
  std::mt19937 rng(16);
  for (unsigned n = 5; n <= 12; ++n) {
    const Field field = FiniteField::create(n);
    const BooleanFunction f = random_function(field, rng, true);
    const unsigned ai = algebraic_immunity(f);
    CHECK(ai <= (n + 1) / 2);
    CHECK(ai <= algebraic_degree(f));
  }
  const Field field = FiniteField::create(6);
  CHECK(algebraic_immunity(BooleanFunction(field)) == 0);                // f = 0
  CHECK(algebraic_immunity(BooleanFunction(field).complement()) == 0);   // f = 1
  CHECK(algebraic_immunity(trace_monomial(field, 1, 1)) == 1);           // affine
  CHECK(annihilator_degree(std::vector<std::uint32_t>{}, 6) == 0);
  CHECK_THROWS_AS(algebraic_immunity(BooleanFunction(FiniteField::create(15))), Error);
}

TEST_CASE("univariate representation round trip") {
  std::mt19937 rng(17);
  for (unsigned n : {2u, 4u, 6u, 8u}) {
    const Field field = FiniteField::create(n);
    const BooleanFunction f = random_function(field, rng);
    const auto coeffs = univariate_representation(f);
    for (std::uint32_t x = 0; x < field->size(); ++x) {
      REQUIRE(evaluate_univariate(*field, coeffs, x) == (f(x) ? 1u : 0u));
    }
    // Boolean: a_{2i mod (2^n - 1)} = a_i^2.
    for (std::uint32_t i = 1; i + 1 < field->size(); ++i) {
      REQUIRE(coeffs[(2 * i) % field->group_order()] == field->sqr(coeffs[i]));
    }
  }
  // Tr(x^3) on GF(16): coefficients 1 at 3, 6, 12, 9.
  const Field field = FiniteField::create(4);
  const auto c = univariate_representation(trace_monomial(field, 1, 3));
  for (std::uint32_t i = 0; i < 16; ++i) {
    const bool in_orbit = i == 3 || i == 6 || i == 12 || i == 9;
    CHECK(c[i] == (in_orbit ? 1u : 0u));
  }
}

TEST_CASE("classification") {
  auto spectrum_of = [](unsigned n, std::map<std::int32_t, std::uint64_t> h) {
    WalshSpectrum s;
    s.n = n;
    s.histogram = h;
    for (const auto& [v, c] : h) s.values.insert(s.values.end(), c, v);
    return s;
  };
  CHECK(classify(spectrum_of(6, {{-8, 28}, {8, 36}})).name() == "bent");
  CHECK(classify(spectrum_of(7, {{-16, 24}, {0, 64}, {16, 40}})).name() == "near-bent");
  CHECK(classify(spectrum_of(6, {{-16, 10}, {0, 48}, {16, 6}})).name() == "semi-bent");
  CHECK(classify(spectrum_of(9, {{-64, 4}, {0, 504}, {64, 4}})).name() == "3-plateaued");
  CHECK(classify(spectrum_of(6, {{-16, 10}, {-8, 6}, {0, 30}, {8, 18}})).name() == "four-valued");
  // Affine functions: r = n is not reported as plateaued.
  CHECK(classify(spectrum_of(6, {{0, 63}, {64, 1}})).name() == "other");
  CHECK(classify(spectrum_of(6, {{-8, 10}, {0, 30}, {8, 18}, {16, 5}, {24, 1}})).name() == "other");
  const SpectrumClass semi = classify(spectrum_of(6, {{-16, 10}, {0, 48}, {16, 6}}));
  CHECK(semi.is_semi_bent());
  CHECK(semi.r == 2);
}

TEST_CASE("truth table and spectrum I/O") {
  std::mt19937 rng(18);
  const Field field = FiniteField::create(5);
  const BooleanFunction f = random_function(field, rng);
  std::stringstream ss;
  write_truth_table(ss, f);
  CHECK(read_truth_table(ss) == f);

  std::istringstream bad_len("n=3\n0101\n");
  CHECK_THROWS_AS(read_truth_table(bad_len), Error);
  std::istringstream bad_char("n=2\n01x1\n");
  CHECK_THROWS_AS(read_truth_table(bad_char), Error);
  std::istringstream bad_header("m=2\n0101\n");
  CHECK_THROWS_AS(read_truth_table(bad_header), Error);

  std::ostringstream csv;
  write_spectrum_csv(csv, walsh_spectrum(trace_monomial(FiniteField::create(2), 1, 1)));
  CHECK(csv.str() == "gamma,value\n0,0\n1,4\n2,0\n3,0\n");
}

TEST_CASE("support and construction helpers") {
  const Field field = FiniteField::create(4);
  const std::vector<std::uint32_t> pts{1, 5, 9};
  const BooleanFunction f = BooleanFunction::from_support(field, pts);
  CHECK(f.weight() == 3);
  CHECK(f.support() == pts);
  CHECK(f.complement().weight() == 13);
  const std::vector<std::uint32_t> bad{16};
  CHECK_THROWS_AS(BooleanFunction::from_support(field, bad), Error);
}
